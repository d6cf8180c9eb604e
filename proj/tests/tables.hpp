#pragma once

// Reference data transcribed for the tests: locality parameters per (p, r), omega vectors as
// alpha * mu with the printed half completed by symmetry, and the reference norm tables.

#include <vector>

namespace ref {

struct ParamRow {
    int p, r, q, t, l, ell, z;
};

inline const std::vector<ParamRow> parameters = {
    {1, 3, 3, 2, 2, 1, 1},    {1, 5, 3, 2, 2, 1, 0},    {1, 7, 5, 4, 3, 2, 1},    {1, 9, 5, 4, 3, 2, 0},
    {2, 4, 3, 4, 3, 2, 2},    {2, 6, 5, 6, 4, 3, 3},    {2, 8, 5, 6, 4, 3, 2},    {2, 10, 7, 8, 5, 4, 3},
    {2, 12, 7, 8, 5, 4, 2},   {3, 5, 5, 8, 6, 4, 5},    {3, 7, 5, 8, 6, 4, 4},    {3, 9, 7, 10, 7, 5, 5},
    {3, 11, 7, 10, 7, 5, 4},  {3, 13, 9, 12, 8, 6, 5},  {3, 15, 9, 12, 8, 6, 4},  {4, 6, 5, 10, 7, 5, 6},
    {4, 8, 7, 12, 8, 6, 7},   {4, 10, 7, 12, 8, 6, 6},  {4, 12, 9, 14, 9, 7, 7},  {4, 14, 9, 14, 9, 7, 6},
    {4, 16, 11, 16, 10, 8, 7}, {4, 18, 11, 16, 10, 8, 6},
};

struct OmegaRow {
    int p, r;
    long long denominator;
    /// Printed entries; for p >= 3 only the leading half (through the centre).
    std::vector<long long> mu;
};

inline const std::vector<OmegaRow> omegas = {
    {1, 3, 1, {0, 1, 0}},
    {1, 5, 7, {-1, 2, 5, 2, -1}},
    {1, 7, 7, {0, -1, 2, 5, 2, -1, 0}},
    {1, 9, 41, {1, -2, -5, 12, 29, 12, -5, -2, 1}},
    {2, 4, 4, {-1, 3, 3, -1}},
    {2, 6, 4, {0, -1, 3, 3, -1, 0}},
    {2, 8, 40, {3, -9, -1, 27, 27, -1, -9, 3}},
    {2, 10, 40, {0, 3, -9, -1, 27, 27, -1, -9, 3, 0}},
    {2, 12, 364, {-9, 27, 3, -81, -1, 243, 243, -1, -81, 3, 27, -9}},
    {3, 5, 4, {0, -2, 8}},
    {3, 7, 196, {23, -92, 63, 208}},
    {3, 9, 196, {0, 23, -92, 63, 208}},
    {3, 11, 12038, {-569, 2276, -1833, -4048, 4479, 11428}},
    {3, 13, 12038, {0, -569, 2276, -1833, -4048, 4479, 11428}},
    {3, 15, 692104, {14351, -57404, 46919, 99344, -128105, -213916, 263423, 644480}},
    {4, 6, 16, {3, -15, 20}},
    {4, 8, 16, {0, 3, -15, 20}},
    {4, 10, 1936, {-130, 650, -937, -515, 1900}},
    {4, 12, 1936, {0, -130, 650, -937, -515, 1900}},
    {4, 14, 20704, {665, -3325, 4930, 1950, -9993, -2875, 19000}},
    {4, 16, 20704, {0, 665, -3325, 4930, 1950, -9993, -2875, 19000}},
};

/// Completes a printed half to the full symmetric vector of length r.
inline std::vector<long long> complete(const OmegaRow& row) {
    std::vector<long long> full = row.mu;
    if (static_cast<int>(full.size()) == row.r) return full;
    const bool odd = row.r % 2 == 1;
    for (int i = static_cast<int>(row.mu.size()) - (odd ? 2 : 1); i >= 0; --i) full.push_back(row.mu[static_cast<std::size_t>(i)]);
    return full;
}

struct Norm1D {
    int p, r;
    double B_inf, omega_2, res_2, res_inf;
};

inline const std::vector<Norm1D> norms_1d = {
    {1, 3, 1.00, 1.00, 1.41, 2.00},  {1, 5, 1.57, 0.85, 1.10, 1.86},  {1, 7, 1.57, 0.85, 1.09, 2.02},
    {1, 9, 1.68, 0.84, 1.09, 2.02},  {2, 4, 2.33, 1.12, 1.25, 1.58},  {2, 6, 2.29, 1.12, 1.25, 1.68},
    {2, 8, 2.29, 1.01, 1.07, 1.59},  {2, 10, 2.29, 1.01, 1.07, 1.62}, {2, 12, 2.29, 1.00, 1.06, 1.53},
    {3, 5, 3.10, 2.12, 3.16, 4.05},  {3, 7, 3.10, 1.34, 1.44, 3.20},  {3, 9, 3.26, 1.34, 1.42, 3.27},
    {3, 11, 3.26, 1.24, 1.33, 3.15}, {3, 13, 3.38, 1.24, 1.32, 3.19}, {3, 15, 3.38, 1.22, 1.31, 3.16},
    {4, 6, 4.75, 2.23, 2.30, 3.25},  {4, 8, 4.75, 2.23, 2.30, 3.25},  {4, 10, 4.53, 1.66, 1.41, 2.84},
    {4, 12, 4.48, 1.66, 1.40, 2.86}, {4, 14, 4.48, 1.54, 1.31, 2.68}, {4, 16, 4.46, 1.54, 1.31, 2.70},
    {4, 18, 4.46, 1.51, 1.29, 2.59},
};

struct Norm2D {
    int p, r;
    double B_inf, res_2, res_inf;
};

inline const std::vector<Norm2D> norms_2d = {
    {1, 3, 1.00, 1.98, 2.00},    {1, 5, 2.47, 1.22, 2.61},    {1, 7, 2.47, 1.18, 2.85},    {1, 9, 2.83, 1.18, 3.00},
    {2, 4, 5.44, 1.55, 3.12},    {2, 6, 5.25, 1.55, 3.14},    {2, 8, 5.25, 1.15, 2.95},    {2, 10, 5.23, 1.14, 2.90},
    {2, 12, 5.23, 1.13, 2.83},   {3, 5, 9.62, 9.94, 10.19},   {3, 7, 9.62, 2.06, 5.86},    {3, 9, 10.64, 2.01, 6.26},
    {3, 11, 10.64, 1.76, 5.97},  {3, 13, 11.40, 1.75, 6.20},  {3, 15, 11.40, 1.71, 6.11},  {4, 6, 22.56, 4.96, 11.77},
    {4, 8, 22.56, 4.84, 11.94},  {4, 10, 20.55, 2.01, 7.84},  {4, 12, 20.11, 2.24, 7.88},  {4, 14, 20.11, 1.71, 7.26},
    {4, 16, 19.90, 2.22, 7.35},  {4, 18, 19.90, 2.22, 6.89},
};

} // namespace ref
