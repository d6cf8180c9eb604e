#pragma once

#include <string>
#include <vector>

#include "bsc/analysis.hpp"
#include "bsc/tensor.hpp"

namespace bsc {

/// arctan(5[(4x-3.5)^2 + (4y-3)^2 - 5]): a steep ring inside the unit square.
double arctan_ring(double x, double y);

/// Tabulated widths for degree p, ascending.
std::vector<int> tabulated_widths(int p);

/// Norm table rows for the given degrees, in table order. threads > 1 computes rows concurrently.
std::vector<NormReport> norm_table(std::span<const int> degrees, int dims, int coarse_breakpoints, int threads = 1,
                                   const SpectralOptions& options = {});

struct CurveConfig {
    int p = 2;
    std::vector<int> widths;
    /// Elements per direction of the finest space on [0, 1]^2.
    int fine_elements = 128;
    int levels = 4;
    Function2D f = arctan_ring;
    int threads = 1;
};

/// Projects f onto the finest space and coarsens it levels times with each width. The first
/// curve is the L2 projection of f onto every level; level 0 is the finest space.
std::vector<ErrorCurve> coarsening_curves(const CurveConfig& config);

/// Fine coefficient indices (i - ci)^2 + (j - cj)^2 <= radius^2 carry the value 1, all others 0.
struct LocalizedRegion {
    double center_i = 30.5;
    double center_j = 30.5;
    double radius = 17.0;
};

struct LocalizedConfig {
    int p = 2;
    std::vector<int> widths{6, 8};
    int fine_elements = 40;
    LocalizedRegion region;
};

struct LocalizedResult {
    std::string method;
    int width = 0;
    /// Share of fine coefficients c with |c - A c_hat| > 1e-12.
    double modified_fraction = 0.0;
    double linf_relative = 0.0;
    CoefficientGrid coarse{{1}};
    /// c - A c_hat on the fine grid.
    CoefficientGrid error_coefficients{{1}};
};

CoefficientGrid localized_coefficients(int n, const LocalizedRegion& region);

/// One coarsening of the localized spline by L2 projection and by each width.
std::vector<LocalizedResult> localized_experiment(const LocalizedConfig& config);

} // namespace bsc
