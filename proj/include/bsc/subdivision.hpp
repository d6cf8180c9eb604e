#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bsc/splines.hpp"

namespace bsc {

/// eta_{i,p} = 2^-p * binom(p+1, i), i = 0..p+1: the fine-level weights of an interior coarse B-spline.
std::vector<double> eta_vector(int p);

/// Banded n x n_hat knot-insertion matrix A with c = A * c_hat.
///
/// Stored column by column: each column keeps the row of its first nonzero and
/// the contiguous run of at most p+2 entries.
class SubdivisionMatrix {
public:
    SubdivisionMatrix(int rows, int cols, int degree,
                      std::vector<int> first_row, std::vector<std::vector<double>> runs);

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }
    [[nodiscard]] int degree() const noexcept { return p_; }

    [[nodiscard]] int first_row(int col) const { return first_row_.at(static_cast<std::size_t>(col)); }
    [[nodiscard]] const std::vector<double>& column_run(int col) const {
        return runs_.at(static_cast<std::size_t>(col));
    }
    [[nodiscard]] double operator()(int row, int col) const;

    /// y = A x. Sizes must be cols() and rows().
    void apply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

    [[nodiscard]] Eigen::MatrixXd dense() const;

    [[nodiscard]] int in_size() const noexcept { return cols_; }
    [[nodiscard]] int out_size() const noexcept { return rows_; }

private:
    int rows_;
    int cols_;
    int p_;
    std::vector<int> first_row_;
    std::vector<std::vector<double>> runs_;
};

/// Knot-insertion matrix between a space and its dyadic refinement, built with
/// the discrete B-spline (Oslo) recurrence. Any N_hat >= 2 works.
SubdivisionMatrix build_subdivision_matrix(const SplineSpace& coarse, const SplineSpace& fine);

/// Convenience overload on [0, 1].
SubdivisionMatrix build_subdivision_matrix(int degree, int coarse_breakpoints);

/// c = A c_hat; throws dimension-mismatch.
std::vector<double> apply_subdivision(const SubdivisionMatrix& A, std::span<const double> coarse);

} // namespace bsc
