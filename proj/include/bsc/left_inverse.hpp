#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bsc/subdivision.hpp"

namespace bsc {

/// Shape parameters of the local least-squares left inverse for degree p.
///
/// r = p + 2 + 2k is the locality width (nonzeros per interior row of B),
/// A_in is r x q, the corner blocks A_tl/A_br are t x l and serve the first/last
/// ell coarse indices, and z zeros precede omega in row ell+1 of B.
struct LocalityParameters {
    int p = 0;
    int r = 0;
    int k = 0;
    int q = 0;
    int t = 0;
    int l = 0;
    int ell = 0;
    int z = 0;

    friend bool operator==(const LocalityParameters&, const LocalityParameters&) = default;
};

/// The published configurations for p = 1..4 (22 rows).
std::span<const LocalityParameters> tabulated_parameters();

/// Column count of A_in from the parity rule.
int interior_column_count(int p, int r);

/// Tabulated row for (p, r); falls back to derive_parameters when the pair is not
/// tabulated and derivation is allowed, otherwise throws unsupported-width.
LocalityParameters lookup_parameters(int p, int r, bool allow_derivation = true);

/// Searches for the configuration: smallest ell for which the interior window
/// reproduces A_in, z from the row-offset identity, t = 2*ell (grown if the
/// corner block is rank deficient) and l from the nonzero columns of rows 1..t.
LocalityParameters derive_parameters(int p, int r);

/// A_in (r x q): the central column carries eta, neighbours shift by two rows.
Eigen::MatrixXd build_interior_block(const LocalityParameters& params);

struct CornerBlocks {
    Eigen::MatrixXd top_left;
    Eigen::MatrixXd bottom_right;
};

/// A_tl = A[0..t, 0..l) and A_br = A[n-t..n, n_hat-l..n_hat). For spaces too small
/// for the tabulated block, t is clipped to n and l to the nonzero columns.
CornerBlocks build_corner_blocks(const SubdivisionMatrix& A, const LocalityParameters& params);

/// Selected rows of (M^T M)^{-1} M^T via a column-pivoted QR of M.
/// Throws rank-deficient when M lacks full column rank.
Eigen::MatrixXd pseudoinverse_rows(const Eigen::MatrixXd& M, std::span<const int> rows);

/// Central row of the pseudoinverse of A_in (length r).
std::vector<double> compute_omega(int p, int r);
std::vector<double> compute_omega(const LocalityParameters& params);

/// Banded left inverse B (n_hat x n) of a subdivision matrix.
///
/// Rows [0, top_rows) come from the top-left pseudoinverse block and act on
/// columns [0, block_width); rows [n_hat - bottom_rows, n_hat) mirror that at
/// the bottom-right. Every interior row j is omega placed at column
/// z + 2 (j - ell).
class CoarseningOperator {
public:
    CoarseningOperator(LocalityParameters params, int n_coarse, int n_fine,
                       Eigen::MatrixXd top, Eigen::MatrixXd bottom, std::vector<double> omega);

    [[nodiscard]] const LocalityParameters& params() const noexcept { return params_; }
    [[nodiscard]] int n_coarse() const noexcept { return n_coarse_; }
    [[nodiscard]] int n_fine() const noexcept { return n_fine_; }
    [[nodiscard]] int degree() const noexcept { return params_.p; }
    [[nodiscard]] int width() const noexcept { return params_.r; }

    [[nodiscard]] const Eigen::MatrixXd& top_block() const noexcept { return top_; }
    [[nodiscard]] const Eigen::MatrixXd& bottom_block() const noexcept { return bottom_; }
    [[nodiscard]] const std::vector<double>& omega() const noexcept { return omega_; }
    [[nodiscard]] int top_rows() const noexcept { return static_cast<int>(top_.rows()); }
    [[nodiscard]] int bottom_rows() const noexcept { return static_cast<int>(bottom_.rows()); }
    [[nodiscard]] int interior_rows() const noexcept { return n_coarse_ - top_rows() - bottom_rows(); }
    /// First fine column touched by interior row j.
    [[nodiscard]] int interior_offset(int row) const noexcept { return params_.z + 2 * (row - params_.ell); }

    /// y = B x. Sizes must be n_fine() and n_coarse().
    void apply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
    [[nodiscard]] Eigen::MatrixXd dense() const;

    [[nodiscard]] int in_size() const noexcept { return n_fine_; }
    [[nodiscard]] int out_size() const noexcept { return n_coarse_; }

private:
    LocalityParameters params_;
    int n_coarse_;
    int n_fine_;
    Eigen::MatrixXd top_;
    Eigen::MatrixXd bottom_;
    std::vector<double> omega_;
};

/// Assembles B from the corner pseudoinverses and omega.
CoarseningOperator assemble_left_inverse(const SubdivisionMatrix& A, const LocalityParameters& params);

/// Builds A on [0, 1] with the given coarse breakpoints and assembles B.
CoarseningOperator build_coarsening_operator(int p, int r, int coarse_breakpoints);

std::vector<double> apply_coarsening(const CoarseningOperator& op, std::span<const double> fine);

/// Absolute threshold separating structural zeros from assembly dust.
inline constexpr double nonzero_threshold = 1e-13;

int count_nonzeros(std::span<const double> v, double threshold = nonzero_threshold);

/// Number of nonzero entries in each column of B, i.e. the coarse ancestors of each fine B-spline.
std::vector<int> ancestor_counts(const CoarseningOperator& op);

} // namespace bsc
