#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bsc/left_inverse.hpp"
#include "bsc/splines.hpp"
#include "bsc/subdivision.hpp"

namespace bsc {

/// Tensor product of univariate spline spaces, direction 0 first.
class TensorSpace {
public:
    explicit TensorSpace(std::vector<SplineSpace> directions);

    [[nodiscard]] std::size_t dimensions() const noexcept { return directions_.size(); }
    [[nodiscard]] const SplineSpace& direction(std::size_t d) const { return directions_.at(d); }
    [[nodiscard]] const std::vector<SplineSpace>& directions() const noexcept { return directions_; }
    [[nodiscard]] std::vector<int> shape() const;
    /// Product of the per-direction dimensions.
    [[nodiscard]] std::size_t dim() const noexcept;
    [[nodiscard]] TensorSpace refined() const;

    friend bool operator==(const TensorSpace&, const TensorSpace&) = default;

private:
    std::vector<SplineSpace> directions_;
};

/// D-dimensional coefficient array; the first index varies fastest, so data() is vec(C).
class CoefficientGrid {
public:
    explicit CoefficientGrid(std::vector<int> shape, double fill = 0.0);
    CoefficientGrid(std::vector<int> shape, std::vector<double> data);

    [[nodiscard]] const std::vector<int>& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t dimensions() const noexcept { return shape_.size(); }
    [[nodiscard]] int extent(std::size_t d) const { return shape_.at(d); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    /// Distance in data() between neighbours along direction d.
    [[nodiscard]] std::size_t stride(std::size_t d) const;

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] std::size_t linear_index(std::span<const int> index) const;
    [[nodiscard]] double& operator()(std::span<const int> index) { return data_[linear_index(index)]; }
    [[nodiscard]] double operator()(std::span<const int> index) const { return data_[linear_index(index)]; }
    /// 2D shorthand: row i (direction 0), column j (direction 1).
    [[nodiscard]] double& at(int i, int j);
    [[nodiscard]] double at(int i, int j) const;

    friend bool operator==(const CoefficientGrid&, const CoefficientGrid&) = default;

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

/// A linear map on one direction: y = M x with |x| = in_size, |y| = out_size.
struct ModeOperator {
    int in_size = 0;
    int out_size = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
};

ModeOperator as_mode_operator(const SubdivisionMatrix& A);
ModeOperator as_mode_operator(const CoarseningOperator& B);
ModeOperator as_mode_operator(const Eigen::MatrixXd& M);

/// Applies op along direction d to every fiber. threads > 1 splits fibers over worker threads;
/// the result does not depend on the thread count.
CoefficientGrid apply_mode(const CoefficientGrid& grid, std::size_t d, const ModeOperator& op, int threads = 1);

/// Applies one operator per direction; order lists the directions in application order
/// (empty means 0, 1, ..., D-1).
CoefficientGrid apply_modes(const CoefficientGrid& grid, std::span<const ModeOperator> ops,
                            std::span<const std::size_t> order = {}, int threads = 1);

/// C = (A_D x ... x A_1) vec(C_hat), one banded multiply per direction.
CoefficientGrid refine_grid(const CoefficientGrid& coarse, std::span<const SubdivisionMatrix> per_direction,
                            int threads = 1);

/// Kronecker product of per-direction coarsening operators.
class TensorCoarseningOperator {
public:
    explicit TensorCoarseningOperator(std::vector<CoarseningOperator> per_direction);

    [[nodiscard]] const std::vector<CoarseningOperator>& factors() const noexcept { return factors_; }
    [[nodiscard]] std::vector<int> in_shape() const;
    [[nodiscard]] std::vector<int> out_shape() const;

private:
    std::vector<CoarseningOperator> factors_;
};

/// Builds the same (p, r) operator in every direction.
TensorCoarseningOperator build_tensor_coarsening(int p, int r, std::span<const int> coarse_breakpoints);

CoefficientGrid coarsen_grid(const CoefficientGrid& fine, const TensorCoarseningOperator& op, int threads = 1);

/// Default cap on rows*cols of a materialized Kronecker product (20000 x 20000).
inline constexpr double kronecker_entry_cap = 4.0e8;

/// Dense factors[D-1] x ... x factors[0], ordered to act on vec() of a first-index-fastest grid.
/// Throws size-cap-exceeded when rows*cols exceeds cap.
Eigen::MatrixXd materialize_kronecker(std::span<const Eigen::MatrixXd> factors, double cap = kronecker_entry_cap);

} // namespace bsc
