#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <json.hpp>

#include "bsc/left_inverse.hpp"
#include "bsc/splines.hpp"
#include "bsc/subdivision.hpp"
#include "bsc/tensor.hpp"

namespace bsc {

/// Stability and accuracy figures of one coarsening operator.
struct NormReport {
    int p = 0;
    int r = 0;
    int dims = 1;
    /// Coarse breakpoints per direction used for the measurement.
    int coarse_breakpoints = 0;
    double norm_B_inf = 0.0;
    double norm_omega_2 = 0.0;
    double norm_residual_2 = 0.0;
    double norm_residual_inf = 0.0;
};

/// Maximum absolute row sum.
double inf_norm(const Eigen::MatrixXd& M);

struct SpectralOptions {
    double relative_tolerance = 1e-8;
    int max_iterations = 10000;
    std::uint64_t seed = 20240917;
    /// Largest rows*cols handed to the dense SVD fallback.
    double dense_cap = 4.0e8;
};

/// Largest singular value by power iteration on M^T M, with a dense SVD when it does not converge.
double spectral_norm(const Eigen::MatrixXd& M, const SpectralOptions& options = {});

/// 1D norms of B and I - AB for the space with the given coarse breakpoints on [0, 1].
NormReport norm_report(int p, int r, int coarse_breakpoints, const SpectralOptions& options = {});

/// Norms of B x B and I - (A x A)(B x B) through dense Kronecker products.
NormReport norm_report_2d(int p, int r, int coarse_breakpoints, const SpectralOptions& options = {},
                          double cap = kronecker_entry_cap);

/// Dense basis values: row k holds beta_j(points[k]).
Eigen::MatrixXd basis_matrix(const SplineSpace& space, std::span<const double> points);

/// Banded SPD mass matrix G_ij = integral of beta_i beta_j, with a cached Cholesky factorization.
class GramMatrix {
public:
    explicit GramMatrix(const SplineSpace& space);

    [[nodiscard]] const SplineSpace& space() const noexcept { return space_; }
    [[nodiscard]] int size() const noexcept { return space_.dim(); }
    [[nodiscard]] int bandwidth() const noexcept { return space_.degree(); }
    [[nodiscard]] double operator()(int i, int j) const;
    [[nodiscard]] const Eigen::SparseMatrix<double>& sparse() const noexcept { return matrix_; }
    [[nodiscard]] Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }

    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix_ * x; }
    /// Solves G x = rhs column by column.
    [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

private:
    SplineSpace space_;
    Eigen::SparseMatrix<double> matrix_;
    std::shared_ptr<const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> factor_;
};

GramMatrix gram_matrix(const SplineSpace& space);

/// Dense P = G_coarse^{-1} A^T G_fine, the L2 projection of fine splines onto the coarse space.
Eigen::MatrixXd projection_matrix(const SubdivisionMatrix& A, const GramMatrix& coarse, const GramMatrix& fine);

std::vector<double> l2_project_spline(std::span<const double> fine_coeffs, const SplineSpace& coarse,
                                      const SplineSpace& fine, const SubdivisionMatrix& A);
/// Tensor version, applied one direction at a time.
CoefficientGrid l2_project_spline(const CoefficientGrid& fine_coeffs, const TensorSpace& coarse, int threads = 1);

using Function1D = std::function<double(double)>;
using Function2D = std::function<double(double, double)>;

std::vector<double> l2_project_function(const Function1D& f, const SplineSpace& space);
CoefficientGrid l2_project_function(const Function2D& f, const TensorSpace& space);

/// L2 norm of the spline with the given coefficients, via its Gram matrix.
double spline_l2_norm(std::span<const double> coeffs, const GramMatrix& gram);

/// L2 distance between a spline and f, Gauss quadrature with 2p+4 points per element and direction.
double l2_error(std::span<const double> coeffs, const SplineSpace& space, const Function1D& f);
double l2_error(const CoefficientGrid& coeffs, const TensorSpace& space, const Function2D& f);

/// Points a + k h / per_element for every element, endpoint included.
std::vector<double> sample_points(const SplineSpace& space, int per_element = 10);

/// Spline values on the sample_points grid of each direction.
CoefficientGrid sample_spline(const CoefficientGrid& coeffs, const TensorSpace& space, int per_element = 10);

/// max |s_a - s_b| / max |s_b| over sample_points (10 per element and direction).
double linf_relative_error(std::span<const double> coeffs_a, std::span<const double> coeffs_b, const SplineSpace& space);
double linf_relative_error(const CoefficientGrid& coeffs_a, const CoefficientGrid& coeffs_b, const TensorSpace& space);

struct CurvePoint {
    int level = 0;
    long long dofs = 0;
    double l2_error = 0.0;
};

/// Error per coarsening level. width == 0 tags the L2 projection baseline.
struct ErrorCurve {
    std::string method;
    int p = 0;
    int width = 0;
    std::vector<CurvePoint> points;
};

std::string norm_reports_csv(std::span<const NormReport> reports);
nlohmann::json norm_reports_json(std::span<const NormReport> reports);
std::string error_curves_csv(std::span<const ErrorCurve> curves);
nlohmann::json error_curves_json(std::span<const ErrorCurve> curves);

} // namespace bsc
