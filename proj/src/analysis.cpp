#include "bsc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bsc/error.hpp"
#include "bsc/io.hpp"

namespace bsc {

namespace {

using Matrix = Eigen::MatrixXd;

Eigen::Map<const Matrix> as_matrix(const CoefficientGrid& g) {
    return {g.data().data(), g.extent(0), g.extent(1)};
}

void require_2d(const CoefficientGrid& g, const TensorSpace& space) {
    if (g.dimensions() != 2 || space.dimensions() != 2 || g.shape() != space.shape())
        throw Error(ErrorKind::dimension_mismatch, "expected a 2D grid matching the tensor space");
}

void require_size(std::span<const double> c, const SplineSpace& space) {
    if (static_cast<int>(c.size()) != space.dim())
        throw Error(ErrorKind::dimension_mismatch, "coefficient count differs from the space dimension");
}

struct Quadrature {
    std::vector<double> nodes;
    Eigen::VectorXd weights;
};

Quadrature quadrature(const SplineSpace& space, int m) {
    const auto pts = gauss_points(space, m);
    Quadrature q;
    q.weights.resize(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) {
        q.nodes.push_back(pts[k].node);
        q.weights(static_cast<Eigen::Index>(k)) = pts[k].weight;
    }
    return q;
}

NormReport fill_report(int p, int r, int dims, int N, const Matrix& B, const Matrix& R, double omega2,
                       const SpectralOptions& options) {
    NormReport rep;
    rep.p = p;
    rep.r = r;
    rep.dims = dims;
    rep.coarse_breakpoints = N;
    rep.norm_B_inf = inf_norm(B);
    rep.norm_omega_2 = omega2;
    rep.norm_residual_2 = spectral_norm(R, options);
    rep.norm_residual_inf = inf_norm(R);
    return rep;
}

} // namespace

double inf_norm(const Eigen::MatrixXd& M) {
    return M.rows() ? M.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
}

double spectral_norm(const Eigen::MatrixXd& M, const SpectralOptions& options) {
    if (M.size() == 0) return 0.0;
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(M.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    v.normalize();

    double sigma = 0.0;
    for (int it = 0; it < options.max_iterations; ++it) {
        const Eigen::VectorXd w = M.transpose() * (M * v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        const double next = std::sqrt(v.dot(w));
        v = w / norm;
        if (it > 0 && std::abs(next - sigma) <= options.relative_tolerance * next) return next;
        sigma = next;
    }
    if (static_cast<double>(M.rows()) * static_cast<double>(M.cols()) > options.dense_cap)
        throw Error(ErrorKind::solver_failure, "power iteration did not converge and the matrix is too large for SVD");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
}

namespace {
/// Reports describe the omega band, so at least one interior row must exist.
CoarseningOperator banded_operator(const SubdivisionMatrix& A, int p, int r) {
    const LocalityParameters P = lookup_parameters(p, r);
    if (A.cols() < 2 * P.ell + 1)
        throw Error(ErrorKind::too_small_space, "need at least " + std::to_string(2 * P.ell + 1) + " coarse functions for an interior row");
    return assemble_left_inverse(A, P);
}
} // namespace

NormReport norm_report(int p, int r, int coarse_breakpoints, const SpectralOptions& options) {
    const SubdivisionMatrix A = build_subdivision_matrix(p, coarse_breakpoints);
    const CoarseningOperator op = banded_operator(A, p, r);
    const Matrix B = op.dense();
    const Matrix R = Matrix::Identity(A.rows(), A.rows()) - A.dense() * B;
    const auto& w = op.omega();
    return fill_report(p, r, 1, coarse_breakpoints, B, R, Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())).norm(), options);
}

NormReport norm_report_2d(int p, int r, int coarse_breakpoints, const SpectralOptions& options, double cap) {
    const SubdivisionMatrix A = build_subdivision_matrix(p, coarse_breakpoints);
    const CoarseningOperator op = banded_operator(A, p, r);
    const std::array<Matrix, 2> Bf{op.dense(), op.dense()};
    const std::array<Matrix, 2> Af{A.dense(), A.dense()};
    const Matrix B = materialize_kronecker(Bf, cap);
    const Matrix AA = materialize_kronecker(Af, cap);
    const Matrix R = Matrix::Identity(AA.rows(), AA.rows()) - AA * B;
    const auto& w = op.omega();
    return fill_report(p, r, 2, coarse_breakpoints, B, R, Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())).norm(), options);
}

Eigen::MatrixXd basis_matrix(const SplineSpace& space, std::span<const double> points) {
    Matrix M = Matrix::Zero(static_cast<Eigen::Index>(points.size()), space.dim());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto ev = eval_basis(space, points[k]);
        for (std::size_t m = 0; m < ev.values.size(); ++m)
            M(static_cast<Eigen::Index>(k), ev.first_active + static_cast<Eigen::Index>(m)) = ev.values[m];
    }
    return M;
}

GramMatrix::GramMatrix(const SplineSpace& space) : space_(space) {
    const int n = space.dim(), p = space.degree();
    Matrix band = Matrix::Zero(n, p + 1); // band(i, d) = G(i, i + d)
    for (const auto& qp : gauss_points(space, p + 1)) {
        const auto ev = eval_basis(space, qp.node);
        for (int a = 0; a <= p; ++a)
            for (int b = a; b <= p; ++b)
                band(ev.first_active + a, b - a) += qp.weight * ev.values[static_cast<std::size_t>(a)] * ev.values[static_cast<std::size_t>(b)];
    }
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < n; ++i)
        for (int d = 0; d <= p && i + d < n; ++d) {
            trips.emplace_back(i, i + d, band(i, d));
            if (d) trips.emplace_back(i + d, i, band(i, d));
        }
    matrix_.resize(n, n);
    matrix_.setFromTriplets(trips.begin(), trips.end());
    auto llt = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(matrix_);
    if (llt->info() != Eigen::Success) throw Error(ErrorKind::solver_failure, "Gram matrix is not positive definite");
    factor_ = std::move(llt);
}

double GramMatrix::operator()(int i, int j) const { return matrix_.coeff(i, j); }

Eigen::MatrixXd GramMatrix::solve(const Eigen::MatrixXd& rhs) const {
    if (rhs.rows() != size()) throw Error(ErrorKind::dimension_mismatch, "Gram solve: wrong right-hand side length");
    Matrix x = factor_->solve(rhs);
    if (factor_->info() != Eigen::Success) throw Error(ErrorKind::solver_failure, "Gram solve failed");
    return x;
}

GramMatrix gram_matrix(const SplineSpace& space) { return GramMatrix(space); }

Eigen::MatrixXd projection_matrix(const SubdivisionMatrix& A, const GramMatrix& coarse, const GramMatrix& fine) {
    if (A.rows() != fine.size() || A.cols() != coarse.size())
        throw Error(ErrorKind::dimension_mismatch, "projection: spaces do not match the subdivision matrix");
    const Matrix GA = fine.sparse() * A.dense();
    return coarse.solve(GA.transpose());
}

std::vector<double> l2_project_spline(std::span<const double> fine_coeffs, const SplineSpace& coarse,
                                      const SplineSpace& fine, const SubdivisionMatrix& A) {
    require_size(fine_coeffs, fine);
    if (!(fine == coarse.refined()) || A.rows() != fine.dim() || A.cols() != coarse.dim())
        throw Error(ErrorKind::mismatched_spaces, "projection needs a space and its dyadic refinement");
    const GramMatrix Gc(coarse), Gf(fine);
    const Eigen::Map<const Eigen::VectorXd> c(fine_coeffs.data(), static_cast<Eigen::Index>(fine_coeffs.size()));
    const Eigen::VectorXd Gc_f = Gf.apply(c);
    std::vector<double> rhs(static_cast<std::size_t>(A.cols()), 0.0);
    // A^T (G c) column by column from the banded storage.
    for (int j = 0; j < A.cols(); ++j) {
        const auto& run = A.column_run(j);
        for (std::size_t m = 0; m < run.size(); ++m) rhs[static_cast<std::size_t>(j)] += run[m] * Gc_f(A.first_row(j) + static_cast<Eigen::Index>(m));
    }
    const Eigen::VectorXd x = Gc.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size())));
    return {x.data(), x.data() + x.size()};
}

CoefficientGrid l2_project_spline(const CoefficientGrid& fine_coeffs, const TensorSpace& coarse, int threads) {
    if (fine_coeffs.shape() != coarse.refined().shape())
        throw Error(ErrorKind::dimension_mismatch, "grid does not match the refined tensor space");
    std::vector<Matrix> P;
    for (const auto& d : coarse.directions()) {
        const SplineSpace fine = d.refined();
        P.push_back(projection_matrix(build_subdivision_matrix(d, fine), GramMatrix(d), GramMatrix(fine)));
    }
    std::vector<ModeOperator> ops;
    for (const auto& M : P) ops.push_back(as_mode_operator(M));
    return apply_modes(fine_coeffs, ops, {}, threads);
}

std::vector<double> l2_project_function(const Function1D& f, const SplineSpace& space) {
    const auto q = quadrature(space, space.degree() + 3);
    const Matrix Phi = basis_matrix(space, q.nodes);
    Eigen::VectorXd fw(q.weights.size());
    for (Eigen::Index k = 0; k < fw.size(); ++k) fw(k) = q.weights(k) * f(q.nodes[static_cast<std::size_t>(k)]);
    const Eigen::VectorXd c = GramMatrix(space).solve(Phi.transpose() * fw);
    return {c.data(), c.data() + c.size()};
}

CoefficientGrid l2_project_function(const Function2D& f, const TensorSpace& space) {
    if (space.dimensions() != 2) throw Error(ErrorKind::dimension_mismatch, "expected a 2D tensor space");
    const auto& sx = space.direction(0);
    const auto& sy = space.direction(1);
    const auto qx = quadrature(sx, sx.degree() + 3), qy = quadrature(sy, sy.degree() + 3);
    Matrix F(qx.weights.size(), qy.weights.size());
    for (Eigen::Index j = 0; j < F.cols(); ++j)
        for (Eigen::Index i = 0; i < F.rows(); ++i)
            F(i, j) = qx.weights(i) * qy.weights(j) * f(qx.nodes[static_cast<std::size_t>(i)], qy.nodes[static_cast<std::size_t>(j)]);
    const Matrix load = basis_matrix(sx, qx.nodes).transpose() * F * basis_matrix(sy, qy.nodes);
    const Matrix X = GramMatrix(sx).solve(load);
    const Matrix C = GramMatrix(sy).solve(X.transpose()).transpose();
    return CoefficientGrid(space.shape(), std::vector<double>(C.data(), C.data() + C.size()));
}

namespace {
/// Error integrands of steep targets need more than the p+3 points used for loads.
int error_points(int p) { return 2 * p + 4; }
} // namespace

double spline_l2_norm(std::span<const double> coeffs, const GramMatrix& gram) {
    require_size(coeffs, gram.space());
    const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    return std::sqrt(std::max(0.0, c.dot(gram.apply(c))));
}

double l2_error(std::span<const double> coeffs, const SplineSpace& space, const Function1D& f) {
    require_size(coeffs, space);
    double sum = 0.0;
    for (const auto& qp : gauss_points(space, error_points(space.degree()))) {
        const double d = evaluate(space, coeffs, qp.node) - f(qp.node);
        sum += qp.weight * d * d;
    }
    return std::sqrt(sum);
}

double l2_error(const CoefficientGrid& coeffs, const TensorSpace& space, const Function2D& f) {
    require_2d(coeffs, space);
    const auto& sx = space.direction(0);
    const auto& sy = space.direction(1);
    const auto qx = quadrature(sx, error_points(sx.degree())), qy = quadrature(sy, error_points(sy.degree()));
    const Matrix S = basis_matrix(sx, qx.nodes) * as_matrix(coeffs) * basis_matrix(sy, qy.nodes).transpose();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < S.cols(); ++j)
        for (Eigen::Index i = 0; i < S.rows(); ++i) {
            const double d = S(i, j) - f(qx.nodes[static_cast<std::size_t>(i)], qy.nodes[static_cast<std::size_t>(j)]);
            sum += qx.weights(i) * qy.weights(j) * d * d;
        }
    return std::sqrt(sum);
}

std::vector<double> sample_points(const SplineSpace& space, int per_element) {
    if (per_element < 1) throw Error(ErrorKind::invalid_argument, "need at least one sample per element");
    const int count = space.knots().element_count() * per_element;
    std::vector<double> x(static_cast<std::size_t>(count + 1));
    for (int k = 0; k <= count; ++k)
        x[static_cast<std::size_t>(k)] = space.a() + (space.b() - space.a()) * k / count;
    return x;
}

CoefficientGrid sample_spline(const CoefficientGrid& coeffs, const TensorSpace& space, int per_element) {
    require_2d(coeffs, space);
    const auto xs = sample_points(space.direction(0), per_element), ys = sample_points(space.direction(1), per_element);
    const Matrix S = basis_matrix(space.direction(0), xs) * as_matrix(coeffs) * basis_matrix(space.direction(1), ys).transpose();
    return CoefficientGrid({static_cast<int>(S.rows()), static_cast<int>(S.cols())},
                           std::vector<double>(S.data(), S.data() + S.size()));
}

double linf_relative_error(std::span<const double> coeffs_a, std::span<const double> coeffs_b, const SplineSpace& space) {
    require_size(coeffs_a, space);
    require_size(coeffs_b, space);
    double diff = 0.0, ref = 0.0;
    for (double x : sample_points(space)) {
        const double vb = evaluate(space, coeffs_b, x);
        diff = std::max(diff, std::abs(evaluate(space, coeffs_a, x) - vb));
        ref = std::max(ref, std::abs(vb));
    }
    if (diff == 0.0) return 0.0;
    if (ref == 0.0) throw Error(ErrorKind::invalid_argument, "relative error against a zero reference");
    return diff / ref;
}

double linf_relative_error(const CoefficientGrid& coeffs_a, const CoefficientGrid& coeffs_b, const TensorSpace& space) {
    require_2d(coeffs_a, space);
    require_2d(coeffs_b, space);
    const auto sa = sample_spline(coeffs_a, space), sb = sample_spline(coeffs_b, space);
    const auto ma = as_matrix(sa), mb = as_matrix(sb);
    const double diff = (ma - mb).cwiseAbs().maxCoeff(), ref = mb.cwiseAbs().maxCoeff();
    if (diff == 0.0) return 0.0;
    if (ref == 0.0) throw Error(ErrorKind::invalid_argument, "relative error against a zero reference");
    return diff / ref;
}

std::string norm_reports_csv(std::span<const NormReport> reports) {
    const bool two_d = !reports.empty() && reports.front().dims == 2;
    std::ostringstream os;
    os << (two_d ? "p,r,B_inf,I-AB_2,I-AB_inf\n" : "p,r,B_inf,omega_2,I-AB_2,I-AB_inf\n");
    for (const auto& rep : reports) {
        if ((rep.dims == 2) != two_d) throw Error(ErrorKind::invalid_argument, "cannot mix 1D and 2D reports in one table");
        os << rep.p << ',' << rep.r << ',' << format_double(rep.norm_B_inf) << ',';
        if (!two_d) os << format_double(rep.norm_omega_2) << ',';
        os << format_double(rep.norm_residual_2) << ',' << format_double(rep.norm_residual_inf) << '\n';
    }
    return os.str();
}

nlohmann::json norm_reports_json(std::span<const NormReport> reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rep : reports) {
        nlohmann::json j = {{"p", rep.p}, {"r", rep.r}, {"dims", rep.dims}, {"coarse_breakpoints", rep.coarse_breakpoints},
                            {"B_inf", rep.norm_B_inf}, {"I-AB_2", rep.norm_residual_2}, {"I-AB_inf", rep.norm_residual_inf}};
        if (rep.dims == 1) j["omega_2"] = rep.norm_omega_2;
        rows.push_back(std::move(j));
    }
    return rows;
}

std::string error_curves_csv(std::span<const ErrorCurve> curves) {
    std::ostringstream os;
    os << "method,p,width,level,dofs,l2_error\n";
    for (const auto& c : curves)
        for (const auto& pt : c.points)
            os << c.method << ',' << c.p << ',' << c.width << ',' << pt.level << ',' << pt.dofs << ','
               << format_double(pt.l2_error) << '\n';
    return os.str();
}

nlohmann::json error_curves_json(std::span<const ErrorCurve> curves) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& pt : c.points) pts.push_back({{"level", pt.level}, {"dofs", pt.dofs}, {"l2_error", pt.l2_error}});
        out.push_back({{"method", c.method}, {"p", c.p}, {"width", c.width}, {"points", std::move(pts)}});
    }
    return out;
}

} // namespace bsc
