#include "bsc/subdivision.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "bsc/error.hpp"

namespace bsc {

using Rational = boost::multiprecision::cpp_rational;

std::vector<double> eta_vector(int p) {
    if (p < 1) throw Error(ErrorKind::invalid_argument, "degree must be >= 1");
    std::vector<double> eta(static_cast<std::size_t>(p + 2));
    double binom = 1.0;
    const double scale = std::ldexp(1.0, -p);
    for (int i = 0; i <= p + 1; ++i) {
        eta[static_cast<std::size_t>(i)] = binom * scale;
        binom = binom * (p + 1 - i) / (i + 1);
    }
    return eta;
}

SubdivisionMatrix::SubdivisionMatrix(int rows, int cols, int degree, std::vector<int> first_row,
                                     std::vector<std::vector<double>> runs)
    : rows_(rows), cols_(cols), p_(degree), first_row_(std::move(first_row)), runs_(std::move(runs)) {
    if (static_cast<int>(first_row_.size()) != cols_ || static_cast<int>(runs_.size()) != cols_)
        throw Error(ErrorKind::dimension_mismatch, "column metadata does not match column count");
    for (int j = 0; j < cols_; ++j) {
        const auto& run = runs_[static_cast<std::size_t>(j)];
        const int f = first_row_[static_cast<std::size_t>(j)];
        if (f < 0 || f + static_cast<int>(run.size()) > rows_)
            throw Error(ErrorKind::dimension_mismatch, "column run exceeds matrix rows");
    }
}

double SubdivisionMatrix::operator()(int row, int col) const {
    const auto& run = column_run(col);
    const int off = row - first_row(col);
    if (off < 0 || off >= static_cast<int>(run.size())) return 0.0;
    return run[static_cast<std::size_t>(off)];
}

void SubdivisionMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
        throw Error(ErrorKind::dimension_mismatch, "subdivision apply: wrong vector length");
    std::fill(y.begin(), y.end(), 0.0);
    for (int j = 0; j < cols_; ++j) {
        const double xj = x[static_cast<std::size_t>(j)];
        const auto& run = runs_[static_cast<std::size_t>(j)];
        const auto f = static_cast<std::size_t>(first_row_[static_cast<std::size_t>(j)]);
        for (std::size_t k = 0; k < run.size(); ++k) y[f + k] += run[k] * xj;
    }
}

std::vector<double> SubdivisionMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(rows_));
    apply(x, y);
    return y;
}

Eigen::MatrixXd SubdivisionMatrix::dense() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int j = 0; j < cols_; ++j) {
        const auto& run = column_run(j);
        for (std::size_t k = 0; k < run.size(); ++k) M(first_row(j) + static_cast<int>(k), j) = run[k];
    }
    return M;
}

SubdivisionMatrix build_subdivision_matrix(const SplineSpace& coarse, const SplineSpace& fine) {
    const KnotVector& tau = coarse.knots();
    const KnotVector& t = fine.knots();
    if (!(t == dyadic_refine(tau)))
        throw Error(ErrorKind::mismatched_spaces, "fine space is not the dyadic refinement of the coarse space");
    const int p = tau.degree();

    const int n = t.dim();
    const int nc = tau.dim();

    // Row i of A holds the discrete B-splines alpha_j(i): the blossoms of the coarse
    // B-splines evaluated at the fine knots t_{i+1..i+p}. Knots are uniform, so the recurrence
    // runs exactly on integer positions measured in fine steps and is rounded once at the end.
    const int Nc = tau.breakpoint_count(), Nf = t.breakpoint_count();
    const auto coarse_pos = [&](int j) { return 2 * std::clamp(j - p, 0, Nc - 1); };
    const auto fine_pos = [&](int i) { return std::clamp(i - p, 0, Nf - 1); };

    std::vector<std::vector<double>> dense_rows(static_cast<std::size_t>(n));
    std::vector<int> row_start(static_cast<std::size_t>(n));
    std::vector<Rational> b, nb;
    for (int i = 0; i < n; ++i) {
        const int mu = tau.find_span(t.knot(i));
        b.assign(1, Rational(1));
        for (int k = 1; k <= p; ++k) {
            const int x = fine_pos(i + k);
            nb.assign(static_cast<std::size_t>(k + 1), Rational(0));
            // b[m] holds the weight of coarse index mu-k+1+m.
            for (int m = 0; m < k; ++m) {
                const int j = mu - k + 1 + m;
                const Rational w(x - coarse_pos(j), coarse_pos(j + k) - coarse_pos(j));
                nb[static_cast<std::size_t>(m)] += (1 - w) * b[static_cast<std::size_t>(m)];
                nb[static_cast<std::size_t>(m + 1)] += w * b[static_cast<std::size_t>(m)];
            }
            b.swap(nb);
        }
        auto& row = dense_rows[static_cast<std::size_t>(i)];
        for (const auto& v : b) row.push_back(v.convert_to<double>());
        row_start[static_cast<std::size_t>(i)] = mu - p;
    }

    // Transpose the row runs into column runs, trimming exact zeros at both ends.
    std::vector<int> first(static_cast<std::size_t>(nc), -1);
    std::vector<int> last(static_cast<std::size_t>(nc), -1);
    for (int i = 0; i < n; ++i) {
        const auto& row = dense_rows[static_cast<std::size_t>(i)];
        for (std::size_t m = 0; m < row.size(); ++m) {
            if (row[m] == 0.0) continue;
            const auto j = static_cast<std::size_t>(row_start[static_cast<std::size_t>(i)] + static_cast<int>(m));
            if (first[j] < 0) first[j] = i;
            last[j] = i;
        }
    }
    std::vector<std::vector<double>> runs(static_cast<std::size_t>(nc));
    for (int j = 0; j < nc; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        auto& run = runs[ju];
        run.assign(static_cast<std::size_t>(last[ju] - first[ju] + 1), 0.0);
        for (int i = first[ju]; i <= last[ju]; ++i) {
            const int m = j - row_start[static_cast<std::size_t>(i)];
            const auto& row = dense_rows[static_cast<std::size_t>(i)];
            if (m >= 0 && m < static_cast<int>(row.size()))
                run[static_cast<std::size_t>(i - first[ju])] = row[static_cast<std::size_t>(m)];
        }
    }
    return SubdivisionMatrix(n, nc, p, std::move(first), std::move(runs));
}

SubdivisionMatrix build_subdivision_matrix(int degree, int coarse_breakpoints) {
    const SplineSpace coarse(0.0, 1.0, coarse_breakpoints, degree);
    return build_subdivision_matrix(coarse, coarse.refined());
}

std::vector<double> apply_subdivision(const SubdivisionMatrix& A, std::span<const double> coarse) {
    return A.apply(coarse);
}

} // namespace bsc
