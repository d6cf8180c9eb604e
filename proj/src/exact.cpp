#include "bsc/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/integer/common_factor_rt.hpp>

#include "bsc/error.hpp"

namespace bsc {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

BigInt binomial(int n, int k) {
    BigInt c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

} // namespace

std::vector<Rational> eta_exact(int p) {
    if (p < 1) throw Error(ErrorKind::invalid_argument, "degree must be >= 1");
    std::vector<Rational> eta(static_cast<std::size_t>(p + 2));
    const BigInt scale = BigInt(1) << p;
    for (int i = 0; i <= p + 1; ++i) eta[static_cast<std::size_t>(i)] = Rational(binomial(p + 1, i), scale);
    return eta;
}

Matrix interior_block_exact(const LocalityParameters& params) {
    // Reuse the floating-point layout; every entry is an exact dyadic value of eta.
    const Eigen::MatrixXd pattern = build_interior_block(params);
    const auto eta = eta_exact(params.p);
    const auto etad = eta_vector(params.p);
    Matrix M(static_cast<std::size_t>(pattern.rows()), std::vector<Rational>(static_cast<std::size_t>(pattern.cols())));
    for (Eigen::Index i = 0; i < pattern.rows(); ++i)
        for (Eigen::Index j = 0; j < pattern.cols(); ++j) {
            const double v = pattern(i, j);
            if (v == 0.0) continue;
            bool found = false;
            for (std::size_t m = 0; m < etad.size() && !found; ++m)
                if (etad[m] == v) {
                    M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = eta[m];
                    found = true;
                }
            if (!found) throw Error(ErrorKind::solver_failure, "interior block entry is not an eta value");
        }
    return M;
}

std::vector<Rational> compute_omega_exact(const LocalityParameters& params) {
    const Matrix Ain = interior_block_exact(params);
    const std::size_t r = Ain.size(), q = Ain.front().size(), c = (q - 1) / 2;

    // Normal equations G y = e_c with G = A^T A; omega = A y.
    Matrix G(q, std::vector<Rational>(q + 1));
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j)
            for (std::size_t m = 0; m < r; ++m) G[i][j] += Ain[m][i] * Ain[m][j];
        G[i][q] = (i == c) ? 1 : 0;
    }
    for (std::size_t col = 0; col < q; ++col) {
        std::size_t piv = col;
        while (piv < q && G[piv][col] == 0) ++piv;
        if (piv == q) throw Error(ErrorKind::singular_system, "normal equations are singular");
        std::swap(G[piv], G[col]);
        for (std::size_t i = 0; i < q; ++i) {
            if (i == col || G[i][col] == 0) continue;
            const Rational f = G[i][col] / G[col][col];
            for (std::size_t j = col; j <= q; ++j) G[i][j] -= f * G[col][j];
        }
    }
    std::vector<Rational> y(q);
    for (std::size_t i = 0; i < q; ++i) y[i] = G[i][q] / G[i][i];

    std::vector<Rational> omega(r);
    for (std::size_t m = 0; m < r; ++m)
        for (std::size_t j = 0; j < q; ++j) omega[m] += Ain[m][j] * y[j];

    for (std::size_t j = 0; j < q; ++j) {
        Rational s = 0;
        for (std::size_t m = 0; m < r; ++m) s += Ain[m][j] * omega[m];
        if (s != (j == c ? 1 : 0)) throw Error(ErrorKind::solver_failure, "exact omega fails A_in^T omega = e_c");
    }
    return omega;
}

ScaledWeights scale_to_integers(const std::vector<Rational>& values) {
    BigInt den = 1;
    for (const auto& v : values) den = boost::integer::lcm(den, BigInt(denominator(v)));
    ScaledWeights w{den, {}};
    for (const auto& v : values) w.numerators.push_back(numerator(v) * (den / denominator(v)));
    return w;
}

std::string format_scaled(const ScaledWeights& w) {
    std::ostringstream os;
    os << "1/" << w.denominator << " * (";
    for (std::size_t i = 0; i < w.numerators.size(); ++i) os << (i ? ", " : "") << w.numerators[i];
    os << ")";
    return os.str();
}

Rational nearest_rational(double x, std::int64_t max_denominator) {
    if (!std::isfinite(x)) throw Error(ErrorKind::invalid_argument, "cannot approximate a non-finite value");
    // Convergents h/k of the continued fraction of x, stopping before k exceeds the cap.
    BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double rem = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(rem);
        const BigInt ai = static_cast<long long>(a);
        const BigInt h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_denominator) {
            // Semiconvergent with the largest admissible partial quotient may beat h1/k1.
            const BigInt j = (BigInt(max_denominator) - k0) / k1;
            if (j > 0) {
                const Rational exact(x);
                const Rational semi(j * h1 + h0, j * k1 + k0), conv(h1, k1);
                if (abs(semi - exact) < abs(conv - exact)) return semi;
            }
            break;
        }
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        const double frac = rem - a;
        if (frac < 1e-15) break;
        rem = 1.0 / frac;
    }
    return Rational(h1, k1);
}

std::vector<Rational> rationalize(std::span<const double> values, std::int64_t max_denominator) {
    std::vector<Rational> out;
    for (double v : values) out.push_back(nearest_rational(v, max_denominator));
    return out;
}

bool verify_omega_exact(const LocalityParameters& params, const std::vector<Rational>& omega) {
    const Matrix Ain = interior_block_exact(params);
    if (omega.size() != Ain.size()) return false;
    const std::size_t q = Ain.front().size(), c = (q - 1) / 2;
    for (std::size_t j = 0; j < q; ++j) {
        Rational s = 0;
        for (std::size_t m = 0; m < omega.size(); ++m) s += Ain[m][j] * omega[m];
        if (s != (j == c ? 1 : 0)) return false;
    }
    return true;
}

bool verify_left_inverse_rows(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& corner, int offset,
                              std::int64_t max_denominator) {
    if (rows.cols() != corner.rows()) return false;
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        for (Eigen::Index j = 0; j < corner.cols(); ++j) {
            Rational s = 0;
            for (Eigen::Index m = 0; m < rows.cols(); ++m) {
                if (corner(m, j) == 0.0) continue;
                s += nearest_rational(rows(i, m), max_denominator) * nearest_rational(corner(m, j), max_denominator);
            }
            if (s != (j == i + offset ? 1 : 0)) return false;
        }
    return true;
}

RationalMatrix to_rational(const Eigen::MatrixXd& M, std::int64_t max_denominator) {
    RationalMatrix out(static_cast<std::size_t>(M.rows()), std::vector<Rational>(static_cast<std::size_t>(M.cols())));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = nearest_rational(M(i, j), max_denominator);
    return out;
}

RationalMatrix pseudoinverse_rows_exact(const RationalMatrix& M, std::span<const int> rows) {
    if (M.empty()) throw Error(ErrorKind::invalid_argument, "empty matrix");
    const std::size_t m = M.size(), q = M.front().size();
    // Gauss-Jordan on [M^T M | M^T].
    Matrix G(q, std::vector<Rational>(q + m));
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j)
            for (std::size_t k = 0; k < m; ++k) G[i][j] += M[k][i] * M[k][j];
        for (std::size_t k = 0; k < m; ++k) G[i][q + k] = M[k][i];
    }
    for (std::size_t col = 0; col < q; ++col) {
        std::size_t piv = col;
        while (piv < q && G[piv][col] == 0) ++piv;
        if (piv == q) throw Error(ErrorKind::singular_system, "normal equations are singular");
        std::swap(G[piv], G[col]);
        const Rational d = G[col][col];
        for (auto& v : G[col]) v /= d;
        for (std::size_t i = 0; i < q; ++i) {
            if (i == col || G[i][col] == 0) continue;
            const Rational f = G[i][col];
            for (std::size_t j = col; j < q + m; ++j) G[i][j] -= f * G[col][j];
        }
    }
    RationalMatrix out;
    for (int r : rows) {
        if (r < 0 || static_cast<std::size_t>(r) >= q) throw Error(ErrorKind::invalid_argument, "pseudoinverse row out of range");
        out.emplace_back(G[static_cast<std::size_t>(r)].begin() + static_cast<std::ptrdiff_t>(q), G[static_cast<std::size_t>(r)].end());
    }
    return out;
}

double max_deviation(const RationalMatrix& exact, const Eigen::MatrixXd& approx) {
    if (static_cast<Eigen::Index>(exact.size()) != approx.rows()) return std::numeric_limits<double>::infinity();
    double dev = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        if (static_cast<Eigen::Index>(exact[i].size()) != approx.cols()) return std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < exact[i].size(); ++j)
            dev = std::max(dev, std::abs(exact[i][j].convert_to<double>() - approx(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
    return dev;
}

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << '/' << denominator(q);
    return os.str();
}

} // namespace bsc
