#include "bsc/splines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bsc/error.hpp"

namespace bsc {

KnotVector::KnotVector(double a, double b, int breakpoints, int degree)
    : a_(a), b_(b), N_(breakpoints), p_(degree) {
    if (breakpoints < 2)
        throw Error(ErrorKind::invalid_argument, "need at least 2 breakpoints");
    if (degree < 1)
        throw Error(ErrorKind::invalid_argument, "degree must be >= 1");
    if (!(a < b))
        throw Error(ErrorKind::invalid_argument, "interval requires a < b");
}

double KnotVector::breakpoint(int k) const noexcept {
    if (k <= 0) return a_;
    if (k >= N_ - 1) return b_;
    // (b-a)*k/(N-1): doubling k and N-1 together scales both operands by 2 exactly.
    return a_ + (b_ - a_) * static_cast<double>(k) / static_cast<double>(N_ - 1);
}

double KnotVector::knot(int i) const noexcept {
    return breakpoint(i - p_);
}

std::vector<double> KnotVector::knots() const {
    std::vector<double> out(static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = knot(i);
    return out;
}

int KnotVector::find_span(double x) const noexcept {
    const double h = (b_ - a_) / static_cast<double>(N_ - 1);
    int e = static_cast<int>(std::floor((x - a_) / h));
    e = std::clamp(e, 0, N_ - 2);
    while (e < N_ - 2 && breakpoint(e + 1) <= x) ++e;
    while (e > 0 && breakpoint(e) > x) --e;
    return e + p_;
}

KnotVector make_open_knot_vector(double a, double b, int breakpoints, int degree) {
    return KnotVector(a, b, breakpoints, degree);
}

KnotVector dyadic_refine(const KnotVector& kv) {
    return KnotVector(kv.a(), kv.b(), 2 * kv.breakpoint_count() - 1, kv.degree());
}

BasisEvaluation eval_basis(const SplineSpace& space, double x) {
    const KnotVector& kv = space.knots();
    const int p = kv.degree();
    const double tol = 1e-14 * (kv.b() - kv.a());
    if (x < kv.a() - tol || x > kv.b() + tol || std::isnan(x))
        throw Error(ErrorKind::out_of_domain, "x outside [a, b]");
    x = std::clamp(x, kv.a(), kv.b());

    const int mu = kv.find_span(x);
    BasisEvaluation ev;
    ev.x = x;
    ev.first_active = mu - p;
    ev.values.assign(static_cast<std::size_t>(p + 1), 0.0);

    // NURBS-book style triangle: N[j] holds B_{mu-k+j, k}(x).
    std::vector<double> left(static_cast<std::size_t>(p + 1)), right(static_cast<std::size_t>(p + 1));
    auto& N = ev.values;
    N[0] = 1.0;
    for (int k = 1; k <= p; ++k) {
        left[static_cast<std::size_t>(k)] = x - kv.knot(mu + 1 - k);
        right[static_cast<std::size_t>(k)] = kv.knot(mu + k) - x;
        double saved = 0.0;
        for (int r = 0; r < k; ++r) {
            const double denom = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(k - r)];
            const double temp = N[static_cast<std::size_t>(r)] / denom;
            N[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(k - r)] * temp;
        }
        N[static_cast<std::size_t>(k)] = saved;
    }
    return ev;
}

double evaluate(const SplineSpace& space, std::span<const double> coeffs, double x) {
    if (static_cast<int>(coeffs.size()) != space.dim())
        throw Error(ErrorKind::dimension_mismatch, "coefficient count differs from space dimension");
    const BasisEvaluation ev = eval_basis(space, x);
    double s = 0.0;
    for (std::size_t i = 0; i < ev.values.size(); ++i)
        s += coeffs[static_cast<std::size_t>(ev.first_active) + i] * ev.values[i];
    return s;
}

std::vector<QuadraturePoint> gauss_legendre(int m) {
    if (m < 1) throw Error(ErrorKind::invalid_argument, "quadrature needs at least one point");
    std::vector<QuadraturePoint> rule(static_cast<std::size_t>(m));
    // Newton iteration on P_m from the Chebyshev-like initial guess; roots are symmetric.
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[static_cast<std::size_t>(i)] = {-x, w};
        rule[static_cast<std::size_t>(m - 1 - i)] = {x, w};
    }
    if (m % 2 == 1) rule[static_cast<std::size_t>(m / 2)].node = 0.0;
    return rule;
}

std::vector<QuadraturePoint> gauss_points(const SplineSpace& space, int points_per_element) {
    const auto ref = gauss_legendre(points_per_element);
    const KnotVector& kv = space.knots();
    std::vector<QuadraturePoint> out;
    out.reserve(static_cast<std::size_t>(kv.element_count() * points_per_element));
    for (int e = 0; e < kv.element_count(); ++e) {
        const double lo = kv.breakpoint(e), hi = kv.breakpoint(e + 1);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (const auto& q : ref) out.push_back({mid + half * q.node, half * q.weight});
    }
    return out;
}

} // namespace bsc
