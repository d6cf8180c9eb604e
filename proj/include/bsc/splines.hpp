#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bsc {

/// Open (p+1)-regular knot vector over [a, b] with uniformly spaced breakpoints.
///
/// Knots are not stored; they are materialized from the breakpoint index and the
/// interval so that a breakpoint shared by a coarse vector and its dyadic
/// refinement compares bit-for-bit equal.
class KnotVector {
public:
    KnotVector(double a, double b, int breakpoints, int degree);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] int degree() const noexcept { return p_; }
    [[nodiscard]] int breakpoint_count() const noexcept { return N_; }
    [[nodiscard]] int element_count() const noexcept { return N_ - 1; }
    /// Number of B-splines, p + N - 1.
    [[nodiscard]] int dim() const noexcept { return p_ + N_ - 1; }
    /// Number of knots, dim() + p + 1.
    [[nodiscard]] int size() const noexcept { return dim() + p_ + 1; }

    [[nodiscard]] double breakpoint(int k) const noexcept;
    /// Knot with 0-based index i.
    [[nodiscard]] double knot(int i) const noexcept;
    [[nodiscard]] std::vector<double> knots() const;

    /// Knot index mu with knot(mu) <= x < knot(mu+1), p <= mu <= dim()-1.
    /// x == b maps to the last nonempty span.
    [[nodiscard]] int find_span(double x) const noexcept;

    friend bool operator==(const KnotVector&, const KnotVector&) = default;

private:
    double a_;
    double b_;
    int N_;
    int p_;
};

/// make_open_knot_vector(a, b, N, p); throws Error(invalid_argument).
KnotVector make_open_knot_vector(double a, double b, int breakpoints, int degree);

/// Inserts the midpoint of every knot span: N -> 2N - 1.
KnotVector dyadic_refine(const KnotVector& kv);

/// Maximum-smoothness spline space spanned by the B-splines of a knot vector.
class SplineSpace {
public:
    explicit SplineSpace(KnotVector knots) : knots_(knots) {}
    SplineSpace(double a, double b, int breakpoints, int degree)
        : knots_(make_open_knot_vector(a, b, breakpoints, degree)) {}

    [[nodiscard]] const KnotVector& knots() const noexcept { return knots_; }
    [[nodiscard]] int dim() const noexcept { return knots_.dim(); }
    [[nodiscard]] int degree() const noexcept { return knots_.degree(); }
    [[nodiscard]] double a() const noexcept { return knots_.a(); }
    [[nodiscard]] double b() const noexcept { return knots_.b(); }

    [[nodiscard]] SplineSpace refined() const { return SplineSpace(dyadic_refine(knots_)); }

    friend bool operator==(const SplineSpace&, const SplineSpace&) = default;

private:
    KnotVector knots_;
};

/// The p+1 B-splines that can be nonzero at x, starting at index first_active (0-based).
struct BasisEvaluation {
    double x = 0.0;
    int first_active = 0;
    std::vector<double> values;
};

/// Evaluates the active B-splines at x with the local triangular recurrence.
/// Points within 1e-14*(b-a) outside [a, b] are clamped; others raise out-of-domain.
BasisEvaluation eval_basis(const SplineSpace& space, double x);

/// Value of sum_i coeffs[i] * beta_i(x).
double evaluate(const SplineSpace& space, std::span<const double> coeffs, double x);

struct QuadraturePoint {
    double node;
    double weight;
};

/// Gauss-Legendre rule with m points on [-1, 1].
std::vector<QuadraturePoint> gauss_legendre(int m);

/// Gauss-Legendre rule mapped onto every knot span, ordered by element.
std::vector<QuadraturePoint> gauss_points(const SplineSpace& space, int points_per_element);

} // namespace bsc
