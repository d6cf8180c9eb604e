#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bsc/left_inverse.hpp"

namespace bsc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// eta as exact fractions.
std::vector<Rational> eta_exact(int p);

/// A_in with exact entries.
std::vector<std::vector<Rational>> interior_block_exact(const LocalityParameters& params);

/// omega from the exact normal equations A_in^T A_in x = A_in^T e, then verified
/// against A_in^T omega = e_c. Throws singular-normal-equations or solver-failure.
std::vector<Rational> compute_omega_exact(const LocalityParameters& params);

/// omega = alpha * mu with alpha = 1 / lcm(denominators) and integer mu.
struct ScaledWeights {
    BigInt denominator;
    std::vector<BigInt> numerators;
};

ScaledWeights scale_to_integers(const std::vector<Rational>& values);

/// "1/40 * (3, -9, -1, ...)".
std::string format_scaled(const ScaledWeights& w);

/// Continued-fraction reconstruction of every entry.
std::vector<Rational> rationalize(std::span<const double> values, std::int64_t max_denominator = 10'000'000);

/// True when A_in^T omega equals the central unit vector in exact arithmetic.
bool verify_omega_exact(const LocalityParameters& params, const std::vector<Rational>& omega);

/// True when rows x corner = [I 0] exactly, i.e. the rows are the leading rows of a left inverse of corner.
/// offset shifts the identity block (use l - rows for bottom blocks).
bool verify_left_inverse_rows(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& corner, int offset,
                              std::int64_t max_denominator = 10'000'000);

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Exact copy of a matrix whose entries are short fractions (subdivision entries are dyadic).
RationalMatrix to_rational(const Eigen::MatrixXd& M, std::int64_t max_denominator = 10'000'000);

/// Selected rows of (M^T M)^{-1} M^T in exact arithmetic. Throws singular-normal-equations.
RationalMatrix pseudoinverse_rows_exact(const RationalMatrix& M, std::span<const int> rows);

/// Largest |exact - approx| over all entries.
double max_deviation(const RationalMatrix& exact, const Eigen::MatrixXd& approx);

std::string to_string(const Rational& q);

/// Best rational approximation of x with denominator <= max_denominator (continued fractions).
Rational nearest_rational(double x, std::int64_t max_denominator = 10'000'000);

} // namespace bsc
