#pragma once

// Exact integer and rational linear algebra. Integers and rationals are GMP
// values; every routine here is pure and allocation is the only side effect.

#include <gmpxx.h>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace momentcut {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;
using IntMatrix = std::vector<IntVector>;  // row-major
using RatMatrix = std::vector<RatVector>;  // row-major

/// Builds num/den in lowest terms with a positive denominator.
Rational make_rational(const Integer& num, const Integer& den);

/// "p/q" with q > 0, or "p" when the value is an integer.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Inverse of to_string. Accepts a non-reduced "p/q" and normalizes it.
/// Decimal input ("0.25") is rejected with the exact fraction as a suggestion.
Rational parse_rational(std::string_view text);

/// gcd of the absolute values of the entries; 0 for the zero vector.
Integer content(std::span<const Integer> v);

/// v divided by the gcd of its entries. Throws ZeroVector on v = 0.
IntVector primitive(std::span<const Integer> v);

/// Smallest positive integer multiple of a rational vector, made primitive.
IntVector primitive_integer_direction(std::span<const Rational> v);

Integer dot(std::span<const Integer> a, std::span<const Integer> b);
Rational dot(std::span<const Integer> a, std::span<const Rational> b);

/// Fraction-free (Bareiss) determinant of a square integer matrix.
Integer determinant(IntMatrix m);

/// Determinant of a square rational matrix (rows scaled to integers first).
Rational determinant(const RatMatrix& m);

/// |det| of the n vectors as rows; std::nullopt when they are dependent.
/// Requires exactly n vectors of length n (DimensionMismatch otherwise).
std::optional<Integer> lattice_index(std::span<const IntVector> vs);

/// True iff every entry of the sum of the vectors is even.
bool half_sum_integral(std::span<const IntVector> vs);

/// Exact solve of the square system A x = b; std::nullopt when A is singular.
std::optional<RatVector> solve_exact(const RatMatrix& a, const RatVector& b);

/// Rank over Q.
std::size_t rank(const RatMatrix& m);
std::size_t rank(const IntMatrix& m);

struct SmithForm {
  std::vector<Integer> diagonal;  // d_1 | d_2 | ..., length min(rows, cols)
  IntMatrix left;                 // rows x rows, unimodular
  IntMatrix right;                // cols x cols, unimodular
};

/// left * A * right == diag(diagonal) (padded with zeros).
SmithForm smith_normal_form(const IntMatrix& a);

/// Inverse of an integer matrix with determinant +-1; throws NotUnimodular.
IntMatrix unimodular_inverse(const IntMatrix& a);

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& a);
IntMatrix identity_matrix(std::size_t n);

}  // namespace momentcut
