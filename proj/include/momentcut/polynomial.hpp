#pragma once

// Univariate polynomials over Q with exact real-root isolation by Sturm
// sequences.

#include <span>
#include <string>
#include <vector>

#include "momentcut/lattice.hpp"

namespace momentcut {

class Polynomial {
 public:
  Polynomial() = default;
  /// Coefficients in ascending degree; trailing zeros are trimmed.
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial constant(const Rational& c);
  static Polynomial x();

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& s) const;
  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  Rational integrate(const Rational& a, const Rational& b) const;
  /// p(x + h).
  Polynomial shifted(const Rational& h) const;
  /// p(-x).
  Polynomial mirrored() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& k, const Polynomial& a);
  Polynomial operator-() const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<Rational> c_;
};

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

/// Euclidean division; throws Precondition on division by zero.
DivMod divmod(const Polynomial& a, const Polynomial& b);
/// Monic gcd (zero when both are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);
/// p / gcd(p, p'), monic.
Polynomial square_free(const Polynomial& p);

/// Unique polynomial of degree < xs.size() through the points (Lagrange).
Polynomial interpolate(std::span<const Rational> xs, std::span<const Rational> ys);

std::vector<Polynomial> sturm_sequence(const Polynomial& p);

/// Number of distinct real roots in (a, b] (Sturm); a < b.
std::size_t count_roots(const std::vector<Polynomial>& sturm, const Rational& a, const Rational& b);

/// A real root isolated in (lo, hi), or known exactly when lo == hi.
struct RootInterval {
  Rational lo, hi;
  bool exact() const { return lo == hi; }
};

/// Distinct real roots of p in the open interval (lo, hi), sorted. Interval
/// endpoints are never roots and lie strictly inside (lo, hi).
std::vector<RootInterval> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi);

/// Sign of p on each open gap between consecutive distinct roots in (lo, hi),
/// left to right (roots.size() + 1 entries).
struct GapSigns {
  std::vector<RootInterval> roots;
  std::vector<int> signs;
};
GapSigns gap_signs(const Polynomial& p, const Rational& lo, const Rational& hi);

/// p <= 0 on the closed interval [lo, hi], decided exactly.
bool nonpositive_on(const Polynomial& p, const Rational& lo, const Rational& hi);

/// Rational coefficient strings, ascending.
std::vector<std::string> coefficient_strings(const Polynomial& p);

}  // namespace momentcut
