#include "momentcut/polynomial.hpp"

#include <algorithm>

#include "momentcut/error.hpp"

namespace momentcut {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::x() { return Polynomial({Rational(0), Rational(1)}); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Polynomial::operator()(const Rational& s) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<unsigned long>(k));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<Rational> a(c_.size() + 1, 0);
  for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<unsigned long>(k + 1);
  return Polynomial(std::move(a));
}

Rational Polynomial::integrate(const Rational& a, const Rational& b) const {
  auto f = antiderivative();
  return f(b) - f(a);
}

Polynomial Polynomial::shifted(const Rational& h) const {
  // Horner in polynomial arithmetic: p(x + h).
  Polynomial acc;
  const Polynomial lin({h, Rational(1)});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Polynomial::constant(*it);
  return acc;
}

Polynomial Polynomial::mirrored() const {
  auto c = c_;
  for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  auto c = c_;
  for (auto& x : c) x = -x;
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Rational& k, const Polynomial& a) { return Polynomial::constant(k) * a; }

DivMod divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::Precondition, "polynomial division by zero");
  std::vector<Rational> r = a.coeffs();
  const int db = b.degree();
  std::vector<Rational> q(std::max(0, a.degree() - db + 1), 0);
  for (int k = a.degree(); k >= db; --k) {
    const Rational t = r[k] / b.leading();
    if (t == 0) continue;
    q[k - db] = t;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= t * b.coeff(j);
  }
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    auto r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  return (1 / x.leading()) * x;
}

Polynomial square_free(const Polynomial& p) {
  if (p.degree() <= 0) return p.is_zero() ? p : Polynomial::constant(1);
  auto g = gcd(p, p.derivative());
  auto q = divmod(p, g).quotient;
  return (1 / q.leading()) * q;
}

Polynomial interpolate(std::span<const Rational> xs, std::span<const Rational> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::DimensionMismatch, "interpolation needs as many values as nodes");
  Polynomial acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Polynomial basis = Polynomial::constant(1);
    Rational denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      if (xs[i] == xs[j]) throw Error(ErrorCode::Precondition, "interpolation nodes must be distinct");
      basis = basis * Polynomial({-xs[j], Rational(1)});
      denom *= xs[i] - xs[j];
    }
    acc = acc + (ys[i] / denom) * basis;
  }
  return acc;
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  std::vector<Polynomial> seq;
  if (p.is_zero()) return seq;
  seq.push_back(p);
  Polynomial d = p.derivative();
  while (!d.is_zero()) {
    seq.push_back(d);
    auto r = divmod(seq[seq.size() - 2], seq.back()).remainder;
    d = -r;
  }
  return seq;
}

namespace {

int sign(const Rational& q) { return sgn(q); }

std::size_t variations(const std::vector<Polynomial>& seq, const Rational& x) {
  std::size_t v = 0;
  int last = 0;
  for (const auto& p : seq) {
    const int s = sign(p(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

// Roots of q in (a, b); q(a), q(b) != 0 and q square-free. Intervals touching
// the outer ends are refined until their ends lie strictly inside.
void isolate(const Polynomial& q, const Rational& a, const Rational& b, const Rational& lo, const Rational& hi,
             std::vector<RootInterval>& out) {
  const auto seq = sturm_sequence(q);
  struct Work {
    Rational a, b;
  };
  std::vector<Work> stack{{a, b}};
  while (!stack.empty()) {
    Work w = stack.back();
    stack.pop_back();
    const std::size_t n = count_roots(seq, w.a, w.b);
    if (n == 0) continue;
    if (n == 1 && w.a != lo && w.b != hi) {
      out.push_back({w.a, w.b});
      continue;
    }
    const Rational m = (w.a + w.b) / 2;
    if (q(m) == 0) {
      out.push_back({m, m});
      const Polynomial rest = divmod(q, Polynomial({-m, Rational(1)})).quotient;
      isolate(rest, w.a, m, lo, hi, out);
      isolate(rest, m, w.b, lo, hi, out);
      continue;
    }
    stack.push_back({w.a, m});
    stack.push_back({m, w.b});
  }
}

}  // namespace

std::size_t count_roots(const std::vector<Polynomial>& sturm, const Rational& a, const Rational& b) {
  if (sturm.empty()) return 0;
  return variations(sturm, a) - variations(sturm, b);
}

std::vector<RootInterval> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  std::vector<RootInterval> out;
  if (p.degree() <= 0 || !(lo < hi)) return out;
  Polynomial q = square_free(p);
  // Deflate roots sitting exactly on the ends so Sturm counts are exact.
  for (const Rational& e : {lo, hi})
    if (q(e) == 0) q = divmod(q, Polynomial({-e, Rational(1)})).quotient;
  if (q.degree() <= 0) return out;
  isolate(q, lo, hi, lo, hi, out);
  std::sort(out.begin(), out.end(), [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  return out;
}

GapSigns gap_signs(const Polynomial& p, const Rational& lo, const Rational& hi) {
  GapSigns g;
  g.roots = isolate_roots(p, lo, hi);
  Rational left = lo;
  for (const auto& r : g.roots) {
    g.signs.push_back(sign(p((left + r.lo) / 2)));
    left = r.hi;
  }
  g.signs.push_back(sign(p((left + hi) / 2)));
  return g;
}

bool nonpositive_on(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p(lo) > 0 || p(hi) > 0) return false;
  if (p.is_zero() || lo == hi) return true;
  for (int s : gap_signs(p, lo, hi).signs)
    if (s > 0) return false;
  return true;
}

std::vector<std::string> coefficient_strings(const Polynomial& p) {
  std::vector<std::string> out;
  for (const auto& c : p.coeffs()) out.push_back(to_string(c));
  return out;
}

}  // namespace momentcut
