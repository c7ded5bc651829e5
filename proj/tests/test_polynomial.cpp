#include <random>

#include "doctest.h"
#include "momentcut/error.hpp"
#include "momentcut/polynomial.hpp"

using namespace momentcut;

namespace {

Rational q(long a, long b = 1) { return make_rational(Integer(a), Integer(b)); }

Polynomial from_roots(std::initializer_list<Rational> roots, const Rational& lead = 1) {
  Polynomial p = Polynomial::constant(lead);
  for (const auto& r : roots) p = p * Polynomial({-r, Rational(1)});
  return p;
}

Rational rand_rat(std::mt19937_64& rng) {
  return make_rational(Integer(static_cast<long>(rng() % 41) - 20), Integer(static_cast<long>(rng() % 6) + 1));
}

Polynomial rand_poly(std::mt19937_64& rng, int deg) {
  std::vector<Rational> c;
  for (int k = 0; k <= deg; ++k) c.push_back(rand_rat(rng));
  return Polynomial(c);
}

}  // namespace

TEST_CASE("arithmetic") {
  Polynomial p({q(1), q(-3), q(2)});  // 2x^2 - 3x + 1
  CHECK(p.degree() == 2);
  CHECK(p(q(1)) == 0);
  CHECK(p(q(1, 2)) == 0);
  CHECK(p(q(2)) == 3);
  CHECK(p.derivative() == Polynomial({q(-3), q(4)}));
  CHECK(p.integrate(q(0), q(1)) == q(2, 3) - q(3, 2) + 1);
  CHECK(Polynomial({q(0), q(0)}).is_zero());
  CHECK(Polynomial().degree() == -1);
  CHECK(p.shifted(q(1)) == Polynomial({q(0), q(1), q(2)}));
  CHECK(p.mirrored()(q(3)) == p(q(-3)));
  CHECK_THROWS_AS(divmod(p, Polynomial()), Error);
}

TEST_CASE("division and gcd") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 100; ++t) {
    auto a = rand_poly(rng, static_cast<int>(rng() % 6));
    auto b = rand_poly(rng, static_cast<int>(rng() % 4));
    if (b.is_zero()) continue;
    auto [quot, rem] = divmod(a, b);
    CHECK(quot * b + rem == a);
    CHECK(rem.degree() < b.degree());
  }
  auto g = gcd(from_roots({q(1), q(2), q(3)}), from_roots({q(2), q(3), q(5)}));
  CHECK(g == from_roots({q(2), q(3)}));
  CHECK(square_free(from_roots({q(1), q(1), q(-2)}, q(7))) == from_roots({q(1), q(-2)}));
}

TEST_CASE("interpolation reproduces polynomials") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 50; ++t) {
    const int deg = static_cast<int>(rng() % 5);
    auto p = rand_poly(rng, deg);
    std::vector<Rational> xs, ys;
    for (int k = 0; k <= deg; ++k) {
      xs.push_back(q(k * 3 + 1, 7));
      ys.push_back(p(xs.back()));
    }
    CHECK(interpolate(xs, ys) == p);
  }
  std::vector<Rational> dup{q(1), q(1)}, vals{q(0), q(1)};
  CHECK_THROWS_AS(interpolate(dup, vals), Error);
}

TEST_CASE("sturm counts") {
  auto p = from_roots({q(-1), q(1, 3), q(1, 2), q(2)});
  auto seq = sturm_sequence(p);
  CHECK(count_roots(seq, q(-5), q(5)) == 4);
  CHECK(count_roots(seq, q(0), q(1)) == 2);
  CHECK(count_roots(seq, q(1, 3), q(1)) == 1);  // (a, b]
  CHECK(count_roots(seq, q(3), q(9)) == 0);
  auto dbl = from_roots({q(1), q(1), q(2)});
  CHECK(count_roots(sturm_sequence(dbl), q(0), q(3)) == 2);
}

TEST_CASE("root isolation") {
  auto roots = isolate_roots(from_roots({q(-1), q(1, 3), q(1, 2), q(2)}), q(-1), q(2));
  REQUIRE(roots.size() == 2);
  for (const auto& r : roots) {
    CHECK(q(-1) < r.lo);
    CHECK(r.hi < q(2));
  }
  CHECK((roots[0].exact() ? roots[0].lo == q(1, 3) : (roots[0].lo < q(1, 3) && q(1, 3) < roots[0].hi)));
  CHECK(roots[0].hi <= roots[1].lo);

  auto sqrt2 = isolate_roots(Polynomial({q(-2), q(0), q(1)}), q(0), q(2));
  REQUIRE(sqrt2.size() == 1);
  CHECK(sqrt2[0].lo * sqrt2[0].lo < 2);
  CHECK(sqrt2[0].hi * sqrt2[0].hi > 2);

  auto mid = isolate_roots(from_roots({q(0)}), q(-1), q(1));
  REQUIRE(mid.size() == 1);
  CHECK(mid[0].exact());
  CHECK(mid[0].lo == 0);

  std::mt19937_64 rng(57);
  for (int t = 0; t < 60; ++t) {
    std::vector<Rational> rs;
    for (int k = 0; k < 4; ++k) rs.push_back(rand_rat(rng));
    Polynomial p = Polynomial::constant(1);
    for (const auto& r : rs) p = p * Polynomial({-r, Rational(1)});
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    const Rational lo = -7, hi = 7;
    std::vector<Rational> inside;
    for (const auto& r : rs)
      if (lo < r && r < hi) inside.push_back(r);
    auto iso = isolate_roots(p, lo, hi);
    REQUIRE(iso.size() == inside.size());
    for (std::size_t k = 0; k < iso.size(); ++k) {
      if (iso[k].exact())
        CHECK(iso[k].lo == inside[k]);
      else
        CHECK((iso[k].lo < inside[k] && inside[k] < iso[k].hi));
    }
  }
}

TEST_CASE("sign decisions") {
  CHECK(nonpositive_on(-from_roots({q(1, 3), q(1, 3)}), q(0), q(1)));
  CHECK_FALSE(nonpositive_on(from_roots({q(1, 2)}), q(0), q(1)));
  CHECK(nonpositive_on(from_roots({q(0), q(1)}), q(0), q(1)));
  CHECK_FALSE(nonpositive_on(from_roots({q(0), q(1)}), q(0), q(2)));
  CHECK(nonpositive_on(Polynomial(), q(0), q(1)));
  CHECK_FALSE(nonpositive_on(Polynomial::constant(q(1, 100)), q(0), q(1)));
  // Touches zero at an irrational point only from below.
  auto touch = -(Polynomial({q(-2), q(0), q(1)}) * Polynomial({q(-2), q(0), q(1)}));
  CHECK(nonpositive_on(touch, q(0), q(2)));
  CHECK_FALSE(nonpositive_on(touch + Polynomial::constant(q(1, 1000000)), q(0), q(2)));

  std::mt19937_64 rng(59);
  for (int t = 0; t < 100; ++t) {
    auto p = rand_poly(rng, static_cast<int>(rng() % 5));
    const bool verdict = nonpositive_on(p, q(-2), q(2));
    bool sampled_positive = false;
    for (int k = 0; k <= 400; ++k)
      if (p(q(-2) + q(k, 100)) > 0) sampled_positive = true;
    if (sampled_positive) CHECK_FALSE(verdict);
    auto gs = gap_signs(p, q(-2), q(2));
    if (!p.is_zero()) CHECK(gs.signs.size() == gs.roots.size() + 1);
  }
}
