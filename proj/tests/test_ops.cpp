#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "momentcut/error.hpp"
#include "momentcut/ops.hpp"
#include "oracles.hpp"

using namespace momentcut;
using namespace fixtures;

namespace {

Vertex at(const LabeledPolytope& p, const RatVector& x) {
  for (const auto& v : vertices(p))
    if (v.point == x) return v;
  FAIL("no vertex at the requested point");
  return {};
}

std::vector<RatVector> points(const LabeledPolytope& p) {
  std::vector<RatVector> out;
  for (const auto& v : vertices(p)) out.push_back(v.point);
  return out;
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Precondition;
}

std::vector<LabeledPolytope> corpus() {
  return {square(),
          box({{0, 3}, {0, 1}}),
          simplex(2),
          simplex(3),
          pex2(),
          delta3(),
          make(2, {{{-1, 0}, "0"}, {{0, -1}, "0"}, {{0, 1}, "1"}, {{1, 1}, "3"}}),
          make(2, {{{1, 0}, "1"}, {{-1, 0}, "1"}, {{0, 1}, "1"}, {{0, -1}, "1"}, {{1, 1}, "3/2"}, {{-1, -1}, "3/2"}}),
          box({{0, 1}, {0, 1}, {0, 1}}),
          make(3, {{{-1, 0, 0}, "0"}, {{0, -1, 0}, "0"}, {{0, 0, -1}, "0"}, {{1, 1, 0}, "1"}, {{0, 0, 1}, "1"}})};
}

Rational random_level(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  return lo + (hi - lo) * make_rational(Integer(static_cast<long>(rng() % 999) + 1), 1000);
}

Integer factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<unsigned long>(k);
  return f;
}

// Volume of the corner simplex cut off at v by <s, x> <= <s, v> - d, from the
// edge generators and the chop alone.
Rational corner_volume(const LabeledPolytope& p, const Vertex& v, const Rational& d) {
  IntVector s(p.dim(), 0);
  for (auto i : v.active)
    for (std::size_t k = 0; k < p.dim(); ++k) s[k] += p.facet(i).normal[k];
  RatMatrix m;
  for (const auto& e : edge_generators(p, v)) {
    const Rational t = d / Rational(-dot(s, e));
    RatVector row;
    for (const auto& x : e) row.push_back(t * x);
    m.push_back(row);
  }
  return abs(oracle::det_cofactor(m)) / Rational(factorial(p.dim()));
}

}  // namespace

TEST_CASE("reduce") {
  auto r = reduce(square(), Rational(1, 2));
  CHECK(volume(r.polytope) == 1);
  CHECK(r.polytope.dim() == 1);
  CHECK(r.stabilizers.size() == 2);
  for (const auto& s : r.stabilizers) CHECK(s.order.order == 1);

  auto low = reduce(delta3(), Rational(-1, 2));
  CHECK(oracle::sorted(points(low.polytope)) == oracle::sorted({pt({"0", "0"}), pt({"1/4", "0"}), pt({"0", "1/4"})}));
  auto high = reduce(delta3(), Rational(1, 2));
  CHECK(vertices(high.polytope).size() == 4);

  CHECK(code_of([] { reduce(square(), Rational(0)); }) == ErrorCode::NotRegularLevel);
  CHECK(code_of([] { reduce(square(), Rational(3)); }) == ErrorCode::EmptyResult);

  auto z = reduce(pex2(), Rational(0));
  for (const auto& s : z.stabilizers) {
    CHECK(s.order.order == 2);
    CHECK(z.polytope.facet(s.facet).label == pex2().facet(s.source).label);
  }
}

TEST_CASE("cut") {
  CHECK(canonical_equal(cut(square(), Rational(1, 2), CutSide::Below), make(2, {{{1, 0}, "1/2"}, {{-1, 0}, "0"}, {{0, 1}, "1"}, {{0, -1}, "0"}})));
  CHECK(canonical_equal(cut(square(), Rational(1, 2), CutSide::Above), make(2, {{{1, 0}, "1"}, {{-1, 0}, "-1/2"}, {{0, 1}, "1"}, {{0, -1}, "0"}})));
  auto c = cut(pex2(), Rational(1, 4), CutSide::Below);
  CHECK(oracle::sorted(points(c)) == oracle::sorted({pt({"-1", "0"}), pt({"1/4", "5/8"}), pt({"1/4", "-5/8"})}));
  CHECK(code_of([] { cut(square(), Rational(1), CutSide::Below); }) == ErrorCode::NotRegularLevel);
  CHECK(code_of([] { cut(square(), Rational(-1), CutSide::Below); }) == ErrorCode::EmptyResult);
  CHECK(code_of([] { cut(square(), Rational(2), CutSide::Above); }) == ErrorCode::EmptyResult);
  // A level beyond the range keeps everything.
  CHECK(canonical_equal(cut(square(), Rational(5), CutSide::Below), square()));
}

TEST_CASE("cut compatibility with slices") {
  std::mt19937_64 rng(41);
  for (const auto& p : corpus()) {
    auto [lo, hi] = first_coordinate_range(p);
    for (int t = 0; t < 3; ++t) {
      Rational a = random_level(rng, lo, hi);
      if (!is_regular_level(p, a)) continue;
      auto below = cut(p, a, CutSide::Below);
      auto above = cut(p, a, CutSide::Above);
      CHECK(validate(below).valid());
      CHECK(volume(below) + volume(above) == volume(p));
      for (int u = 0; u < 3; ++u) {
        Rational s = random_level(rng, lo, a);
        if (!is_regular_level(p, s)) continue;
        auto x = slice(below, s), y = slice(p, s);
        REQUIRE(x.polytope);
        REQUIRE(y.polytope);
        CHECK(canonical_equal(*x.polytope, *y.polytope));
      }
    }
  }
}

TEST_CASE("compactify") {
  auto strip = make(2, {{{-1, 0}, "0"}, {{0, -1}, "0"}, {{0, 1}, "1"}});
  auto c = compactify(strip, Rational(1, 4), Rational(3, 4));
  CHECK(canonical_equal(c, make(2, {{{1, 0}, "3/4"}, {{-1, 0}, "-1/4"}, {{0, 1}, "1"}, {{0, -1}, "0"}})));
  CHECK(canonical_equal(compactify(c, Rational(0), Rational(1)), c));
  CHECK(canonical_equal(compactify(strip, Rational(1, 4), Rational(3, 4)), c));
  CHECK(canonical_equal(compactify(square(), Rational(-1), Rational(2)), square()));
  CHECK(code_of([&] { compactify(strip, Rational(3, 4), Rational(1, 4)); }) == ErrorCode::Precondition);
}

TEST_CASE("reversed") {
  CHECK(canonical_equal(reversed(square()), box({{-1, 0}, {0, 1}})));
  for (const auto& p : corpus()) CHECK(canonical_equal(reversed(reversed(p)), p));
  auto r = reversed(delta3());
  CHECK(weights_at_vertex(r, at(r, pt({"0", "0", "0"})), unit_vector(3, 0)) ==
        std::vector<Integer>{-1, -1, 1});
  std::mt19937_64 rng(43);
  for (const auto& p : corpus()) {
    auto [lo, hi] = first_coordinate_range(p);
    Rational a = random_level(rng, lo, hi);
    if (!is_regular_level(p, a)) continue;
    CHECK(canonical_equal(cut(reversed(p), -a, CutSide::Below), reversed(cut(p, a, CutSide::Above))));
  }
}

TEST_CASE("blowup at a smooth corner") {
  auto r = blowup(square(), {at(square(), pt({"0", "0"})), Rational(1, 4)});
  CHECK(r.polytope.facet(r.exceptional_facet) == Facet{iv({-1, -1}), Rational(-1, 4), 1});
  REQUIRE(r.ledger.terms.size() == 1);
  CHECK(r.ledger.terms[0].multiplier == 1);
  CHECK_FALSE(r.ledger.terms[0].z2);
  CHECK(r.ledger.terms[0].depth == Rational(1, 4));
  CHECK(r.ledger.base == fingerprint(square()));
  CHECK(volume(square()) - volume(r.polytope) == Rational(1, 32));

  CHECK(code_of([] { blowup(square(), {at(square(), pt({"0", "0"})), Rational(1)}); }) == ErrorCode::BlowupTooLarge);
  CHECK(code_of([] { blowup(square(), {at(square(), pt({"0", "0"})), Rational(0)}); }) == ErrorCode::Precondition);
  CHECK(code_of([] { blowup(pex2(), {at(pex2(), pt({"-1", "0"})), Rational(1, 8)}); }) ==
        ErrorCode::VertexNotBlowable);
  auto labeled = make(2, {{{1, 0}, "1", 2}, {{-1, 0}, "0"}, {{0, 1}, "1"}, {{0, -1}, "0"}});
  CHECK(code_of([&] { blowup(labeled, {at(labeled, pt({"1", "1"})), Rational(1, 8)}); }) ==
        ErrorCode::VertexNotBlowable);
}

TEST_CASE("blowup at a Z2 vertex") {
  auto c = cut(pex2(), Rational(1, 4), CutSide::Below);
  auto v = at(c, pt({"1/4", "5/8"}));
  CHECK(classify_vertex(c, v).kind == VertexKind::Z2Singular);
  auto r = blowup(c, {v, Rational(1, 4)});
  CHECK(r.polytope.facet(r.exceptional_facet) == Facet{iv({0, 1}), Rational(1, 2), 1});
  REQUIRE(r.ledger.terms.size() == 1);
  CHECK(r.ledger.terms[0].multiplier == Rational(1, 2));
  CHECK(r.ledger.terms[0].z2);
  for (const auto& w : vertices(r.polytope)) {
    const bool on_new = std::find(w.active.begin(), w.active.end(), r.exceptional_facet) != w.active.end();
    if (on_new) CHECK(classify_vertex(r.polytope, w).kind == VertexKind::Smooth);
  }
}

TEST_CASE("blowup volume and smoothing properties") {
  for (const auto& p : corpus()) {
    for (const auto& v : vertices(p)) {
      auto cls = classify_vertex(p, v);
      if (cls.kind == VertexKind::OtherOrbifold) continue;
      // Depth small relative to every edge.
      Rational d(1, 64);
      BlowupResult r = [&] {
        try {
          return blowup(p, {v, d});
        } catch (const Error&) {
          d = Rational(1, 1024);
          return blowup(p, {v, d});
        }
      }();
      const Rational removed = volume(p) - volume(r.polytope);
      CHECK(removed > 0);
      CHECK(removed == corner_volume(p, v, d));
      if (cls.kind == VertexKind::Smooth) {
        IntVector s(p.dim(), 0);
        for (auto i : v.active)
          for (std::size_t k = 0; k < p.dim(); ++k) s[k] += p.facet(i).normal[k];
        for (const auto& e : edge_generators(p, v)) REQUIRE(dot(s, e) == -1);
        Rational dn = 1;
        for (std::size_t k = 0; k < p.dim(); ++k) dn *= d;
        CHECK(removed == dn / Rational(factorial(p.dim())));
      }
      for (const auto& w : vertices(r.polytope)) {
        const bool on_new = std::find(w.active.begin(), w.active.end(), r.exceptional_facet) != w.active.end();
        if (on_new) CHECK(classify_vertex(r.polytope, w).kind == VertexKind::Smooth);
      }
      CHECK(r.ledger.terms.back().multiplier == (cls.kind == VertexKind::Smooth ? Rational(1) : Rational(1, 2)));
    }
  }
}

TEST_CASE("ledger facet ids follow the canonical order") {
  auto p = box({{0, 1}, {0, 1}, {0, 1}});
  ClassLedger ledger;
  LabeledPolytope current = p;
  std::vector<Facet> exceptional;
  for (const char* corner : {"0", "1"}) {
    auto r = blowup(current, {at(current, pt({corner, corner, corner})), Rational(1, 8)}, ledger);
    exceptional.push_back(r.polytope.facet(r.exceptional_facet));
    current = r.polytope;
    ledger = r.ledger;
  }
  REQUIRE(ledger.terms.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) CHECK(current.facet(ledger.terms[k].facet) == exceptional[k]);
  CHECK(ledger.base == fingerprint(p));
}

TEST_CASE("add_fixed_points on the Z2 wedge") {
  auto res = add_fixed_points(pex2(), Rational(1, 4));
  const auto& rep = res.report;
  CHECK(oracle::sorted(rep.z2_vertices) == oracle::sorted({pt({"1/4", "5/8"}), pt({"1/4", "-5/8"})}));
  CHECK(rep.smooth_vertices.empty());
  REQUIRE(rep.new_fixed.size() == 2);
  std::vector<RatVector> fixed;
  for (const auto& f : rep.new_fixed) {
    fixed.push_back(f.point);
    CHECK(f.weights == std::vector<Integer>{-2, 1});
    CHECK(f.vertex_class.kind == VertexKind::Smooth);
  }
  CHECK(oracle::sorted(fixed) == oracle::sorted({pt({"0", "1/2"}), pt({"0", "-1/2"})}));
  CHECK(rep.agrees_below_zero);
  CHECK(rep.count_matches);
  CHECK(rep.weights_match);
  CHECK(rep.ok());
  REQUIRE(res.ledger.terms.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(res.ledger.terms[k].multiplier == Rational(1, 2));
    CHECK(res.polytope.facet(res.ledger.terms[k].facet) == rep.blowups[k].exceptional);
  }
  CHECK(canonical_equal(cut(res.polytope, Rational(-1, 2), CutSide::Below), cut(pex2(), Rational(-1, 2), CutSide::Below)));
}

TEST_CASE("add_fixed_points without Z2 vertices is a plain cut") {
  auto p = box({{-1, 1}, {0, 1}});
  auto res = add_fixed_points(p, Rational(1, 2));
  CHECK(res.report.z2_vertices.empty());
  CHECK(res.report.smooth_vertices.size() == 2);
  CHECK(res.report.new_fixed.empty());
  CHECK(res.report.ok());
  CHECK(canonical_equal(res.polytope, cut(p, Rational(1, 2), CutSide::Below)));
  CHECK(res.ledger.terms.empty());
}

TEST_CASE("add_fixed_points preconditions") {
  CHECK(code_of([] { add_fixed_points(pex2(), Rational(1)); }) == ErrorCode::NotRegularLevel);
  CHECK(code_of([] { add_fixed_points(pex2(), Rational(0)); }) == ErrorCode::Precondition);
  CHECK(code_of([] { add_fixed_points(square(), Rational(1, 2)); }) == ErrorCode::NotRegularLevel);
  // A fixed component at x_1 = 1/2 inside (0, eps].
  auto p = box({{-1, 2}, {0, 1}});
  auto q = cut(p, Rational(1, 2), CutSide::Below);
  auto extended = make(2, {{{1, 0}, "1/2"}, {{-1, 0}, "1"}, {{0, 1}, "1"}, {{0, -1}, "0"}});
  CHECK(canonical_equal(q, extended));
  CHECK(code_of([&] { add_fixed_points(extended, Rational(3, 4)); }) == ErrorCode::Precondition);
}
