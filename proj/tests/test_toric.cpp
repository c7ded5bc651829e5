#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "momentcut/error.hpp"
#include "momentcut/toric.hpp"
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

std::vector<IntVector> sorted(std::vector<IntVector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Integer> ints(std::initializer_list<long> xs) {
  std::vector<Integer> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::vector<LabeledPolytope> corpus() {
  return {square(),
          simplex(2),
          simplex(3),
          pex2(),
          delta3(),
          make(2, {{{-1, 0}, "0"}, {{0, -1}, "0"}, {{0, 1}, "1"}, {{1, 2}, "3"}}),
          make(2, {{{1, 0}, "1"}, {{-1, 0}, "1"}, {{0, 1}, "1"}, {{0, -1}, "1"}, {{1, 1}, "3/2"}, {{-1, -1}, "3/2"}}),
          box({{0, 1}, {0, 2}, {0, 1}}),
          make(3, {{{-1, 0, 0}, "0"}, {{0, -1, 0}, "0"}, {{0, 0, -1}, "0"}, {{1, 1, 0}, "1"}, {{0, 0, 1}, "1"}})};
}

// The y <= 1/2 chop of the cut pipeline, in isolation.
LabeledPolytope chopped_wedge() {
  return make(2, {{{0, 1}, "1/2"}, {{-1, 2}, "1"}, {{1, 0}, "1"}, {{0, -1}, "1"}});
}

}  // namespace

TEST_CASE("classify_vertex") {
  auto c = classify_vertex(square(), at(square(), pt({"0", "0"})));
  CHECK(c.kind == VertexKind::Smooth);
  CHECK(c.index == 1);

  auto o = classify_vertex(pex2(), at(pex2(), pt({"-1", "0"})));
  CHECK(o.kind == VertexKind::OtherOrbifold);
  CHECK(o.index == 4);
  CHECK(o.half_sum_integral);

  auto z = classify_vertex(pex2(), at(pex2(), pt({"1", "1"})));
  CHECK(z.kind == VertexKind::Z2Singular);
  CHECK(z.index == 2);

  auto labeled = make(2, {{{1, 0}, "1"}, {{-1, 2}, "1", 3}, {{-1, -2}, "1"}});
  CHECK(classify_vertex(labeled, at(labeled, pt({"1", "1"}))).kind == VertexKind::OtherOrbifold);
  auto labeled_corner = make(2, {{{1, 0}, "1", 2}, {{-1, 0}, "0"}, {{0, 1}, "1"}, {{0, -1}, "0"}});
  CHECK(classify_vertex(labeled_corner, at(labeled_corner, pt({"1", "1"}))).kind == VertexKind::OtherOrbifold);

  Vertex bogus{pt({"0", "0"}), {0}};
  CHECK_THROWS_AS(classify_vertex(square(), bogus), Error);
}

TEST_CASE("edge generators") {
  CHECK(sorted(edge_generators(square(), at(square(), pt({"0", "0"})))) == sorted({iv({0, 1}), iv({1, 0})}));
  // Directions from (-1,0,0) toward the other three vertices of the simplex.
  auto d = edge_generators(delta3(), at(delta3(), pt({"-1", "0", "0"})));
  CHECK(sorted(d) == sorted({iv({1, 0, 0}), iv({2, 1, 0}), iv({2, 0, 1})}));
  auto w = edge_generators(chopped_wedge(), at(chopped_wedge(), pt({"0", "1/2"})));
  CHECK(sorted(w) == sorted({iv({1, 0}), iv({-2, -1})}));
}

TEST_CASE("edge generators point along polytope edges") {
  for (const auto& p : corpus()) {
    auto verts = vertices(p);
    for (const auto& v : verts) {
      auto gens = edge_generators(p, v);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        // Some other vertex lies on the ray v + t e, t > 0.
        bool found = false;
        for (const auto& u : verts) {
          if (u.point == v.point) continue;
          RatVector diff(p.dim());
          for (std::size_t k = 0; k < p.dim(); ++k) diff[k] = u.point[k] - v.point[k];
          if (primitive_integer_direction(diff) == gens[i]) found = true;
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("weights") {
  CHECK(weights_at_vertex(square(), at(square(), pt({"0", "0"})), unit_vector(2, 0)) == ints({0, 1}));
  CHECK(weights_at_vertex(delta3(), at(delta3(), pt({"0", "0", "0"})), unit_vector(3, 0)) == ints({-1, 1, 1}));
  CHECK(weights_at_vertex(chopped_wedge(), at(chopped_wedge(), pt({"0", "1/2"})), unit_vector(2, 0)) ==
        ints({-2, 1}));
}

TEST_CASE("edge generator determinant matches the vertex class") {
  for (const auto& p : corpus()) {
    for (const auto& v : vertices(p)) {
      auto cls = classify_vertex(p, v);
      auto gens = edge_generators(p, v);
      IntMatrix m(gens.begin(), gens.end());
      const Integer d = abs(determinant(m));
      if (cls.kind == VertexKind::Smooth) CHECK(d == 1);
      if (cls.kind == VertexKind::Z2Singular) CHECK(d == 2);
    }
  }
}

TEST_CASE("classification and weights under unimodular maps") {
  std::mt19937_64 rng(31);
  for (const auto& p : corpus()) {
    const std::size_t n = p.dim();
    IntMatrix a = identity_matrix(n);
    for (int s = 0; s < 5; ++s) {
      std::size_t i = rng() % n, j = rng() % n;
      if (i == j) continue;
      long c = static_cast<long>(rng() % 5) - 2;
      for (std::size_t k = 0; k < n; ++k) a[i][k] += c * a[j][k];
    }
    RatVector b(n);
    for (auto& x : b) x = make_rational(Integer(static_cast<long>(rng() % 9) - 4), 5);
    auto q = transform(p, a, b);
    IntMatrix inv_t = transpose(unimodular_inverse(a));
    IntVector xi(n);
    for (auto& x : xi) x = static_cast<long>(rng() % 7) - 3;
    IntVector xi_q(n, 0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) xi_q[r] += inv_t[r][k] * xi[k];
    for (const auto& v : vertices(p)) {
      RatVector image(n);
      for (std::size_t r = 0; r < n; ++r) {
        image[r] = b[r];
        for (std::size_t k = 0; k < n; ++k) image[r] += a[r][k] * v.point[k];
      }
      auto w = at(q, image);
      auto c1 = classify_vertex(p, v), c2 = classify_vertex(q, w);
      CHECK(c1.kind == c2.kind);
      CHECK(c1.index == c2.index);
      CHECK(weights_at_vertex(p, v, xi) == weights_at_vertex(q, w, xi_q));
    }
  }
}

TEST_CASE("weights at extreme levels have one sign") {
  for (const auto& p : corpus()) {
    auto [lo, hi] = first_coordinate_range(p);
    for (const auto& v : vertices(p)) {
      auto w = weights_at_vertex(p, v, unit_vector(p.dim(), 0));
      if (v.point[0] == lo) CHECK(w.front() >= 0);
      if (v.point[0] == hi) CHECK(w.back() <= 0);
    }
  }
}

TEST_CASE("circle stabilizer orders") {
  const std::size_t bottom[] = {3};
  CHECK(circle_stabilizer_order(square(), bottom).order == 1);
  CHECK_FALSE(circle_stabilizer_order(square(), bottom).infinite);
  // pex2 facets: 0 -> (-1,2), 2 -> (1,0)
  const std::size_t slanted[] = {0};
  CHECK(circle_stabilizer_order(pex2(), slanted).order == 2);
  const std::size_t vertical[] = {2};
  CHECK(circle_stabilizer_order(pex2(), vertical).infinite);

  auto labeled = make(2, {{{1, 0}, "1"}, {{-1, 2}, "1", 3}, {{-1, -2}, "1"}});
  const std::size_t lf[] = {1};
  auto s = circle_stabilizer_order(labeled, lf);
  CHECK(s.order == 2);
  CHECK(s.labeled_total == 6);
  const std::size_t pair[] = {0, 1};
  try {
    circle_stabilizer_order(labeled, pair);
    FAIL("expected LabeledFaceUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabeledFaceUnsupported);
  }
}

TEST_CASE("facet stabilizer order is the gcd of the trailing normal entries") {
  // s e_1 = t eta mod Z^n forces t in Z / g with g = gcd(eta_2, ..., eta_n),
  // and then s runs over (eta_1 / g) Z + Z, which is Z / g since eta is primitive.
  auto extra = make(2, {{{-1, 0}, "0"}, {{0, -1}, "0"}, {{0, 1}, "1"}, {{1, 2}, "3"}, {{1, 3}, "4"}});
  auto all = corpus();
  all.push_back(extra);
  for (const auto& p : all) {
    for (std::size_t f = 0; f < p.size(); ++f) {
      const auto& eta = p.facet(f).normal;
      const Integer g = content(std::span<const Integer>(eta).subspan(1));
      const std::size_t face[] = {f};
      auto s = circle_stabilizer_order(p, face);
      CHECK(s.infinite == (g == 0));
      if (g != 0) CHECK(s.order == g);
    }
  }
}

TEST_CASE("stabilizer of a vertex face is infinite") {
  for (const auto& p : corpus())
    for (const auto& v : vertices(p)) CHECK(circle_stabilizer_order(p, v.active).infinite);
}

TEST_CASE("fixed components") {
  auto sq = fixed_components(square());
  REQUIRE(sq.size() == 2);
  CHECK(sq[0].level == 0);
  CHECK(sq[1].level == 1);
  CHECK(sq[0].dimension == 1);

  auto d = fixed_components(delta3());
  REQUIRE(d.size() == 3);
  CHECK(d[0].level == -1);
  CHECK(d[0].dimension == 0);
  CHECK(d[1].level == 0);
  CHECK(d[1].dimension == 0);
  CHECK(d[2].level == 1);
  CHECK(d[2].dimension == 1);
  CHECK(d[2].vertices.size() == 2);

  auto e = fixed_components(pex2());
  REQUIRE(e.size() == 2);
  CHECK(e[0].level == -1);
  CHECK(e[0].dimension == 0);
  CHECK(e[1].level == 1);
  CHECK(e[1].dimension == 1);
}
