#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "momentcut/polytope.hpp"

namespace fixtures {

using namespace momentcut;

struct F {
  std::vector<long> normal;
  std::string offset;
  long label = 1;
};

inline LabeledPolytope make(std::size_t dim, std::initializer_list<F> fs) {
  std::vector<Facet> facets;
  for (const auto& f : fs) {
    IntVector n;
    for (long x : f.normal) n.emplace_back(x);
    facets.push_back({n, parse_rational(f.offset), f.label});
  }
  return LabeledPolytope(dim, std::move(facets));
}

inline RatVector pt(std::initializer_list<const char*> xs) {
  RatVector v;
  for (auto x : xs) v.push_back(parse_rational(x));
  return v;
}

inline IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline LabeledPolytope box(std::initializer_list<std::pair<long, long>> sides) {
  const std::size_t n = sides.size();
  std::vector<Facet> facets;
  std::size_t k = 0;
  for (auto [lo, hi] : sides) {
    IntVector up(n, 0), down(n, 0);
    up[k] = 1;
    down[k] = -1;
    facets.push_back({up, Rational(hi), 1});
    facets.push_back({down, Rational(-lo), 1});
    ++k;
  }
  return LabeledPolytope(n, std::move(facets));
}

inline LabeledPolytope square() { return box({{0, 1}, {0, 1}}); }

inline LabeledPolytope simplex(std::size_t n) {
  std::vector<Facet> facets;
  for (std::size_t k = 0; k < n; ++k) {
    IntVector e(n, 0);
    e[k] = -1;
    facets.push_back({e, Rational(0), 1});
  }
  facets.push_back({IntVector(n, 1), Rational(1), 1});
  return LabeledPolytope(n, std::move(facets));
}

// conv{(-1,0),(1,1),(1,-1)}
inline LabeledPolytope pex2() {
  return make(2, {{{-1, 2}, "1"}, {{-1, -2}, "1"}, {{1, 0}, "1"}});
}

// conv{(0,0,0),(-1,0,0),(1,1,0),(1,0,1)}
inline LabeledPolytope delta3() {
  return make(3, {{{1, -1, -1}, "0"}, {{0, -1, 0}, "0"}, {{0, 0, -1}, "0"}, {{-1, 2, 2}, "1"}});
}

inline LabeledPolytope octahedron() {
  std::vector<Facet> facets;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) facets.push_back({IntVector{a, b, c}, Rational(1), 1});
  return LabeledPolytope(3, std::move(facets));
}

}  // namespace fixtures
