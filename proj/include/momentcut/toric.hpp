#pragma once

// Toric reading of a labeled polytope: local structure at vertices, weights
// of the circle generated by a lattice direction, isotropy orders on faces
// and the fixed-point set of the circle generated by e_1.

#include <span>
#include <vector>

#include "momentcut/polytope.hpp"

namespace momentcut {

enum class VertexKind { Smooth, Z2Singular, OtherOrbifold };

const char* vertex_kind_name(VertexKind kind);

struct VertexClass {
  VertexKind kind;
  Integer index;  // lattice index of the active normals
  bool half_sum_integral;
};

VertexClass classify_vertex(const LabeledPolytope& p, const Vertex& v);

/// One primitive edge direction per active facet, in the order of v.active:
/// the direction along which that facet is released and the others stay tight.
std::vector<IntVector> edge_generators(const LabeledPolytope& p, const Vertex& v);

/// Multiset { <xi, e> : e an edge generator at v }, sorted ascending.
std::vector<Integer> weights_at_vertex(const LabeledPolytope& p, const Vertex& v, const IntVector& xi);

struct StabilizerOrder {
  bool infinite = false;  // e_1 lies in the span of the face normals
  Integer order = 1;      // order of the finite cyclic stabilizer otherwise
  Integer labeled_total = 1;
};

/// Stabilizer in S^1 = R e_1 / Z e_1 of the points over the relative interior
/// of the face cut out by `face` (facet indices).
StabilizerOrder circle_stabilizer_order(const LabeledPolytope& p, std::span<const std::size_t> face);

struct FixedComponent {
  std::vector<std::size_t> facets;    // the face's active set
  std::vector<std::size_t> vertices;  // indices into vertices(p)
  Rational level;                     // constant value of x_1 on the face
  std::size_t dimension;
};

/// Maximal faces on which x_1 is constant, i.e. the images of the fixed
/// components of the e_1-circle.
std::vector<FixedComponent> fixed_components(const LabeledPolytope& p);

}  // namespace momentcut
