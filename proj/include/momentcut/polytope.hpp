#pragma once

// Labeled rational polytopes in H-representation. A point x belongs to the
// polytope iff <normal, x> <= offset for every facet. Vertices are derived on
// demand by exact enumeration of n-subsets of facets.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momentcut/lattice.hpp"

namespace momentcut {

/// Largest dimension accepted by validate(); enumeration is combinatorial.
inline constexpr std::size_t kMaxDimension = 8;

struct Facet {
  IntVector normal;  // primitive, outward
  Rational offset;
  long label = 1;

  friend bool operator==(const Facet&, const Facet&) = default;
};

/// Lexicographic order on (normal, offset, label).
bool facet_less(const Facet& a, const Facet& b);

class LabeledPolytope {
 public:
  /// Structural checks only: normals have length `dim`, are nonzero and
  /// primitive, labels are >= 1. Geometric checks live in validate().
  LabeledPolytope(std::size_t dim, std::vector<Facet> facets);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return facets_.size(); }
  const std::vector<Facet>& facets() const { return facets_; }
  const Facet& facet(std::size_t i) const { return facets_.at(i); }

  bool contains(std::span<const Rational> x) const;

  friend bool operator==(const LabeledPolytope&, const LabeledPolytope&) = default;

 private:
  std::size_t dim_;
  std::vector<Facet> facets_;
};

struct Vertex {
  RatVector point;
  std::vector<std::size_t> active;  // sorted facet indices tight at point

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

enum class IssueKind {
  DimensionTooLarge,
  DuplicateNormal,
  Unbounded,
  Empty,
  NotFullDimensional,
  NotSimple,
  Redundant,
};

const char* issue_kind_name(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::optional<std::size_t> facet;
  std::optional<std::size_t> vertex;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
};

ValidationReport validate(const LabeledPolytope& p);

/// All feasible basic solutions, sorted by point, with full active sets.
/// No simplicity requirement; empty when the polyhedron has no vertices.
std::vector<Vertex> enumerate_points(const LabeledPolytope& p);

/// Like enumerate_points, but throws NotSimple when a vertex has more than
/// dim() active facets.
std::vector<Vertex> vertices(const LabeledPolytope& p);

/// Primitive generators of the extreme rays of the recession cone. Only
/// meaningful when the facet normals have full rank.
std::vector<IntVector> extreme_rays(const LabeledPolytope& p);

bool is_bounded(const LabeledPolytope& p);

struct RedundancyResult {
  LabeledPolytope polytope;
  std::vector<std::size_t> kept;  // indices into the input facet list
};

/// Drops every facet whose removal leaves the polyhedron unchanged. Among
/// parallel facets only the tightest survives, the first one on ties.
RedundancyResult remove_redundant(const LabeledPolytope& p);

/// Facets sorted lexicographically. `order[k]` is the input index of the
/// facet now at position k.
struct CanonicalResult {
  LabeledPolytope polytope;
  std::vector<std::size_t> order;
};
CanonicalResult canonical_form(const LabeledPolytope& p);

bool canonical_equal(const LabeledPolytope& p, const LabeledPolytope& q);

/// The slice at x_1 = s written in the coordinates (x_2, ..., x_n).
struct SliceResult {
  std::optional<LabeledPolytope> polytope;  // nullopt: empty or degenerate
  std::vector<std::size_t> source;          // inducing facet of the input, per output facet
  std::vector<Integer> multiplicity;        // gcd stripped from each induced normal
  bool degenerate = false;                  // nonempty but of dimension < n-1

  bool empty() const { return !polytope.has_value(); }
};

SliceResult slice(const LabeledPolytope& p, const Rational& s);

/// Exact Euclidean volume by a pulling triangulation of the face lattice.
Rational volume(const LabeledPolytope& p);

/// True iff no vertex has first coordinate a.
bool is_regular_level(const LabeledPolytope& p, const Rational& a);

/// Closed range of the first coordinate over the vertex set.
std::pair<Rational, Rational> first_coordinate_range(const LabeledPolytope& p);

/// Image {A x + b : x in P} for unimodular A. Normals map by A^{-T}.
LabeledPolytope transform(const LabeledPolytope& p, const IntMatrix& a, const RatVector& b);

/// p intersected with <normal, x> <= offset, redundancy removed. The normal
/// is primitivized (offset rescaled) before insertion.
LabeledPolytope intersect_halfspace(const LabeledPolytope& p, const IntVector& normal, const Rational& offset,
                                    long label = 1);

/// Unit vector e_k in Z^n.
IntVector unit_vector(std::size_t n, std::size_t k);

}  // namespace momentcut
