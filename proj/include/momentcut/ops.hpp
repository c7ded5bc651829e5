#pragma once

// Symplectic reduction, cutting, blow-up and the fixed-point insertion
// pipeline, all as exact operations on labeled polytopes. Every operation
// returns a polytope with facets in canonical (lexicographic) order.

#include <string>
#include <vector>

#include "momentcut/polytope.hpp"
#include "momentcut/toric.hpp"

namespace momentcut {

struct StabilizerEntry {
  std::size_t facet;       // index in the reduced polytope
  std::size_t source;      // inducing facet of the input
  Integer multiplicity;    // gcd removed from the induced normal
  StabilizerOrder order;   // of the inducing facet
};

struct Reduction {
  LabeledPolytope polytope;
  std::vector<StabilizerEntry> stabilizers;
};

/// Reduced space at a regular level a: the slice, with isotropy data of the
/// inducing facets. Labels are inherited verbatim.
Reduction reduce(const LabeledPolytope& p, const Rational& a);

enum class CutSide { Below, Above };

/// Keeps x_1 <= a (Below) or x_1 >= a (Above).
LabeledPolytope cut(const LabeledPolytope& p, const Rational& a, CutSide side);

/// cut(cut(p, b, Below), a, Above) for regular a < b.
LabeledPolytope compactify(const LabeledPolytope& p, const Rational& a, const Rational& b);

/// Image under x_1 -> -x_1.
LabeledPolytope reversed(const LabeledPolytope& p);

/// Stable identifier of a polytope's canonical form (FNV-1a of its text).
std::string fingerprint(const LabeledPolytope& p);

struct LedgerTerm {
  std::size_t facet;    // exceptional facet, index in the current polytope
  Rational multiplier;  // 1 at a smooth point, 1/2 at a Z2 point
  Rational depth;       // d = t / 2pi
  bool z2 = false;

  friend bool operator==(const LedgerTerm&, const LedgerTerm&) = default;
};

/// Formal class [omega_hat] = q*[omega] - sum multiplier * (2 pi depth) E_facet.
struct ClassLedger {
  std::string base;
  std::vector<LedgerTerm> terms;

  friend bool operator==(const ClassLedger&, const ClassLedger&) = default;
};

struct BlowupParams {
  Vertex vertex;
  Rational depth;
};

struct BlowupResult {
  LabeledPolytope polytope;
  ClassLedger ledger;
  std::size_t exceptional_facet;
};

/// Corner chop sum <eta_i, x> <= sum <eta_i, v> - depth at a Smooth or Z2
/// vertex whose facets all carry label 1.
BlowupResult blowup(const LabeledPolytope& p, const BlowupParams& params, ClassLedger ledger = {});

struct PipelineBlowup {
  RatVector vertex;
  Facet exceptional;
  Rational multiplier;
};

struct NewFixedVertex {
  RatVector point;
  std::vector<Integer> weights;
  VertexClass vertex_class;
  bool weights_ok;
};

struct PipelineReport {
  Rational eps;
  std::vector<RatVector> z2_vertices;      // on the new facet x_1 = eps
  std::vector<RatVector> smooth_vertices;  // on the new facet, left alone
  std::vector<PipelineBlowup> blowups;
  std::vector<NewFixedVertex> new_fixed;   // vertices of the result at x_1 = 0
  bool agrees_below_zero = false;
  bool count_matches = false;
  bool weights_match = false;

  bool ok() const { return agrees_below_zero && count_matches && weights_match; }
};

struct PipelineResult {
  LabeledPolytope polytope;
  ClassLedger ledger;
  PipelineReport report;
};

/// Cut at eps, then blow up every Z2 vertex of the new facet at depth eps.
PipelineResult add_fixed_points(const LabeledPolytope& p, const Rational& eps);

}  // namespace momentcut
