#pragma once

// Duistermaat-Heckman analysis of the first coordinate: exact piecewise
// polynomial profiles, log-concavity and strict-local-minimum decisions, and
// the birational wall-crossing verifier.

#include <optional>
#include <string>
#include <vector>

#include "momentcut/polynomial.hpp"
#include "momentcut/polytope.hpp"
#include "momentcut/toric.hpp"

namespace momentcut {

/// Distinct first coordinates of the vertices, ascending.
std::vector<Rational> critical_values(const LabeledPolytope& p);

/// mu(s) = (n-1)-volume of the slice at s in the coordinates (x_2, ..., x_n).
/// Chamber k is the open interval (walls[k], walls[k+1]) carrying polys[k];
/// values[k] is mu at walls[k].
struct DHProfile {
  std::vector<Rational> walls;
  std::vector<Polynomial> polys;
  std::vector<Rational> values;

  std::size_t chambers() const { return polys.size(); }
  /// Exact value anywhere on [walls.front(), walls.back()], 0 outside.
  Rational operator()(const Rational& s) const;
  Rational integral() const;
};

/// Throws InterpolationMismatch when a chamber's verification sample disagrees.
DHProfile dh_profile(const LabeledPolytope& p);

/// Profile from chamber polynomials alone; wall values are the left limits
/// (right limit at the first wall).
DHProfile profile_from_polys(std::vector<Rational> walls, std::vector<Polynomial> polys);

/// Sample points k (hi - lo) / (n + 2) + lo, k = 1..count, used per chamber.
std::vector<Rational> chamber_samples(const Rational& lo, const Rational& hi, std::size_t count);

struct LogConcavityViolation {
  enum class Where { Chamber, Wall } where;
  std::size_t index;  // chamber or wall index
  std::string detail;
};

struct LogConcavityReport {
  std::vector<Polynomial> g;  // mu mu'' - mu'^2 per chamber
  std::optional<LogConcavityViolation> first_violation;
  bool log_concave() const { return !first_violation; }
};

LogConcavityReport check_log_concavity(const DHProfile& profile);

/// A strict local minimum, exact when lo == hi, otherwise isolated in (lo, hi).
struct LocalMinimum {
  Rational lo, hi;
  bool at_wall = false;
  bool exact() const { return lo == hi; }
};

std::vector<LocalMinimum> find_strict_local_minima(const DHProfile& profile);

/// True iff the slice keeps its combinatorial type across [lo, hi] and every
/// induced offset follows its affine law (c - eta_1 s) / g. Throws
/// Precondition when a critical value lies strictly inside.
bool chamber_affine_check(const LabeledPolytope& p, const Rational& lo, const Rational& hi);

struct FacetSlope {
  std::size_t source;  // facet of the input polytope
  Rational slope;      // d(offset)/ds of the primitive induced inequality
};

struct WallVertex {
  RatVector point;
  std::vector<Integer> weights;  // with respect to e_1
  VertexClass vertex_class;
  std::size_t exceptional;       // facet released along the edge that leaves the wall
  Integer induced_index;         // lattice index of the induced normals at the continued vertex
  bool z2 = false;               // weight -2 crossing
  Rational multiplier;           // 1 (smooth, 2 pi (s - a)) or 1/2 (Z2, pi (s - a))
  std::string tag;
};

struct WallSample {
  Rational s;
  bool match = false;      // slice equals the blown-up continued slice
  bool depth_law = false;  // every exceptional facet sits at depth s - a
  std::vector<Rational> depths;
};

struct WallReport {
  Rational a;
  Rational window;
  // Downward crossings ({1, -1, ..., -1}) are checked on the reversal and
  // reported back in the original coordinate; depths are then a - s.
  bool upward = true;
  std::vector<WallVertex> fixed;
  std::vector<WallSample> samples;
  std::vector<FacetSlope> lower_slopes;  // chamber below a
  std::vector<FacetSlope> upper_slopes;  // chamber above a
  bool exceptional_slopes_match = false;

  bool ok() const;
};

/// Throws WallNotSimpleCrossing when no vertex lies at level a or the weights
/// there are not of the shape {-1|-2, +, ..., +} (or its negative), and
/// Precondition when the window holds another critical value.
WallReport wall_crossing_check(const LabeledPolytope& p, const Rational& a,
                               std::optional<Rational> window = std::nullopt);

}  // namespace momentcut
