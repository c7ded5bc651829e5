#include "momentcut/ops.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

#include "momentcut/error.hpp"

namespace momentcut {

namespace {

void require_regular(const LabeledPolytope& p, const Rational& a) {
  if (!is_regular_level(p, a))
    throw Error(ErrorCode::NotRegularLevel, "level " + to_string(a) + " is the first coordinate of a vertex");
}

std::string facet_text(const Facet& f) {
  std::string s = "[";
  for (std::size_t k = 0; k < f.normal.size(); ++k) s += (k ? "," : "") + f.normal[k].get_str();
  return s + "]<=" + to_string(f.offset) + "#" + std::to_string(f.label);
}

}  // namespace

std::string fingerprint(const LabeledPolytope& p) {
  auto c = canonical_form(p).polytope;
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  feed(std::to_string(c.dim()));
  for (const auto& f : c.facets()) feed(facet_text(f));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

Reduction reduce(const LabeledPolytope& p, const Rational& a) {
  require_regular(p, a);
  auto s = slice(p, a);
  if (s.empty()) throw Error(ErrorCode::EmptyResult, "level " + to_string(a) + " misses the polytope");
  auto canon = canonical_form(*s.polytope);
  Reduction out{canon.polytope, {}};
  for (std::size_t k = 0; k < canon.order.size(); ++k) {
    const std::size_t src = s.source[canon.order[k]];
    const std::size_t face[] = {src};
    out.stabilizers.push_back({k, src, s.multiplicity[canon.order[k]], circle_stabilizer_order(p, face)});
  }
  return out;
}

LabeledPolytope cut(const LabeledPolytope& p, const Rational& a, CutSide side) {
  require_regular(p, a);
  IntVector normal = unit_vector(p.dim(), 0);
  Rational offset = a;
  if (side == CutSide::Above) {
    normal[0] = -1;
    offset = -a;
  }
  LabeledPolytope out = intersect_halfspace(p, normal, offset);
  if (rank([&] {
        IntMatrix m;
        for (const auto& f : out.facets()) m.push_back(f.normal);
        return m;
      }()) == out.dim() &&
      enumerate_points(out).empty())
    throw Error(ErrorCode::EmptyResult, "cut at " + to_string(a) + " leaves nothing on the kept side");
  return canonical_form(out).polytope;
}

LabeledPolytope compactify(const LabeledPolytope& p, const Rational& a, const Rational& b) {
  if (!(a < b)) throw Error(ErrorCode::Precondition, "compactify needs min < max");
  return cut(cut(p, b, CutSide::Below), a, CutSide::Above);
}

LabeledPolytope reversed(const LabeledPolytope& p) {
  IntMatrix flip = identity_matrix(p.dim());
  flip[0][0] = -1;
  return canonical_form(transform(p, flip, RatVector(p.dim(), 0))).polytope;
}

BlowupResult blowup(const LabeledPolytope& p, const BlowupParams& params, ClassLedger ledger) {
  const std::size_t n = p.dim();
  const Vertex& v = params.vertex;
  if (params.depth <= 0) throw Error(ErrorCode::Precondition, "blow-up depth must be positive");
  VertexClass cls = classify_vertex(p, v);
  for (auto i : v.active)
    if (p.facet(i).label != 1)
      throw Error(ErrorCode::VertexNotBlowable, "facet " + std::to_string(i) + " at the vertex carries label " +
                                                    std::to_string(p.facet(i).label));
  if (cls.kind == VertexKind::OtherOrbifold)
    throw Error(ErrorCode::VertexNotBlowable,
                "vertex has lattice index " + cls.index.get_str() + " and is neither smooth nor a Z2 point");

  IntVector sum(n, 0);
  Rational level = 0;
  for (auto i : v.active) {
    const auto& f = p.facet(i);
    for (std::size_t k = 0; k < n; ++k) sum[k] += f.normal[k];
    level += dot(f.normal, v.point);
  }
  Rational chop = level - params.depth;
  Integer g = content(sum);
  Facet exceptional{primitive(sum), chop / g, 1};

  for (const auto& w : enumerate_points(p)) {
    if (w.point == v.point) continue;
    if (!(dot(sum, w.point) < chop))
      throw Error(ErrorCode::BlowupTooLarge,
                  "depth " + to_string(params.depth) + " reaches another vertex of the polytope");
  }

  std::vector<Facet> facets = p.facets();
  facets.push_back(exceptional);
  LabeledPolytope raw(n, std::move(facets));
  if (!validate(raw).valid())
    throw Error(ErrorCode::BlowupTooLarge, "depth " + to_string(params.depth) + " does not give a simple polytope");

  auto canon = canonical_form(raw);
  std::vector<std::size_t> new_index(raw.size());
  for (std::size_t k = 0; k < canon.order.size(); ++k) new_index[canon.order[k]] = k;
  if (ledger.base.empty()) ledger.base = fingerprint(p);
  for (auto& t : ledger.terms) t.facet = new_index.at(t.facet);
  const std::size_t exc = new_index[raw.size() - 1];
  const bool z2 = cls.kind == VertexKind::Z2Singular;
  ledger.terms.push_back(LedgerTerm{exc, z2 ? Rational(1, 2) : Rational(1), params.depth, z2});
  return {canon.polytope, std::move(ledger), exc};
}

PipelineResult add_fixed_points(const LabeledPolytope& p, const Rational& eps) {
  const std::size_t n = p.dim();
  if (eps <= 0) throw Error(ErrorCode::Precondition, "eps must be positive");
  require_regular(p, eps);
  require_regular(p, Rational(0));
  for (const auto& c : fixed_components(p))
    if (c.level > 0 && c.level <= eps)
      throw Error(ErrorCode::Precondition,
                  "a fixed component lies at x_1 = " + to_string(c.level) + ", inside (0, eps]");

  LabeledPolytope current = cut(p, eps, CutSide::Below);
  PipelineReport report;
  report.eps = eps;
  ClassLedger ledger{fingerprint(current), {}};

  for (const auto& v : vertices(current)) {
    if (v.point[0] != eps) continue;
    VertexClass cls = classify_vertex(current, v);
    const bool unlabeled =
        std::all_of(v.active.begin(), v.active.end(), [&](std::size_t i) { return current.facet(i).label == 1; });
    if (!unlabeled || cls.kind == VertexKind::OtherOrbifold)
      throw Error(ErrorCode::Precondition, "vertex on the cut facet is neither smooth nor a Z2 point");
    if (cls.kind == VertexKind::Z2Singular)
      report.z2_vertices.push_back(v.point);
    else
      report.smooth_vertices.push_back(v.point);
  }

  for (const auto& pt : report.z2_vertices) {
    auto verts = vertices(current);
    auto it = std::find_if(verts.begin(), verts.end(), [&](const Vertex& w) { return w.point == pt; });
    if (it == verts.end()) throw Error(ErrorCode::BlowupTooLarge, "a Z2 vertex was removed by an earlier blow-up");
    auto r = blowup(current, BlowupParams{*it, eps}, std::move(ledger));
    report.blowups.push_back({pt, r.polytope.facet(r.exceptional_facet), r.ledger.terms.back().multiplier});
    current = std::move(r.polytope);
    ledger = std::move(r.ledger);
  }

  const IntVector e1 = unit_vector(n, 0);
  std::vector<Integer> expected(n, 1);
  expected[0] = -2;
  report.weights_match = true;
  for (const auto& v : vertices(current)) {
    if (v.point[0] != 0) continue;
    auto w = weights_at_vertex(current, v, e1);
    const bool ok = w == expected;
    report.weights_match = report.weights_match && ok;
    report.new_fixed.push_back({v.point, w, classify_vertex(current, v), ok});
  }
  report.count_matches = report.new_fixed.size() == report.z2_vertices.size();

  IntVector e1_up = e1;
  report.agrees_below_zero =
      canonical_equal(intersect_halfspace(current, e1_up, 0), intersect_halfspace(p, e1_up, 0));

  return {std::move(current), std::move(ledger), std::move(report)};
}

}  // namespace momentcut
