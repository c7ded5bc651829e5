#include "momentcut/toric.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "momentcut/error.hpp"

namespace momentcut {

const char* vertex_kind_name(VertexKind kind) {
  switch (kind) {
    case VertexKind::Smooth: return "Smooth";
    case VertexKind::Z2Singular: return "Z2Singular";
    case VertexKind::OtherOrbifold: return "OtherOrbifold";
  }
  return "Unknown";
}

namespace {

std::vector<IntVector> active_normals(const LabeledPolytope& p, const Vertex& v) {
  std::vector<IntVector> out;
  out.reserve(v.active.size());
  for (auto i : v.active) out.push_back(p.facet(i).normal);
  return out;
}

bool in_span(const std::vector<IntVector>& vs, const IntVector& x) {
  IntMatrix m(vs.begin(), vs.end());
  const std::size_t r = rank(m);
  m.push_back(x);
  return rank(m) == r;
}

}  // namespace

VertexClass classify_vertex(const LabeledPolytope& p, const Vertex& v) {
  auto normals = active_normals(p, v);
  if (normals.size() != p.dim())
    throw Error(ErrorCode::DegenerateVertex, "vertex has " + std::to_string(normals.size()) + " active facets");
  auto idx = lattice_index(normals);
  if (!idx) throw Error(ErrorCode::DegenerateVertex, "active normals are linearly dependent");
  VertexClass c{VertexKind::OtherOrbifold, *idx, half_sum_integral(normals)};
  const bool unlabeled = std::all_of(v.active.begin(), v.active.end(), [&](std::size_t i) { return p.facet(i).label == 1; });
  if (*idx == 1 && unlabeled) {
    c.kind = VertexKind::Smooth;
  } else if (*idx == 2 && c.half_sum_integral && unlabeled) {
    c.kind = VertexKind::Z2Singular;
  }
  return c;
}

std::vector<IntVector> edge_generators(const LabeledPolytope& p, const Vertex& v) {
  const std::size_t n = p.dim();
  if (v.active.size() != n)
    throw Error(ErrorCode::DegenerateVertex, "edge generators need exactly n active facets");
  RatMatrix a(n, RatVector(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a[r][c] = p.facet(v.active[r]).normal[c];
  std::vector<IntVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVector rhs(n, 0);
    rhs[i] = -1;
    auto e = solve_exact(a, rhs);
    if (!e) throw Error(ErrorCode::DegenerateVertex, "edge directions at the vertex are not unique");
    out.push_back(primitive_integer_direction(*e));
  }
  return out;
}

std::vector<Integer> weights_at_vertex(const LabeledPolytope& p, const Vertex& v, const IntVector& xi) {
  std::vector<Integer> w;
  for (const auto& e : edge_generators(p, v)) w.push_back(dot(xi, e));
  std::sort(w.begin(), w.end());
  return w;
}

StabilizerOrder circle_stabilizer_order(const LabeledPolytope& p, std::span<const std::size_t> face) {
  const std::size_t n = p.dim();
  StabilizerOrder out;
  long label_product = 1;
  for (auto i : face) {
    if (p.facet(i).label > 1) {
      if (face.size() > 1)
        throw Error(ErrorCode::LabeledFaceUnsupported,
                    "stabilizer of a codimension >= 2 face with a labeled facet is not supported");
      label_product = p.facet(i).label;
    }
  }
  // Columns are the face normals. In the basis given by the left Smith
  // transform their span is the first r coordinate axes, so the image of e_1
  // in Z^n / (span cap Z^n) is read off the trailing coordinates.
  IntMatrix m(n, IntVector(face.size()));
  for (std::size_t c = 0; c < face.size(); ++c)
    for (std::size_t r = 0; r < n; ++r) m[r][c] = p.facet(face[c]).normal[r];
  std::size_t r = 0;
  IntMatrix left = identity_matrix(n);
  if (!face.empty()) {
    auto snf = smith_normal_form(m);
    for (const auto& d : snf.diagonal)
      if (d != 0) ++r;
    left = std::move(snf.left);
  }
  IntVector trailing;
  for (std::size_t k = r; k < n; ++k) trailing.push_back(left[k][0]);
  Integer g = content(trailing);
  if (g == 0) {
    out.infinite = true;
    out.order = 0;
    out.labeled_total = 0;
    return out;
  }
  out.order = g;
  out.labeled_total = g * label_product;
  return out;
}

std::vector<FixedComponent> fixed_components(const LabeledPolytope& p) {
  const std::size_t n = p.dim();
  const IntVector e1 = unit_vector(n, 0);
  auto verts = vertices(p);

  std::map<std::vector<std::size_t>, bool> memo;
  auto contains_e1 = [&](const std::vector<std::size_t>& s) {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    std::vector<IntVector> normals;
    for (auto i : s) normals.push_back(p.facet(i).normal);
    bool r = !s.empty() && in_span(normals, e1);
    memo.emplace(s, r);
    return r;
  };

  std::set<std::vector<std::size_t>> minimal;
  for (const auto& v : verts) {
    const std::size_t k = v.active.size();
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t b = 0; b < k; ++b)
        if (mask & (1u << b)) s.push_back(v.active[b]);
      if (!contains_e1(s)) continue;
      bool is_min = true;
      for (std::size_t drop = 0; drop < s.size() && is_min; ++drop) {
        std::vector<std::size_t> t = s;
        t.erase(t.begin() + static_cast<long>(drop));
        if (contains_e1(t)) is_min = false;
      }
      if (is_min) minimal.insert(s);
    }
  }

  std::vector<FixedComponent> out;
  for (const auto& s : minimal) {
    FixedComponent c{s, {}, 0, n - s.size()};
    for (std::size_t vi = 0; vi < verts.size(); ++vi)
      if (std::includes(verts[vi].active.begin(), verts[vi].active.end(), s.begin(), s.end()))
        c.vertices.push_back(vi);
    c.level = verts[c.vertices.front()].point[0];
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [&](const FixedComponent& a, const FixedComponent& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.facets < b.facets;
  });
  return out;
}

}  // namespace momentcut
