#include "momentcut/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "momentcut/error.hpp"

namespace momentcut {

namespace {

bool vec_less(const RatVector& a, const RatVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct PointLess {
  bool operator()(const RatVector& a, const RatVector& b) const { return vec_less(a, b); }
};

// Calls f on every k-subset of {0, ..., n-1} in lexicographic order.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Rational slack(const Facet& f, std::span<const Rational> x) { return f.offset - dot(f.normal, x); }

IntMatrix normal_matrix(const LabeledPolytope& p) {
  IntMatrix m;
  m.reserve(p.size());
  for (const auto& f : p.facets()) m.push_back(f.normal);
  return m;
}

// A point of the relative interior: centroid of the vertices pushed along
// every extreme ray.
RatVector relative_interior_point(const std::vector<Vertex>& pts, const std::vector<IntVector>& rays,
                                  std::size_t n) {
  RatVector c(n, 0);
  for (const auto& v : pts)
    for (std::size_t k = 0; k < n; ++k) c[k] += v.point[k];
  for (auto& x : c) x /= static_cast<long>(pts.size());
  for (const auto& r : rays)
    for (std::size_t k = 0; k < n; ++k) c[k] += r[k];
  return c;
}

// Affine dimension of a set of points and directions (-1 when empty).
long affine_dimension(const std::vector<const RatVector*>& pts, const std::vector<const IntVector*>& dirs) {
  if (pts.empty()) return -1;
  RatMatrix m;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RatVector d(pts[i]->size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (*pts[i])[k] - (*pts[0])[k];
    m.push_back(std::move(d));
  }
  for (const auto* r : dirs) m.emplace_back(r->begin(), r->end());
  return static_cast<long>(rank(m));
}

// Flags redundant facets given the vertex and ray data of p.
std::vector<bool> redundant_flags(const LabeledPolytope& p, const std::vector<Vertex>& pts,
                                  const std::vector<IntVector>& rays, bool pointed) {
  const std::size_t m = p.size();
  const long n = static_cast<long>(p.dim());
  std::vector<bool> redundant(m, false);

  // Parallel facets: keep the tightest, first on ties.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || p.facet(i).normal != p.facet(j).normal) continue;
      const auto& a = p.facet(i).offset;
      const auto& b = p.facet(j).offset;
      if (b < a || (b == a && j < i)) redundant[i] = true;
    }
  }
  if (!pointed) return redundant;

  for (std::size_t i = 0; i < m; ++i) {
    if (redundant[i]) continue;
    std::vector<const RatVector*> tp;
    for (const auto& v : pts)
      if (std::binary_search(v.active.begin(), v.active.end(), i)) tp.push_back(&v.point);
    std::vector<const IntVector*> tr;
    for (const auto& r : rays)
      if (dot(p.facet(i).normal, r) == 0) tr.push_back(&r);
    if (affine_dimension(tp, tr) < n - 1) redundant[i] = true;
  }
  return redundant;
}


// Machine-integer path for enumerate_points. Offsets are scaled to integers
// by their common denominator L; a basic solution is y / (D L) with D the
// determinant and y the Cramer numerators. Every operation is overflow
// checked and an overflow sends that subset back to the rational path.
class SmallSystem {
 public:
  enum class Status { Singular, Infeasible, Feasible, Overflow };
  struct Result {
    Status status;
    std::vector<long long> numer;
    Integer denom;
    std::vector<std::size_t> active;
  };

  static std::optional<SmallSystem> from(const LabeledPolytope& p) {
    SmallSystem s;
    s.n_ = p.dim();
    Integer l = 1;
    for (const auto& f : p.facets()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), f.offset.get_den_mpz_t());
    if (!l.fits_slong_p()) return std::nullopt;
    s.scale_ = l;
    for (const auto& f : p.facets()) {
      std::vector<long long> row;
      for (const auto& x : f.normal) {
        if (!x.fits_slong_p()) return std::nullopt;
        row.push_back(x.get_si());
      }
      Integer bi = f.offset.get_num() * (l / f.offset.get_den());
      if (!bi.fits_slong_p()) return std::nullopt;
      s.normals_.push_back(std::move(row));
      s.offsets_.push_back(bi.get_si());
    }
    return s;
  }

  Result solve(const std::vector<std::size_t>& idx) const {
    const std::size_t n = n_;
    Result r{Status::Overflow, {}, 0, {}};
    std::vector<long long> m(n * n);
    auto load = [&](std::size_t replaced) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < n; ++c) m[i * n + c] = c == replaced ? offsets_[idx[i]] : normals_[idx[i]][c];
    };
    load(n);
    auto d = det(m);
    if (!d) return r;
    if (*d == 0) return {Status::Singular, {}, 0, {}};
    std::vector<long long> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      load(k);
      auto dk = det(m);
      if (!dk) return r;
      y[k] = *dk;
    }
    const long long sign = *d > 0 ? 1 : -1;
    for (std::size_t j = 0; j < normals_.size(); ++j) {
      long long acc;
      if (__builtin_mul_overflow(offsets_[j], *d, &acc)) return {Status::Overflow, {}, 0, {}};
      for (std::size_t k = 0; k < n; ++k) {
        long long t;
        if (__builtin_mul_overflow(normals_[j][k], y[k], &t) || __builtin_sub_overflow(acc, t, &acc))
          return {Status::Overflow, {}, 0, {}};
      }
      if (acc * sign < 0) return {Status::Infeasible, {}, 0, {}};
      if (acc == 0) r.active.push_back(j);
    }
    r.status = Status::Feasible;
    r.numer = std::move(y);
    r.denom = Integer(static_cast<long>(*d)) * scale_;
    return r;
  }

 private:
  // Bareiss elimination; nullopt on overflow.
  std::optional<long long> det(std::vector<long long> m) const {
    const std::size_t n = n_;
    long long prev = 1, sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (m[k * n + k] == 0) {
        std::size_t piv = k + 1;
        while (piv < n && m[piv * n + k] == 0) ++piv;
        if (piv == n) return 0;
        for (std::size_t c = 0; c < n; ++c) std::swap(m[k * n + c], m[piv * n + c]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t c = k + 1; c < n; ++c) {
          __int128 v = static_cast<__int128>(m[i * n + c]) * m[k * n + k] -
                       static_cast<__int128>(m[i * n + k]) * m[k * n + c];
          v /= prev;
          if (v > INT64_MAX || v < INT64_MIN) return std::nullopt;
          m[i * n + c] = static_cast<long long>(v);
        }
        m[i * n + k] = 0;
      }
      prev = m[k * n + k];
    }
    return sign * m[n * n - 1];
  }

  std::size_t n_ = 0;
  Integer scale_ = 1;
  std::vector<std::vector<long long>> normals_;
  std::vector<long long> offsets_;
};

}  // namespace

const char* issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::DimensionTooLarge: return "DimensionTooLarge";
    case IssueKind::DuplicateNormal: return "DuplicateNormal";
    case IssueKind::Unbounded: return "Unbounded";
    case IssueKind::Empty: return "Empty";
    case IssueKind::NotFullDimensional: return "NotFullDimensional";
    case IssueKind::NotSimple: return "NotSimple";
    case IssueKind::Redundant: return "Redundant";
  }
  return "Unknown";
}

bool facet_less(const Facet& a, const Facet& b) {
  if (a.normal != b.normal)
    return std::lexicographical_compare(a.normal.begin(), a.normal.end(), b.normal.begin(), b.normal.end());
  if (a.offset != b.offset) return a.offset < b.offset;
  return a.label < b.label;
}

IntVector unit_vector(std::size_t n, std::size_t k) {
  IntVector e(n, 0);
  e.at(k) = 1;
  return e;
}

LabeledPolytope::LabeledPolytope(std::size_t dim, std::vector<Facet> facets)
    : dim_(dim), facets_(std::move(facets)) {
  if (dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "polytope dimension must be >= 1");
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const auto& f = facets_[i];
    if (f.normal.size() != dim_)
      throw Error(ErrorCode::DimensionMismatch,
                  "facet " + std::to_string(i) + ": normal has length " + std::to_string(f.normal.size()) +
                      ", expected " + std::to_string(dim_));
    Integer g = content(f.normal);
    if (g == 0) throw Error(ErrorCode::ZeroVector, "facet " + std::to_string(i) + ": zero normal");
    if (g != 1) throw Error(ErrorCode::InvalidPolytope, "facet " + std::to_string(i) + ": normal is not primitive");
    if (f.label < 1) throw Error(ErrorCode::InvalidPolytope, "facet " + std::to_string(i) + ": label must be >= 1");
  }
}

bool LabeledPolytope::contains(std::span<const Rational> x) const {
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return slack(f, x) >= 0; });
}

std::vector<Vertex> enumerate_points(const LabeledPolytope& p) {
  const std::size_t n = p.dim();
  const std::size_t m = p.size();
  std::map<RatVector, std::vector<std::size_t>, PointLess> found;
  auto fast = SmallSystem::from(p);
  RatMatrix a(n, RatVector(n));
  RatVector b(n);
  auto exact = [&](const std::vector<std::size_t>& idx) {
    for (std::size_t r = 0; r < n; ++r) {
      const auto& f = p.facet(idx[r]);
      for (std::size_t c = 0; c < n; ++c) a[r][c] = f.normal[c];
      b[r] = f.offset;
    }
    auto x = solve_exact(a, b);
    if (!x || found.count(*x)) return;
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < m; ++j) {
      Rational s = slack(p.facet(j), *x);
      if (s < 0) return;
      if (s == 0) active.push_back(j);
    }
    found.emplace(std::move(*x), std::move(active));
  };
  for_each_combination(m, n, [&](const std::vector<std::size_t>& idx) {
    if (!fast) return exact(idx);
    auto r = fast->solve(idx);
    if (r.status == SmallSystem::Status::Overflow) return exact(idx);
    if (r.status != SmallSystem::Status::Feasible) return;
    RatVector x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = make_rational(Integer(static_cast<long>(r.numer[k])), r.denom);
    if (!found.count(x)) found.emplace(std::move(x), std::move(r.active));
  });
  std::vector<Vertex> out;
  out.reserve(found.size());
  for (auto& [pt, act] : found) out.push_back(Vertex{pt, act});
  return out;
}

std::vector<Vertex> vertices(const LabeledPolytope& p) {
  auto pts = enumerate_points(p);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].active.size() > p.dim())
      throw Error(ErrorCode::NotSimple, "vertex " + std::to_string(i) + " has " +
                                            std::to_string(pts[i].active.size()) + " active facets (dimension " +
                                            std::to_string(p.dim()) + ")");
  return pts;
}

std::vector<IntVector> extreme_rays(const LabeledPolytope& p) {
  const std::size_t n = p.dim();
  const std::size_t m = p.size();
  std::set<IntVector> rays;
  auto consider = [&](const IntVector& d) {
    for (const auto& f : p.facets())
      if (dot(f.normal, d) > 0) return;
    rays.insert(primitive(d));
  };
  for_each_combination(m, n - 1, [&](const std::vector<std::size_t>& idx) {
    // Kernel of the (n-1) x n system via signed maximal minors.
    IntVector d(n);
    for (std::size_t k = 0; k < n; ++k) {
      IntMatrix minor;
      for (auto i : idx) {
        IntVector row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != k) row.push_back(p.facet(i).normal[c]);
        minor.push_back(std::move(row));
      }
      Integer det = determinant(minor);
      d[k] = (k % 2 == 0) ? det : Integer(-det);
    }
    if (content(d) == 0) return;
    consider(d);
    IntVector neg(d);
    for (auto& x : neg) x = -x;
    consider(neg);
  });
  return {rays.begin(), rays.end()};
}

bool is_bounded(const LabeledPolytope& p) {
  if (rank(normal_matrix(p)) < p.dim()) return false;
  return extreme_rays(p).empty();
}

RedundancyResult remove_redundant(const LabeledPolytope& p) {
  const bool pointed = rank(normal_matrix(p)) == p.dim();
  std::vector<Vertex> pts;
  std::vector<IntVector> rays;
  if (pointed) {
    pts = enumerate_points(p);
    rays = extreme_rays(p);
  }
  // An empty pointed polyhedron has no faces to test against; leave it be.
  const bool testable = pointed && !pts.empty();
  auto flags = redundant_flags(p, pts, rays, testable);
  std::vector<Facet> facets;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (flags[i]) continue;
    facets.push_back(p.facet(i));
    kept.push_back(i);
  }
  return {LabeledPolytope(p.dim(), std::move(facets)), std::move(kept)};
}

CanonicalResult canonical_form(const LabeledPolytope& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return facet_less(p.facet(a), p.facet(b)); });
  std::vector<Facet> facets;
  facets.reserve(p.size());
  for (auto i : order) facets.push_back(p.facet(i));
  return {LabeledPolytope(p.dim(), std::move(facets)), std::move(order)};
}

bool canonical_equal(const LabeledPolytope& p, const LabeledPolytope& q) {
  if (p.dim() != q.dim()) return false;
  return canonical_form(remove_redundant(p).polytope).polytope ==
         canonical_form(remove_redundant(q).polytope).polytope;
}

ValidationReport validate(const LabeledPolytope& p) {
  ValidationReport report;
  const std::size_t n = p.dim();
  if (n > kMaxDimension) {
    report.issues.push_back({IssueKind::DimensionTooLarge, std::nullopt, std::nullopt,
                             "dimension " + std::to_string(n) + " exceeds the supported maximum of " +
                                 std::to_string(kMaxDimension)});
    return report;
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p.facet(i).normal == p.facet(j).normal)
        report.issues.push_back({IssueKind::DuplicateNormal, j, std::nullopt,
                                 "facet " + std::to_string(j) + " has the same normal as facet " + std::to_string(i)});

  if (rank(normal_matrix(p)) < n) {
    report.issues.push_back({IssueKind::Unbounded, std::nullopt, std::nullopt,
                             "facet normals do not span R^" + std::to_string(n) + " (polyhedron contains a line)"});
    return report;
  }
  auto rays = extreme_rays(p);
  if (!rays.empty()) {
    std::string dir;
    for (std::size_t k = 0; k < rays.front().size(); ++k) dir += (k ? "," : "") + rays.front()[k].get_str();
    report.issues.push_back({IssueKind::Unbounded, std::nullopt, std::nullopt,
                             "unbounded in direction (" + dir + ")"});
  }
  auto pts = enumerate_points(p);
  if (pts.empty()) {
    report.issues.push_back({IssueKind::Empty, std::nullopt, std::nullopt, "the inequalities have no common solution"});
    return report;
  }
  RatVector c = relative_interior_point(pts, rays, n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (slack(p.facet(i), c) == 0) {
      report.issues.push_back({IssueKind::NotFullDimensional, i, std::nullopt,
                               "facet " + std::to_string(i) + " holds with equality on the whole polytope"});
      return report;
    }
  }
  auto flags = redundant_flags(p, pts, rays, true);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (flags[i])
      report.issues.push_back({IssueKind::Redundant, i, std::nullopt,
                               "facet " + std::to_string(i) + " is redundant"});
  for (std::size_t v = 0; v < pts.size(); ++v) {
    std::size_t essential = 0;
    for (auto i : pts[v].active)
      if (!flags[i]) ++essential;
    if (essential > n)
      report.issues.push_back({IssueKind::NotSimple, std::nullopt, v,
                               "vertex " + std::to_string(v) + " lies on " + std::to_string(essential) +
                                   " facets (dimension " + std::to_string(n) + ")"});
  }
  return report;
}

SliceResult slice(const LabeledPolytope& p, const Rational& s) {
  const std::size_t n = p.dim();
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "slice needs dimension >= 2");
  SliceResult out;
  std::vector<Facet> facets;
  std::vector<std::size_t> source;
  std::vector<Integer> mult;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& f = p.facet(i);
    IntVector rest(f.normal.begin() + 1, f.normal.end());
    Rational off = f.offset - f.normal[0] * s;
    Integer g = content(rest);
    if (g == 0) {
      if (off < 0) return out;  // the hyperplane misses the polytope
      continue;
    }
    for (auto& x : rest) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    facets.push_back(Facet{std::move(rest), off / g, f.label});
    source.push_back(i);
    mult.push_back(g);
  }
  LabeledPolytope q(n - 1, std::move(facets));
  if (rank(normal_matrix(q)) < n - 1) {
    // Only reachable for unbounded input; keep the raw inequalities.
    out.polytope = remove_redundant(q).polytope;
    out.source = source;
    out.multiplicity = mult;
    return out;
  }
  auto pts = enumerate_points(q);
  if (pts.empty()) return out;
  auto rays = extreme_rays(q);
  RatVector c = relative_interior_point(pts, rays, n - 1);
  for (const auto& f : q.facets()) {
    if (slack(f, c) == 0) {
      out.degenerate = true;
      return out;
    }
  }
  auto reduced = remove_redundant(q);
  for (auto k : reduced.kept) {
    out.source.push_back(source[k]);
    out.multiplicity.push_back(mult[k]);
  }
  out.polytope = std::move(reduced.polytope);
  return out;
}

namespace {

class Triangulator {
 public:
  Triangulator(std::size_t n, std::size_t facets, const std::vector<Vertex>& verts)
      : n_(n), verts_(verts), tight_(facets) {
    for (std::size_t v = 0; v < verts.size(); ++v)
      for (auto f : verts[v].active) tight_[f].push_back(v);
  }

  Rational volume() {
    std::vector<std::size_t> all(verts_.size());
    std::iota(all.begin(), all.end(), 0);
    Rational total = 0;
    for (const auto& simplex : triangulate(all, {}, n_)) {
      RatMatrix m;
      for (std::size_t k = 1; k < simplex.size(); ++k) {
        RatVector d(n_);
        for (std::size_t c = 0; c < n_; ++c) d[c] = verts_[simplex[k]].point[c] - verts_[simplex[0]].point[c];
        m.push_back(std::move(d));
      }
      total += abs(determinant(m));
    }
    Integer fact = 1;
    for (std::size_t k = 2; k <= n_; ++k) fact *= static_cast<unsigned long>(k);
    return total / fact;
  }

 private:
  using Simplex = std::vector<std::size_t>;

  // Pulling triangulation of the face with vertex set `face` cut out by the
  // facets in `on`. In a simple polytope each further facet meeting the face
  // cuts out a facet of it.
  const std::vector<Simplex>& triangulate(const std::vector<std::size_t>& face, const std::vector<std::size_t>& on,
                                          std::size_t d) {
    auto it = memo_.find(face);
    if (it != memo_.end()) return it->second;
    std::vector<Simplex> out;
    if (d == 0) {
      out.push_back({face.front()});
    } else {
      const std::size_t apex = face.front();
      std::set<std::vector<std::size_t>> seen;
      for (std::size_t f = 0; f < tight_.size(); ++f) {
        if (std::find(on.begin(), on.end(), f) != on.end()) continue;
        std::vector<std::size_t> sub;
        std::set_intersection(face.begin(), face.end(), tight_[f].begin(), tight_[f].end(), std::back_inserter(sub));
        if (sub.empty() || sub.size() == face.size() || !seen.insert(sub).second) continue;
        if (std::binary_search(sub.begin(), sub.end(), apex)) continue;
        auto sub_on = on;
        sub_on.push_back(f);
        for (const auto& s : triangulate(sub, sub_on, d - 1)) {
          Simplex t{apex};
          t.insert(t.end(), s.begin(), s.end());
          out.push_back(std::move(t));
        }
      }
    }
    return memo_.emplace(face, std::move(out)).first->second;
  }

  std::size_t n_;
  const std::vector<Vertex>& verts_;
  std::vector<std::vector<std::size_t>> tight_;
  std::map<std::vector<std::size_t>, std::vector<Simplex>> memo_;
};

}  // namespace

Rational volume(const LabeledPolytope& p) {
  LabeledPolytope q = remove_redundant(p).polytope;
  auto verts = vertices(q);
  if (verts.empty()) return 0;
  if (!is_bounded(q)) throw Error(ErrorCode::InvalidPolytope, "volume of an unbounded polyhedron");
  return Triangulator(q.dim(), q.size(), verts).volume();
}

bool is_regular_level(const LabeledPolytope& p, const Rational& a) {
  for (const auto& v : enumerate_points(p))
    if (v.point[0] == a) return false;
  return true;
}

std::pair<Rational, Rational> first_coordinate_range(const LabeledPolytope& p) {
  auto pts = enumerate_points(p);
  if (pts.empty()) throw Error(ErrorCode::InvalidPolytope, "polytope has no vertices");
  Rational lo = pts.front().point[0], hi = lo;
  for (const auto& v : pts) {
    lo = std::min(lo, v.point[0]);
    hi = std::max(hi, v.point[0]);
  }
  return {lo, hi};
}

LabeledPolytope transform(const LabeledPolytope& p, const IntMatrix& a, const RatVector& b) {
  const std::size_t n = p.dim();
  if (a.size() != n || b.size() != n) throw Error(ErrorCode::DimensionMismatch, "transform: shape mismatch");
  IntMatrix inv = unimodular_inverse(a);
  std::vector<Facet> facets;
  facets.reserve(p.size());
  for (const auto& f : p.facets()) {
    // (A^{-T} eta)_k = sum_j inv[j][k] eta_j
    IntVector eta(n, 0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) eta[k] += inv[j][k] * f.normal[j];
    Rational off = f.offset + dot(eta, b);
    facets.push_back(Facet{std::move(eta), off, f.label});
  }
  return LabeledPolytope(n, std::move(facets));
}

LabeledPolytope intersect_halfspace(const LabeledPolytope& p, const IntVector& normal, const Rational& offset,
                                    long label) {
  Integer g = content(normal);
  if (g == 0) throw Error(ErrorCode::ZeroVector, "half-space with zero normal");
  std::vector<Facet> facets = p.facets();
  facets.push_back(Facet{primitive(normal), offset / g, label});
  return remove_redundant(LabeledPolytope(p.dim(), std::move(facets))).polytope;
}

}  // namespace momentcut
