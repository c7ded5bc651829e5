#include "momentcut/dh.hpp"

#include <algorithm>
#include <set>

#include "momentcut/error.hpp"
#include "momentcut/ops.hpp"

namespace momentcut {

std::vector<Rational> critical_values(const LabeledPolytope& p) {
  std::vector<Rational> out;
  for (const auto& v : vertices(p)) out.push_back(v.point[0]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational DHProfile::operator()(const Rational& s) const {
  if (walls.empty() || s < walls.front() || s > walls.back()) return 0;
  for (std::size_t k = 0; k < walls.size(); ++k)
    if (walls[k] == s) return values[k];
  std::size_t k = std::upper_bound(walls.begin(), walls.end(), s) - walls.begin() - 1;
  return polys[k](s);
}

Rational DHProfile::integral() const {
  Rational total = 0;
  for (std::size_t k = 0; k < polys.size(); ++k) total += polys[k].integrate(walls[k], walls[k + 1]);
  return total;
}

std::vector<Rational> chamber_samples(const Rational& lo, const Rational& hi, std::size_t count) {
  std::vector<Rational> out;
  const Rational step = (hi - lo) / Rational(static_cast<unsigned long>(count + 1));
  for (std::size_t k = 1; k <= count; ++k) out.push_back(lo + step * Rational(static_cast<unsigned long>(k)));
  return out;
}

namespace {

Rational slice_volume(const LabeledPolytope& p, const Rational& s) {
  auto sl = slice(p, s);
  return sl.empty() ? Rational(0) : volume(*sl.polytope);
}

int sign(const Rational& q) { return sgn(q); }

// Sign of p(s) - p(a) as s -> a from the right (+1) or left (-1); 0 when p is constant.
int one_sided_trend(const Polynomial& p, const Rational& a, int side) {
  Polynomial d = p.derivative();
  for (int k = 1; !d.is_zero(); ++k, d = d.derivative()) {
    const int s = sign(d(a));
    if (s != 0) return (side < 0 && k % 2 == 1) ? -s : s;
  }
  return 0;
}

}  // namespace

DHProfile dh_profile(const LabeledPolytope& p) {
  const std::size_t n = p.dim();
  if (n < 2) throw Error(ErrorCode::Precondition, "the DH profile needs dimension >= 2");
  DHProfile out;
  out.walls = critical_values(p);
  for (const auto& w : out.walls) out.values.push_back(slice_volume(p, w));
  for (std::size_t k = 0; k + 1 < out.walls.size(); ++k) {
    auto xs = chamber_samples(out.walls[k], out.walls[k + 1], n + 1);
    std::vector<Rational> ys;
    for (const auto& s : xs) ys.push_back(slice_volume(p, s));
    auto poly = interpolate(std::span(xs).first(n), std::span(ys).first(n));
    if (poly(xs[n]) != ys[n])
      throw Error(ErrorCode::InterpolationMismatch,
                  "chamber (" + to_string(out.walls[k]) + ", " + to_string(out.walls[k + 1]) +
                      ") is not polynomial of degree <= " + std::to_string(n - 1));
    out.polys.push_back(std::move(poly));
  }
  return out;
}

DHProfile profile_from_polys(std::vector<Rational> walls, std::vector<Polynomial> polys) {
  if (walls.size() != polys.size() + 1 || polys.empty())
    throw Error(ErrorCode::DimensionMismatch, "a profile needs one more wall than chambers");
  DHProfile out{std::move(walls), std::move(polys), {}};
  out.values.push_back(out.polys.front()(out.walls.front()));
  for (std::size_t k = 1; k < out.walls.size(); ++k) out.values.push_back(out.polys[k - 1](out.walls[k]));
  return out;
}

LogConcavityReport check_log_concavity(const DHProfile& profile) {
  LogConcavityReport r;
  for (std::size_t k = 0; k < profile.chambers(); ++k) {
    const auto& mu = profile.polys[k];
    const auto d1 = mu.derivative();
    auto g = mu * d1.derivative() - d1 * d1;
    if (!r.first_violation && !nonpositive_on(g, profile.walls[k], profile.walls[k + 1]))
      r.first_violation = {LogConcavityViolation::Where::Chamber, k, "mu mu'' - mu'^2 takes a positive value"};
    r.g.push_back(std::move(g));
  }
  for (std::size_t j = 1; j + 1 < profile.walls.size() && !r.first_violation; ++j) {
    const Rational& a = profile.walls[j];
    const auto& left = profile.polys[j - 1];
    const auto& right = profile.polys[j];
    const Rational l = left(a), rv = right(a), v = profile.values[j];
    if (l != v || rv != v) {
      r.first_violation = {LogConcavityViolation::Where::Wall, j, "mu jumps at " + to_string(a)};
    } else if (v <= 0) {
      r.first_violation = {LogConcavityViolation::Where::Wall, j, "mu vanishes at interior wall " + to_string(a)};
    } else if (left.derivative()(a) < right.derivative()(a)) {
      r.first_violation = {LogConcavityViolation::Where::Wall, j,
                           "log-derivative increases across " + to_string(a) + ": " +
                               to_string(left.derivative()(a) / v) + " then " + to_string(right.derivative()(a) / v)};
    }
  }
  return r;
}

std::vector<LocalMinimum> find_strict_local_minima(const DHProfile& profile) {
  std::vector<LocalMinimum> out;
  for (std::size_t k = 0; k < profile.chambers(); ++k) {
    if (k > 0) {
      const Rational& a = profile.walls[k];
      const auto& left = profile.polys[k - 1];
      const auto& right = profile.polys[k];
      const Rational v = profile.values[k];
      const Rational l = left(a), r = right(a);
      // Near a on each side mu - v is positive iff the limit exceeds v, or
      // equals it and the first nonzero derivative points upward away from a.
      const bool left_up = l > v || (l == v && one_sided_trend(left, a, -1) > 0);
      const bool right_up = r > v || (r == v && one_sided_trend(right, a, +1) > 0);
      if (left_up && right_up) out.push_back({a, a, true});
    }
    const auto d = profile.polys[k].derivative();
    if (d.is_zero()) continue;
    auto gs = gap_signs(d, profile.walls[k], profile.walls[k + 1]);
    for (std::size_t i = 0; i < gs.roots.size(); ++i)
      if (gs.signs[i] < 0 && gs.signs[i + 1] > 0) out.push_back({gs.roots[i].lo, gs.roots[i].hi, false});
  }
  return out;
}

bool chamber_affine_check(const LabeledPolytope& p, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw Error(ErrorCode::Precondition, "interval must have lo < hi");
  for (const auto& c : critical_values(p))
    if (lo < c && c < hi)
      throw Error(ErrorCode::Precondition, "critical value " + to_string(c) + " lies inside the interval");
  using Incidence = std::vector<std::vector<std::size_t>>;
  std::optional<std::pair<std::vector<std::size_t>, Incidence>> first;
  for (const Rational& q : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
    const Rational s = lo + (hi - lo) * q;
    auto sl = slice(p, s);
    if (sl.empty()) return false;
    const auto& poly = *sl.polytope;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const auto& src = p.facet(sl.source[k]);
      const Integer& g = sl.multiplicity[k];
      for (std::size_t c = 1; c < p.dim(); ++c)
        if (poly.facet(k).normal[c - 1] * g != src.normal[c]) return false;
      if (poly.facet(k).offset != (src.offset - src.normal[0] * s) / g) return false;
    }
    std::vector<std::size_t> sources(sl.source.begin(), sl.source.end());
    std::sort(sources.begin(), sources.end());
    Incidence inc;
    for (const auto& v : vertices(poly)) {
      std::vector<std::size_t> f;
      for (auto i : v.active) f.push_back(sl.source[i]);
      std::sort(f.begin(), f.end());
      inc.push_back(std::move(f));
    }
    std::sort(inc.begin(), inc.end());
    if (!first)
      first.emplace(std::move(sources), std::move(inc));
    else if (first->first != sources || first->second != inc)
      return false;
  }
  return true;
}

bool WallReport::ok() const {
  if (fixed.empty() || samples.empty() || !exceptional_slopes_match) return false;
  return std::all_of(samples.begin(), samples.end(), [](const WallSample& s) { return s.match && s.depth_law; });
}

namespace {

enum class Shape { Up, Down, Other };

Shape shape_of(const std::vector<Integer>& w) {
  const std::size_t n = w.size();
  bool up = (w[0] == -1 || w[0] == -2);
  for (std::size_t k = 1; k < n && up; ++k) up = w[k] > 0;
  if (up) return Shape::Up;
  bool down = (w[n - 1] == 1 || w[n - 1] == 2);
  for (std::size_t k = 0; k + 1 < n && down; ++k) down = w[k] < 0;
  return down ? Shape::Down : Shape::Other;
}

IntVector tail(const IntVector& v) { return IntVector(v.begin() + 1, v.end()); }

std::vector<FacetSlope> slopes_at(const LabeledPolytope& p, const Rational& s) {
  std::vector<FacetSlope> out;
  auto sl = slice(p, s);
  if (sl.empty()) return out;
  for (std::size_t k = 0; k < sl.polytope->size(); ++k)
    out.push_back({sl.source[k], -Rational(p.facet(sl.source[k]).normal[0]) / Rational(sl.multiplicity[k])});
  std::sort(out.begin(), out.end(), [](const FacetSlope& x, const FacetSlope& y) { return x.source < y.source; });
  return out;
}

std::string tag_for(const Rational& a, bool z2) {
  const std::string head = z2 ? "pi*" : "2*pi*";
  if (a == 0) return head + "s";
  return head + "(s - " + to_string(a) + ")";
}

WallReport upward_check(const LabeledPolytope& p, const Rational& a, const Rational& w,
                        const std::vector<Vertex>& at_wall) {
  const std::size_t n = p.dim();
  WallReport rep;
  rep.a = a;
  rep.window = w;

  struct Chop {
    std::vector<std::size_t> kept;  // active facets other than the exceptional one
    std::size_t exceptional;
  };
  std::vector<Chop> chops;
  const IntVector e1 = unit_vector(n, 0);
  for (const auto& v : at_wall) {
    auto gens = edge_generators(p, v);
    std::size_t released = n;
    Integer wdown = 0;
    for (std::size_t k = 0; k < n; ++k) {
      Integer x = dot(e1, gens[k]);
      if (x < 0) {
        released = k;
        wdown = x;
      }
    }
    Chop c{{}, v.active[released]};
    std::vector<IntVector> induced;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == released) continue;
      c.kept.push_back(v.active[k]);
      induced.push_back(tail(p.facet(v.active[k]).normal));
    }
    auto idx = n >= 2 ? lattice_index(induced) : std::optional<Integer>(1);
    if (!idx) throw Error(ErrorCode::WallNotSimpleCrossing, "induced normals at the continued vertex are dependent");
    const bool z2 = wdown == -2;
    if (z2 && !(*idx == 2 && half_sum_integral(induced)))
      throw Error(ErrorCode::WallNotSimpleCrossing,
                  "weight -2 vertex without the Z2 local condition on its induced normals");
    WallVertex wv{v.point, weights_at_vertex(p, v, e1), classify_vertex(p, v), c.exceptional, *idx, z2,
                  z2 ? Rational(1, 2) : Rational(1), tag_for(a, z2)};
    rep.fixed.push_back(std::move(wv));
    chops.push_back(std::move(c));
  }

  // Facets of the lower chamber, continued by their affine offset laws.
  std::vector<std::size_t> lower;
  {
    auto sl = slice(p, a - w / 2);
    if (sl.empty()) throw Error(ErrorCode::WallNotSimpleCrossing, "nothing below the wall");
    lower.assign(sl.source.begin(), sl.source.end());
    std::sort(lower.begin(), lower.end());
  }
  auto induced_offset = [&](std::size_t i, const Rational& s) -> Rational {
    return p.facet(i).offset - p.facet(i).normal[0] * s;
  };
  auto continued = [&](const Rational& s) {
    std::vector<Facet> fs;
    for (auto i : lower) {
      IntVector eta = tail(p.facet(i).normal);
      const Integer g = content(eta);
      fs.push_back({primitive(eta), induced_offset(i, s) / g, p.facet(i).label});
    }
    return LabeledPolytope(n - 1, std::move(fs));
  };

  bool slopes_ok = true;
  for (const auto& c : chops) {
    // Chop sum_j <N_j, y> <= sum_j (c_j - eta_j1 s) - (s - a); its slope in s
    // against the exceptional facet's (c_i - eta_i1 s) / g_i.
    IntVector sum(n - 1, 0);
    Integer eta1 = 0;
    for (auto j : c.kept) {
      auto t = tail(p.facet(j).normal);
      for (std::size_t k = 0; k + 1 < n; ++k) sum[k] += t[k];
      eta1 += p.facet(j).normal[0];
    }
    const auto& ex = p.facet(c.exceptional);
    const IntVector ex_tail = tail(ex.normal);
    const Rational chop_slope = Rational(-eta1 - 1) / Rational(content(sum));
    const Rational ex_slope = -Rational(ex.normal[0]) / Rational(content(ex_tail));
    slopes_ok = slopes_ok && content(sum) != 0 && primitive(sum) == primitive(ex_tail) && chop_slope == ex_slope;
  }
  rep.exceptional_slopes_match = slopes_ok;

  for (const Rational& s : std::vector<Rational>{a + w / 4, a + w / 2}) {
    WallSample ws{s, false, true, {}};
    auto poly = continued(s);
    for (const auto& c : chops) {
      IntVector sum(n - 1, 0);
      Rational level = 0;
      for (auto j : c.kept) {
        auto t = tail(p.facet(j).normal);
        for (std::size_t k = 0; k + 1 < n; ++k) sum[k] += t[k];
        level += induced_offset(j, s);
      }
      poly = intersect_halfspace(poly, sum, level - (s - a));
      // Depth of the exceptional facet below the continued vertex.
      const IntVector ex_tail = tail(p.facet(c.exceptional).normal);
      std::optional<Rational> lambda;
      for (std::size_t k = 0; k + 1 < n; ++k)
        if (ex_tail[k] != 0) lambda = Rational(sum[k]) / Rational(ex_tail[k]);
      bool proportional = lambda && *lambda > 0;
      for (std::size_t k = 0; k + 1 < n && proportional; ++k)
        proportional = Rational(sum[k]) == *lambda * Rational(ex_tail[k]);
      if (!proportional) {
        ws.depth_law = false;
        continue;
      }
      const Rational depth = level - *lambda * induced_offset(c.exceptional, s);
      ws.depths.push_back(depth);
      ws.depth_law = ws.depth_law && depth == s - a;
    }
    auto sl = slice(p, s);
    ws.match = !sl.empty() && canonical_equal(*sl.polytope, poly);
    rep.samples.push_back(std::move(ws));
  }
  rep.lower_slopes = slopes_at(p, a - w / 2);
  rep.upper_slopes = slopes_at(p, a + w / 2);
  return rep;
}

}  // namespace

WallReport wall_crossing_check(const LabeledPolytope& p, const Rational& a, std::optional<Rational> window) {
  const std::size_t n = p.dim();
  if (n < 2) throw Error(ErrorCode::Precondition, "wall crossing needs dimension >= 2");
  auto crit = critical_values(p);
  auto it = std::find(crit.begin(), crit.end(), a);
  if (it == crit.end()) throw Error(ErrorCode::WallNotSimpleCrossing, "no vertex lies at level " + to_string(a));

  std::vector<Vertex> at_wall;
  std::set<Shape> shapes;
  for (const auto& v : vertices(p)) {
    if (v.point[0] != a) continue;
    shapes.insert(shape_of(weights_at_vertex(p, v, unit_vector(n, 0))));
    at_wall.push_back(v);
  }
  if (shapes.size() != 1 || *shapes.begin() == Shape::Other)
    throw Error(ErrorCode::WallNotSimpleCrossing,
                "weights at level " + to_string(a) + " are not all of the shape {-1|-2, +, ..., +} or all its negative");

  Rational w;
  if (window) {
    w = *window;
    if (w <= 0) throw Error(ErrorCode::Precondition, "window must be positive");
    for (const auto& c : crit)
      if (c != a && a - w < c && c < a + w)
        throw Error(ErrorCode::Precondition, "critical value " + to_string(c) + " lies inside the window");
  } else {
    // Both neighbours exist: the shape forces edges on both sides.
    w = std::min(a - *(it - 1), *(it + 1) - a);
  }

  if (*shapes.begin() == Shape::Up) return upward_check(p, a, w, at_wall);

  auto r = reversed(p);
  std::vector<Vertex> mirrored;
  for (const auto& v : vertices(r))
    if (v.point[0] == -a) mirrored.push_back(v);
  WallReport rep = upward_check(r, -a, w, mirrored);
  rep.upward = false;
  rep.a = a;
  // Back to the original coordinate: s = -s', offsets keep their value and
  // their slopes change sign.
  for (auto& f : rep.fixed) {
    f.point[0] = -f.point[0];
    for (auto& x : f.weights) x = -x;
    std::sort(f.weights.begin(), f.weights.end());
    f.tag = std::string(f.z2 ? "pi*" : "2*pi*") + "(" + to_string(a) + " - s)";
  }
  for (auto& s : rep.samples) s.s = -s.s;
  for (auto* v : {&rep.lower_slopes, &rep.upper_slopes})
    for (auto& f : *v) f.slope = -f.slope;
  std::swap(rep.lower_slopes, rep.upper_slopes);
  return rep;
}

}  // namespace momentcut
