#include "momentcut/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "momentcut/dh.hpp"
#include "momentcut/error.hpp"
#include "momentcut/io.hpp"
#include "momentcut/localmodel.hpp"
#include "momentcut/ops.hpp"
#include "momentcut/toric.hpp"

namespace momentcut {

namespace {

using nlohmann::ordered_json;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::Parse:
    case ErrorCode::InvalidPolytope:
    case ErrorCode::NotSimple:
      return 1;
    case ErrorCode::InterpolationMismatch:
      return 3;
    default:
      return 2;
  }
}

ordered_json rat(const Rational& q) { return to_string(q); }

ordered_json rats(const RatVector& v) {
  auto a = ordered_json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

ordered_json ints(const std::vector<Integer>& v) {
  auto a = ordered_json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

ordered_json indices(const std::vector<std::size_t>& v) {
  auto a = ordered_json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

std::string tuple_text(const RatVector& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + to_string(v[k]);
  return s + ")";
}

std::string set_text(const std::vector<Integer>& v) {
  std::string s = "{";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].get_str();
  return s + "}";
}

ordered_json facet_json(const Facet& f) {
  return {{"normal", ints(f.normal)}, {"offset", rat(f.offset)}, {"label", f.label}};
}

ordered_json class_json(const VertexClass& c) {
  return {{"kind", vertex_kind_name(c.kind)}, {"index", c.index.get_str()}, {"half_sum_integral", c.half_sum_integral}};
}

ordered_json ledger_json(const ClassLedger& l) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : l.terms)
    terms.push_back({{"facet", t.facet}, {"multiplier", rat(t.multiplier)}, {"depth", rat(t.depth)}});
  return {{"base", l.base}, {"terms", terms}};
}

ordered_json validation_json(const ValidationReport& r) {
  ordered_json issues = ordered_json::array();
  for (const auto& i : r.issues) {
    ordered_json j{{"kind", issue_kind_name(i.kind)}, {"message", i.message}};
    if (i.facet) j["facet"] = *i.facet;
    if (i.vertex) j["vertex"] = *i.vertex;
    issues.push_back(j);
  }
  return {{"valid", r.valid()}, {"issues", issues}};
}

ordered_json profile_json(const DHProfile& p) {
  ordered_json chambers = ordered_json::array();
  for (std::size_t k = 0; k < p.chambers(); ++k) {
    auto c = ordered_json::array();
    for (const auto& s : coefficient_strings(p.polys[k])) c.push_back(s);
    chambers.push_back({{"lo", rat(p.walls[k])}, {"hi", rat(p.walls[k + 1])}, {"coefficients", c}});
  }
  return {{"walls", rats(p.walls)}, {"values", rats(p.values)}, {"chambers", chambers}, {"integral", rat(p.integral())}};
}

ordered_json wall_json(const WallReport& r) {
  ordered_json fixed = ordered_json::array();
  for (const auto& v : r.fixed)
    fixed.push_back({{"point", rats(v.point)},
                     {"weights", ints(v.weights)},
                     {"class", class_json(v.vertex_class)},
                     {"exceptional_facet", v.exceptional},
                     {"induced_index", v.induced_index.get_str()},
                     {"z2", v.z2},
                     {"multiplier", rat(v.multiplier)},
                     {"tag", v.tag}});
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"s", rat(s.s)}, {"match", s.match}, {"depth_law", s.depth_law}, {"depths", rats(s.depths)}});
  auto slopes = [](const std::vector<FacetSlope>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& f : v) a.push_back({{"source", f.source}, {"slope", rat(f.slope)}});
    return a;
  };
  return {{"wall", rat(r.a)},
          {"window", rat(r.window)},
          {"upward", r.upward},
          {"ok", r.ok()},
          {"fixed", fixed},
          {"samples", samples},
          {"lower_slopes", slopes(r.lower_slopes)},
          {"upper_slopes", slopes(r.upper_slopes)},
          {"exceptional_slopes_match", r.exceptional_slopes_match}};
}

ordered_json pipeline_json(const PipelineResult& r) {
  const auto& rep = r.report;
  ordered_json z2 = ordered_json::array(), smooth = ordered_json::array(), blowups = ordered_json::array(),
               fixed = ordered_json::array();
  for (const auto& v : rep.z2_vertices) z2.push_back(rats(v));
  for (const auto& v : rep.smooth_vertices) smooth.push_back(rats(v));
  for (const auto& b : rep.blowups)
    blowups.push_back({{"vertex", rats(b.vertex)}, {"exceptional", facet_json(b.exceptional)}, {"multiplier", rat(b.multiplier)}});
  for (const auto& v : rep.new_fixed)
    fixed.push_back({{"point", rats(v.point)},
                     {"weights", ints(v.weights)},
                     {"class", class_json(v.vertex_class)},
                     {"weights_ok", v.weights_ok}});
  return {{"eps", rat(rep.eps)},
          {"z2_vertices", z2},
          {"smooth_vertices", smooth},
          {"blowups", blowups},
          {"new_fixed", fixed},
          {"agrees_below_zero", rep.agrees_below_zero},
          {"count_matches", rep.count_matches},
          {"weights_match", rep.weights_match},
          {"ok", rep.ok()},
          {"ledger", ledger_json(r.ledger)}};
}

struct Common {
  std::string in = "-";
  std::string out = "-";
  bool json = false;
};

struct Context {
  std::ostream& out;
  std::ostream& err;

  void emit(const std::string& path, const std::string& text) const {
    if (path == "-")
      out << text;
    else
      write_text(path, text);
  }
};

// Inputs may be unbounded (strips, half-spaces) but otherwise must validate.
LabeledPolytope load(const std::string& path) {
  LabeledPolytope p = parse_polytope(read_text(path));
  for (const auto& issue : validate(p).issues)
    if (issue.kind != IssueKind::Unbounded) throw Error(ErrorCode::InvalidPolytope, issue.message);
  return p;
}

LabeledPolytope load_bounded(const std::string& path) {
  LabeledPolytope p = parse_polytope(read_text(path));
  auto r = validate(p);
  if (!r.valid()) throw Error(ErrorCode::InvalidPolytope, r.issues.front().message);
  return p;
}

// Polytope to --out; the report to stdout when --out is a file, else to stderr.
void finish_transform(const Context& ctx, const Common& c, const LabeledPolytope& p, const ordered_json& report,
                      const std::string& summary) {
  ctx.emit(c.out, write_polytope(p));
  std::ostream& rep = c.out == "-" ? ctx.err : ctx.out;
  if (c.json)
    rep << report.dump(2) << "\n";
  else if (!summary.empty())
    rep << summary;
}

void add_common(CLI::App* sub, Common& c, bool has_in = true) {
  if (has_in) sub->add_option("--in", c.in, "input polytope file, - for stdin");
  sub->add_option("--out", c.out, "output file, - for stdout");
  sub->add_flag("--json", c.json, "JSON report");
}

std::vector<long> parse_weights(const std::string& text) {
  std::vector<long> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Rational q = parse_rational(item);
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
      throw Error(ErrorCode::Parse, "weight '" + item + "' is not an integer");
    w.push_back(q.get_num().get_si());
  }
  if (w.empty()) throw Error(ErrorCode::Parse, "--weights needs at least one integer");
  return w;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact operations on labeled moment polytopes and local-model checks", "momentcut"};
  app.require_subcommand(1);
  Context ctx{out, err};
  Common c;

  auto* validate_cmd = app.add_subcommand("validate", "check a polytope file");
  add_common(validate_cmd, c);
  auto* info_cmd = app.add_subcommand("info", "vertices, classes, fixed components, volume");
  add_common(info_cmd, c);

  std::string level, lo, hi, depth, eps, wall, window, other;
  bool above = false;
  std::size_t vertex_index = 0;
  std::string ledger_in, ledger_out;

  auto* reduce_cmd = app.add_subcommand("reduce", "reduced space at a regular level");
  add_common(reduce_cmd, c);
  reduce_cmd->add_option("--level", level)->required();
  auto* cut_cmd = app.add_subcommand("cut", "keep x1 <= a, or x1 >= a with --above");
  add_common(cut_cmd, c);
  cut_cmd->add_option("--level", level)->required();
  cut_cmd->add_flag("--above", above);
  auto* compactify_cmd = app.add_subcommand("compactify", "cut at both ends");
  add_common(compactify_cmd, c);
  compactify_cmd->add_option("--min", lo)->required();
  compactify_cmd->add_option("--max", hi)->required();
  auto* blowup_cmd = app.add_subcommand("blowup", "chop a smooth or Z2 vertex");
  add_common(blowup_cmd, c);
  blowup_cmd->add_option("--vertex-index", vertex_index, "index into the sorted vertex list")->required();
  blowup_cmd->add_option("--depth", depth)->required();
  blowup_cmd->add_option("--ledger-in", ledger_in, "class ledger of the input");
  blowup_cmd->add_option("--ledger", ledger_out, "write the updated class ledger here");
  auto* afp_cmd = app.add_subcommand("add-fixed-points", "cut at eps and blow up the Z2 vertices");
  add_common(afp_cmd, c);
  afp_cmd->add_option("--eps", eps)->required();
  afp_cmd->add_option("--ledger", ledger_out, "write the class ledger here");
  auto* reverse_cmd = app.add_subcommand("reverse", "image under x1 -> -x1");
  add_common(reverse_cmd, c);

  std::string csv;
  std::size_t samples = 101;
  bool log_concavity = false, local_minima = false;
  auto* dh_cmd = app.add_subcommand("dh", "Duistermaat-Heckman profile");
  add_common(dh_cmd, c);
  dh_cmd->add_option("--csv", csv, "write (s, mu) samples as CSV");
  dh_cmd->add_option("--samples", samples, "number of uniform samples for --csv")->check(CLI::Range(2, 1000000));
  dh_cmd->add_flag("--check-log-concavity", log_concavity);
  dh_cmd->add_flag("--local-minima", local_minima);

  auto* wall_cmd = app.add_subcommand("wall-check", "birational wall-crossing at x1 = a");
  add_common(wall_cmd, c);
  wall_cmd->add_option("--wall", wall)->required();
  wall_cmd->add_option("--window", window);

  std::string suite, weights;
  local::BatteryOptions battery;
  auto* local_cmd = app.add_subcommand("local-model", "floating-point checks on a linear action");
  add_common(local_cmd, c, false);
  local_cmd->add_option("suite", suite)->required()->check(CLI::IsMember(local::suite_names()));
  local_cmd->add_option("--weights", weights, "comma separated integers, e.g. --weights=-1,1");
  local_cmd->add_option("--seed", battery.seed);
  local_cmd->add_option("--trials", battery.trials);
  std::optional<double> tol;
  local_cmd->add_option("--tol", tol);

  auto* diff_cmd = app.add_subcommand("diff", "canonical equality of two polytope files");
  add_common(diff_cmd, c);
  diff_cmd->add_option("--other", other)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate_cmd->parsed()) {
      auto r = validate(parse_polytope(read_text(c.in)));
      if (c.json)
        ctx.emit(c.out, validation_json(r).dump(2) + "\n");
      else {
        std::string s = r.valid() ? "valid\n" : "invalid\n";
        for (const auto& i : r.issues) s += std::string("  ") + issue_kind_name(i.kind) + ": " + i.message + "\n";
        ctx.emit(c.out, s);
      }
      return r.valid() ? 0 : 1;
    }

    if (info_cmd->parsed()) {
      auto p = load(c.in);
      ordered_json j{{"dim", p.dim()}, {"facets", p.size()}, {"fingerprint", fingerprint(p)}, {"bounded", is_bounded(p)}};
      ordered_json verts = ordered_json::array();
      if (is_bounded(p)) {
        for (const auto& v : vertices(p))
          verts.push_back({{"point", rats(v.point)},
                           {"active", indices(v.active)},
                           {"class", class_json(classify_vertex(p, v))},
                           {"weights", ints(weights_at_vertex(p, v, unit_vector(p.dim(), 0)))}});
        auto [a, b] = first_coordinate_range(p);
        j["range"] = {rat(a), rat(b)};
        j["volume"] = rat(volume(p));
        j["critical_values"] = rats(critical_values(p));
      }
      j["vertices"] = verts;
      ordered_json comps = ordered_json::array();
      if (is_bounded(p))
        for (const auto& fc : fixed_components(p))
          comps.push_back({{"level", rat(fc.level)}, {"dimension", fc.dimension}, {"facets", indices(fc.facets)}});
      j["fixed_components"] = comps;
      if (c.json) {
        ctx.emit(c.out, j.dump(2) + "\n");
      } else {
        std::string s = "dim " + std::to_string(p.dim()) + ", " + std::to_string(p.size()) + " facets, " +
                        (is_bounded(p) ? "bounded" : "unbounded") + "\n";
        if (is_bounded(p)) {
          s += "volume " + j["volume"].get<std::string>() + "\n";
          for (const auto& v : verts)
            s += "vertex " + tuple_text([&] {
              RatVector pt;
              for (const auto& x : v["point"]) pt.push_back(parse_rational(x.get<std::string>()));
              return pt;
            }()) + " " + v["class"]["kind"].get<std::string>() + "\n";
        }
        ctx.emit(c.out, s);
      }
      return 0;
    }

    if (reduce_cmd->parsed()) {
      auto r = reduce(load(c.in), parse_rational(level));
      ordered_json st = ordered_json::array();
      for (const auto& e : r.stabilizers)
        st.push_back({{"facet", e.facet},
                      {"source", e.source},
                      {"multiplicity", e.multiplicity.get_str()},
                      {"order", e.order.infinite ? ordered_json("infinite") : ordered_json(e.order.order.get_str())}});
      finish_transform(ctx, c, r.polytope, {{"level", level}, {"stabilizers", st}}, "");
      return 0;
    }

    if (cut_cmd->parsed()) {
      auto p = cut(load(c.in), parse_rational(level), above ? CutSide::Above : CutSide::Below);
      finish_transform(ctx, c, p, {{"level", level}, {"above", above}, {"fingerprint", fingerprint(p)}}, "");
      return 0;
    }

    if (compactify_cmd->parsed()) {
      auto p = compactify(load(c.in), parse_rational(lo), parse_rational(hi));
      finish_transform(ctx, c, p, {{"min", lo}, {"max", hi}, {"fingerprint", fingerprint(p)}}, "");
      return 0;
    }

    if (reverse_cmd->parsed()) {
      auto p = reversed(load(c.in));
      finish_transform(ctx, c, p, {{"fingerprint", fingerprint(p)}}, "");
      return 0;
    }

    if (blowup_cmd->parsed()) {
      auto p = load_bounded(c.in);
      auto verts = vertices(p);
      if (vertex_index >= verts.size())
        throw Error(ErrorCode::Precondition, "--vertex-index " + std::to_string(vertex_index) + " out of range, " +
                                                 std::to_string(verts.size()) + " vertices");
      ClassLedger ledger = ledger_in.empty() ? ClassLedger{} : parse_ledger(read_text(ledger_in));
      auto r = blowup(p, BlowupParams{verts[vertex_index], parse_rational(depth)}, std::move(ledger));
      if (!ledger_out.empty()) write_text(ledger_out, write_ledger(r.ledger));
      const auto& t = r.ledger.terms.back();
      finish_transform(ctx, c, r.polytope,
                       {{"vertex", rats(verts[vertex_index].point)},
                        {"exceptional_facet", r.exceptional_facet},
                        {"ledger", ledger_json(r.ledger)}},
                       "exceptional facet " + std::to_string(r.exceptional_facet) + ", multiplier " +
                           to_string(t.multiplier) + ", depth " + to_string(t.depth) + "\n");
      return 0;
    }

    if (afp_cmd->parsed()) {
      auto r = add_fixed_points(load_bounded(c.in), parse_rational(eps));
      if (!ledger_out.empty()) write_text(ledger_out, write_ledger(r.ledger));
      std::string s = "new fixed vertices: " + std::to_string(r.report.new_fixed.size()) + "\n";
      for (const auto& v : r.report.new_fixed) s += "  " + tuple_text(v.point) + " weights " + set_text(v.weights) + "\n";
      s += std::string("agrees below 0: ") + (r.report.agrees_below_zero ? "yes" : "no") + "\n";
      finish_transform(ctx, c, r.polytope, pipeline_json(r), s);
      return r.report.ok() ? 0 : 3;
    }

    if (dh_cmd->parsed()) {
      auto p = load_bounded(c.in);
      auto prof = dh_profile(p);
      ordered_json j = profile_json(prof);
      if (log_concavity) {
        auto lc = check_log_concavity(prof);
        ordered_json g = ordered_json::array();
        for (const auto& q : lc.g) {
          ordered_json cs = ordered_json::array();
          for (const auto& s : coefficient_strings(q)) cs.push_back(s);
          g.push_back(cs);
        }
        ordered_json lj{{"log_concave", lc.log_concave()}, {"g", g}};
        if (lc.first_violation)
          lj["violation"] = {
              {"where", lc.first_violation->where == LogConcavityViolation::Where::Chamber ? "chamber" : "wall"},
              {"index", lc.first_violation->index},
              {"detail", lc.first_violation->detail}};
        j["log_concavity"] = lj;
      }
      if (local_minima) {
        ordered_json m = ordered_json::array();
        for (const auto& lm : find_strict_local_minima(prof))
          m.push_back({{"lo", rat(lm.lo)}, {"hi", rat(lm.hi)}, {"at_wall", lm.at_wall}});
        j["local_minima"] = m;
      }
      if (!csv.empty()) {
        const Rational a = prof.walls.front(), b = prof.walls.back();
        std::string rows = "s,mu\n";
        for (std::size_t k = 0; k < samples; ++k) {
          Rational s = a + (b - a) * Rational(static_cast<long>(k)) / Rational(static_cast<long>(samples - 1));
          s.canonicalize();
          rows += to_string(s) + "," + to_string(prof(s)) + "\n";
        }
        ctx.emit(csv, rows);
      }
      ctx.emit(c.out, j.dump(2) + "\n");
      return 0;
    }

    if (wall_cmd->parsed()) {
      auto p = load_bounded(c.in);
      std::optional<Rational> w;
      if (!window.empty()) w = parse_rational(window);
      auto r = wall_crossing_check(p, parse_rational(wall), w);
      ctx.emit(c.out, wall_json(r).dump(2) + "\n");
      return 0;
    }

    if (local_cmd->parsed()) {
      if (!weights.empty()) battery.weights = parse_weights(weights);
      battery.tol = tol;
      auto r = local::run_suite(suite, battery);
      ordered_json j{{"suite", r.name},
                     {"seed", battery.seed},
                     {"trials", r.trials},
                     {"passed", r.trials - r.failures},
                     {"failures", r.failures},
                     {"worst_residual", r.worst},
                     {"tolerance", r.tolerance}};
      if (battery.weights) {
        ordered_json w = ordered_json::array();
        for (long x : *battery.weights) w.push_back(x);
        j["weights"] = w;
      }
      if (r.grid_step) j["grid_step"] = *r.grid_step;
      j["ok"] = r.failures == 0;
      ctx.emit(c.out, j.dump(2) + "\n");
      return 0;
    }

    if (diff_cmd->parsed()) {
      auto p = load(c.in), q = load(other);
      const bool eq = canonical_equal(p, q);
      if (c.json)
        ctx.emit(c.out, ordered_json{{"equal", eq}, {"left", fingerprint(p)}, {"right", fingerprint(q)}}.dump(2) + "\n");
      else
        ctx.emit(c.out, eq ? "equal\n" : "different\n");
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

}  // namespace momentcut
