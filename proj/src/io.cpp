#include "momentcut/io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "momentcut/error.hpp"

namespace momentcut {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(where + ": unknown key '" + k + "'");
  }
}

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing '" + key + "'");
  return *it;
}

Integer parse_integer(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Integer(v.dump(), 10);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    Rational q = parse_rational(s);
    if (q.get_den() != 1) fail(where + ": '" + s + "' is not an integer");
    return q.get_num();
  }
  fail(where + ": expected an integer, got " + v.dump());
}

Rational parse_exact(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(Integer(v.dump(), 10));
  if (v.is_number_float()) {
    try {
      parse_rational(v.dump());
    } catch (const Error& e) {
      fail(where + ": " + e.what());
    }
  }
  if (!v.is_string()) fail(where + ": expected a rational string, got " + v.dump());
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    fail(where + ": " + e.what());
  }
}

std::string integer_token(const Integer& z) {
  if (z.fits_slong_p()) return z.get_str();
  return "\"" + z.get_str() + "\"";
}

std::string vector_text(const IntVector& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + integer_token(v[k]);
  return s + "]";
}

}  // namespace

LabeledPolytope parse_polytope(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) fail("polytope: expected a JSON object");
  only_keys(doc, {"dim", "facets"}, "polytope");
  const json& dim = member(doc, "dim", "polytope");
  if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) fail("polytope: 'dim' must be a positive integer");
  const std::size_t n = dim.get<std::size_t>();
  const json& facets = member(doc, "facets", "polytope");
  if (!facets.is_array()) fail("polytope: 'facets' must be an array");

  std::vector<Facet> out;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const std::string where = "facet " + std::to_string(i);
    const json& f = facets[i];
    if (!f.is_object()) fail(where + ": expected an object");
    only_keys(f, {"normal", "offset", "label"}, where);
    const json& normal = member(f, "normal", where);
    if (!normal.is_array()) fail(where + ": 'normal' must be an array");
    if (normal.size() != n)
      fail(where + ": normal has length " + std::to_string(normal.size()) + ", expected " + std::to_string(n));
    Facet facet;
    for (const auto& x : normal) facet.normal.push_back(parse_integer(x, where + " normal"));
    facet.offset = parse_exact(member(f, "offset", where), where + " offset");
    if (f.contains("label")) {
      const json& l = f["label"];
      if (!l.is_number_integer() || l.get<long long>() < 1) fail(where + ": 'label' must be an integer >= 1");
      facet.label = l.get<long>();
    }
    const Integer g = content(facet.normal);
    if (g == 0) fail(where + ": zero normal");
    if (g != 1) {
      Rational off = facet.offset / Rational(g);
      fail(where + ": normal " + vector_text(facet.normal) + " is not primitive; use \"normal\": " +
           vector_text(primitive(facet.normal)) + ", \"offset\": \"" + to_string(off) + "\"");
    }
    out.push_back(std::move(facet));
  }
  return LabeledPolytope(n, std::move(out));
}

std::string write_polytope(const LabeledPolytope& p) {
  std::string s = "{\n  \"dim\": " + std::to_string(p.dim()) + ",\n  \"facets\": [";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& f = p.facet(i);
    s += i ? ",\n    " : "\n    ";
    s += "{\"normal\": " + vector_text(f.normal) + ", \"offset\": \"" + to_string(f.offset) +
         "\", \"label\": " + std::to_string(f.label) + "}";
  }
  s += p.size() ? "\n  ]\n}\n" : "]\n}\n";
  return s;
}

ClassLedger parse_ledger(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) fail("ledger: expected a JSON object");
  only_keys(doc, {"base", "terms"}, "ledger");
  ClassLedger out;
  if (doc.contains("base")) {
    if (!doc["base"].is_string()) fail("ledger: 'base' must be a string");
    out.base = doc["base"].get<std::string>();
  }
  const json& terms = member(doc, "terms", "ledger");
  if (!terms.is_array()) fail("ledger: 'terms' must be an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "ledger term " + std::to_string(i);
    const json& t = terms[i];
    if (!t.is_object()) fail(where + ": expected an object");
    only_keys(t, {"facet", "multiplier", "depth"}, where);
    const json& facet = member(t, "facet", where);
    if (!facet.is_number_unsigned()) fail(where + ": 'facet' must be a nonnegative integer");
    LedgerTerm term;
    term.facet = facet.get<std::size_t>();
    term.multiplier = parse_exact(member(t, "multiplier", where), where + " multiplier");
    if (term.multiplier != 1 && term.multiplier != Rational(1, 2)) fail(where + ": multiplier must be \"1\" or \"1/2\"");
    term.z2 = term.multiplier != 1;
    term.depth = parse_exact(member(t, "depth", where), where + " depth");
    out.terms.push_back(std::move(term));
  }
  return out;
}

std::string write_ledger(const ClassLedger& ledger) {
  std::string s = "{\n  \"base\": \"" + ledger.base + "\",\n  \"terms\": [";
  for (std::size_t i = 0; i < ledger.terms.size(); ++i) {
    const auto& t = ledger.terms[i];
    s += i ? ",\n    " : "\n    ";
    s += "{\"facet\": " + std::to_string(t.facet) + ", \"multiplier\": \"" + to_string(t.multiplier) +
         "\", \"depth\": \"" + to_string(t.depth) + "\"}";
  }
  s += ledger.terms.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return s;
}

std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
  out << text;
}

}  // namespace momentcut
