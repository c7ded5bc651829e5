#pragma once

// Text formats. A polytope file is
//   { "dim": n, "facets": [ {"normal": [..], "offset": "p/q", "label": k}, ... ] }
// meaning <normal, x> <= offset. write_polytope emits one facet per line, and
// parse_polytope(write_polytope(p)) == p.

#include <string>
#include <string_view>

#include "momentcut/ops.hpp"
#include "momentcut/polytope.hpp"

namespace momentcut {

/// Throws Parse on malformed input, including non-primitive normals (the
/// message carries the primitive normal and rescaled offset) and non-exact
/// offsets (the message carries the exact fraction).
LabeledPolytope parse_polytope(std::string_view text);
std::string write_polytope(const LabeledPolytope& p);

/// { "base": fingerprint, "terms": [ {"facet": i, "multiplier": "1"|"1/2", "depth": "p/q"}, ... ] }
ClassLedger parse_ledger(std::string_view text);
std::string write_ledger(const ClassLedger& ledger);

/// "-" is stdin / stdout.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace momentcut
