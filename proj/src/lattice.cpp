#include "momentcut/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <utility>

#include "momentcut/error.hpp"

namespace momentcut {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::InvalidPolytope: return "InvalidPolytope";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NotRegularLevel: return "NotRegularLevel";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::BlowupTooLarge: return "BlowupTooLarge";
    case ErrorCode::VertexNotBlowable: return "VertexNotBlowable";
    case ErrorCode::DegenerateVertex: return "DegenerateVertex";
    case ErrorCode::LabeledFaceUnsupported: return "LabeledFaceUnsupported";
    case ErrorCode::Precondition: return "PreconditionViolation";
    case ErrorCode::WallNotSimpleCrossing: return "WallNotSimpleCrossing";
    case ErrorCode::InterpolationMismatch: return "InterpolationMismatch";
    case ErrorCode::FixedPointInput: return "FixedPointInput";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorCode::Parse, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

// Exact value of a decimal literal such as "-0.125" or "2.5e-3".
std::optional<Rational> parse_decimal(const std::string& text) {
  static const std::regex re(R"(([+-]?)(\d*)\.?(\d*)(?:[eE]([+-]?\d+))?)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return std::nullopt;
  const std::string whole = m[2].str();
  const std::string frac = m[3].str();
  if (whole.empty() && frac.empty()) return std::nullopt;
  Integer digits(whole + frac, 10);
  long exponent = m[4].matched ? std::stol(m[4].str()) : 0;
  exponent -= static_cast<long>(frac.size());
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational value = exponent >= 0 ? Rational(digits * scale) : make_rational(digits, scale);
  if (m[1].str() == "-") value = -value;
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), [](unsigned char c) { return !std::isspace(c); }));
  s.erase(std::find_if(s.rbegin(), s.rend(), [](unsigned char c) { return !std::isspace(c); }).base(), s.end());
  static const std::regex re(R"(([+-]?\d+)(?:/(\d+))?)");
  std::smatch m;
  if (std::regex_match(s, m, re)) {
    std::string num = m[1].str();
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    Integer p(num, 10);
    Integer q = m[2].matched ? Integer(m[2].str(), 10) : Integer(1);
    if (q == 0) throw Error(ErrorCode::Parse, "rational '" + s + "' has a zero denominator");
    return make_rational(p, q);
  }
  if (auto dec = parse_decimal(s)) {
    throw Error(ErrorCode::Parse, "rational '" + s + "' is not exact; use \"" + to_string(*dec) + "\"");
  }
  throw Error(ErrorCode::Parse, "cannot parse '" + s + "' as a rational (expected p/q or p)");
}

Integer content(std::span<const Integer> v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

IntVector primitive(std::span<const Integer> v) {
  Integer g = content(v);
  if (g == 0) throw Error(ErrorCode::ZeroVector, "primitive() of the zero vector");
  IntVector out(v.begin(), v.end());
  for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return out;
}

IntVector primitive_integer_direction(std::span<const Rational> v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  IntVector scaled;
  scaled.reserve(v.size());
  for (const auto& x : v) scaled.emplace_back(x.get_num() * (l / x.get_den()));
  return primitive(scaled);
}

Integer dot(std::span<const Integer> a, std::span<const Integer> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot: length mismatch");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(std::span<const Integer> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

struct Echelon {
  std::size_t rank = 0;
  int sign = 1;
};

// Fraction-free elimination over the first `ncols` columns. Entries stay
// integral because every intermediate is a minor of the input (Sylvester).
Echelon bareiss(IntMatrix& m, std::size_t ncols) {
  Echelon e;
  const std::size_t rows = m.size();
  Integer prev = 1;
  for (std::size_t c = 0; c < ncols && e.rank < rows; ++c) {
    std::size_t r = e.rank;
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(m[p], m[r]);
      e.sign = -e.sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < m[i].size(); ++j) {
        Integer t = m[i][j] * m[r][c] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++e.rank;
  }
  return e;
}

IntMatrix integer_rows(const RatMatrix& m) {
  IntMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) {
    Integer l = 1;
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntVector r;
    r.reserve(row.size());
    for (const auto& x : row) r.emplace_back(x.get_num() * (l / x.get_den()));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Integer determinant(IntMatrix m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  if (n == 0) return 1;
  Echelon e = bareiss(m, n);
  if (e.rank < n) return 0;
  return e.sign * m[n - 1][n - 1];
}

Rational determinant(const RatMatrix& m) {
  Rational scale = 1;
  for (const auto& row : m) {
    Integer l = 1;
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    scale *= l;
  }
  return Rational(determinant(integer_rows(m))) / scale;
}

std::optional<Integer> lattice_index(std::span<const IntVector> vs) {
  const std::size_t n = vs.size();
  for (const auto& v : vs)
    if (v.size() != n)
      throw Error(ErrorCode::DimensionMismatch, "lattice_index needs n vectors of dimension n");
  Integer d = determinant(IntMatrix(vs.begin(), vs.end()));
  if (d == 0) return std::nullopt;
  return abs(d);
}

bool half_sum_integral(std::span<const IntVector> vs) {
  if (vs.empty()) return true;
  IntVector sum(vs.front().size(), 0);
  for (const auto& v : vs) {
    if (v.size() != sum.size()) throw Error(ErrorCode::DimensionMismatch, "half_sum_integral: ragged input");
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
  }
  return std::all_of(sum.begin(), sum.end(), [](const Integer& x) { return mpz_even_p(x.get_mpz_t()) != 0; });
}

std::optional<RatVector> solve_exact(const RatMatrix& a, const RatVector& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "solve_exact: rhs length");
  RatMatrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw Error(ErrorCode::DimensionMismatch, "solve_exact: non-square system");
    aug[i] = a[i];
    aug[i].push_back(b[i]);
  }
  IntMatrix m = integer_rows(aug);
  Echelon e = bareiss(m, n);
  if (e.rank < n) return std::nullopt;
  RatVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational acc = m[ii][n];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= m[ii][j] * x[j];
    x[ii] = acc / Rational(m[ii][ii]);
  }
  return x;
}

std::size_t rank(const IntMatrix& m) {
  if (m.empty()) return 0;
  IntMatrix w = m;
  return bareiss(w, w.front().size()).rank;
}

std::size_t rank(const RatMatrix& m) {
  if (m.empty()) return 0;
  IntMatrix w = integer_rows(m);
  return bareiss(w, w.front().size()).rank;
}

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix id(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b.front().size() : 0;
  IntMatrix c(a.size(), IntVector(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw Error(ErrorCode::DimensionMismatch, "multiply: shape mismatch");
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

IntMatrix transpose(const IntMatrix& a) {
  if (a.empty()) return {};
  IntMatrix t(a.front().size(), IntVector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  IntMatrix d = a;
  IntMatrix u = identity_matrix(rows);
  IntMatrix v = identity_matrix(cols);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(d[i], d[j]);
    std::swap(u[i], u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : d) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
  };
  // row_i += k * row_j
  auto add_row = [&](std::size_t i, std::size_t j, const Integer& k) {
    for (std::size_t c = 0; c < cols; ++c) d[i][c] += k * d[j][c];
    for (std::size_t c = 0; c < rows; ++c) u[i][c] += k * u[j][c];
  };
  // col_i += k * col_j
  auto add_col = [&](std::size_t i, std::size_t j, const Integer& k) {
    for (std::size_t r = 0; r < rows; ++r) d[r][i] += k * d[r][j];
    for (std::size_t r = 0; r < cols; ++r) v[r][i] += k * v[r][j];
  };

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    bool any = false;
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pr = 0, pc = 0;
      any = false;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (d[i][j] != 0 && (!any || abs(d[i][j]) < abs(d[pr][pc]))) {
            pr = i;
            pc = j;
            any = true;
          }
      if (!any) break;
      if (pr != t) swap_rows(pr, t);
      if (pc != t) swap_cols(pc, t);

      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d[i][t].get_mpz_t(), d[t][t].get_mpz_t());
        add_row(i, t, -q);
        if (d[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d[t][j].get_mpz_t(), d[t][t].get_mpz_t());
        add_col(j, t, -q);
        if (d[t][j] != 0) dirty = true;
      }
      if (dirty) continue;

      bool fixed = false;
      for (std::size_t i = t + 1; i < rows && !fixed; ++i)
        for (std::size_t j = t + 1; j < cols && !fixed; ++j)
          if (!mpz_divisible_p(d[i][j].get_mpz_t(), d[t][t].get_mpz_t())) {
            add_row(t, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (!any) break;
    if (d[t][t] < 0) {
      for (auto& x : d[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }

  SmithForm out;
  out.diagonal.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) out.diagonal.push_back(d[i][i]);
  out.left = std::move(u);
  out.right = std::move(v);
  return out;
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  const std::size_t n = a.size();
  Integer det = determinant(a);
  if (abs(det) != 1) throw Error(ErrorCode::NotUnimodular, "matrix has determinant " + det.get_str());
  RatMatrix ra(n, RatVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ra[i][j] = a[i][j];
  IntMatrix inv(n, IntVector(n));
  for (std::size_t c = 0; c < n; ++c) {
    RatVector e(n, 0);
    e[c] = 1;
    auto x = solve_exact(ra, e);
    for (std::size_t r = 0; r < n; ++r) inv[r][c] = (*x)[r].get_num();
  }
  return inv;
}

}  // namespace momentcut
