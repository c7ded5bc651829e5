#include "momentcut/localmodel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "momentcut/error.hpp"

namespace momentcut::local {

namespace {

constexpr double kPi = std::numbers::pi;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

Complex random_in_disk(std::mt19937_64& rng, double r) {
  const double rho = r * std::sqrt(unit(rng));
  const double th = 2 * kPi * unit(rng);
  return std::polar(rho, th);
}

void require_size(const LinearAction& a, const CVector& z) {
  if (z.size() != a.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "point has " + std::to_string(z.size()) + " coordinates, action has " + std::to_string(a.dim()));
}

void require_moving(const LinearAction& a, const CVector& z) {
  require_size(a, z);
  if (a.is_fixed(z)) throw Error(ErrorCode::FixedPointInput, "point is fixed by the action");
}

bool block_nonzero(const std::vector<std::size_t>& block, const CVector& z) {
  return std::any_of(block.begin(), block.end(), [&](std::size_t j) { return z[j] != 0.0; });
}

double block_norm(const LinearAction& a, const std::vector<std::size_t>& block, const CVector& z) {
  double s = 0;
  for (auto j : block) s += std::pow(std::abs(z[j]), 2.0 / std::abs(static_cast<double>(a.weights()[j])));
  return std::sqrt(s);
}

double trivial_norm(const LinearAction& a, const CVector& z) {
  double s = 0;
  for (auto j : a.trivial()) s += std::norm(z[j]);
  return std::sqrt(s);
}

// sum |alpha_j| |z_j|^2 / 2, the size of the terms Psi is made of.
double moment_scale(const LinearAction& a, const CVector& z) {
  double s = 0;
  for (std::size_t j = 0; j < z.size(); ++j) s += std::abs(static_cast<double>(a.weights()[j])) * std::norm(z[j]);
  return s / 2;
}

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

LinearAction::LinearAction(std::vector<long> weights) : w_(std::move(weights)) {
  for (std::size_t j = 0; j < w_.size(); ++j) {
    if (w_[j] < 0)
      neg_.push_back(j);
    else if (w_[j] > 0)
      pos_.push_back(j);
    else
      zero_.push_back(j);
  }
}

bool LinearAction::is_fixed(const CVector& z) const { return !block_nonzero(neg_, z) && !block_nonzero(pos_, z); }

CVector flow(const LinearAction& a, const CVector& z, double t) {
  require_size(a, z);
  CVector out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (a.weights()[j] == 0 || z[j] == 0.0) {
      out[j] = z[j];
      continue;
    }
    const double e = std::exp(static_cast<double>(a.weights()[j]) * t);
    out[j] = z[j] * e;
    if (!std::isfinite(e) || !std::isfinite(out[j].real()) || !std::isfinite(out[j].imag()))
      throw Error(ErrorCode::Overflow, "flow leaves the floating range at t = " + std::to_string(t));
  }
  return out;
}

double moment_standard(const LinearAction& a, const CVector& z) {
  require_size(a, z);
  double s = 0;
  for (std::size_t j = 0; j < z.size(); ++j) s += static_cast<double>(a.weights()[j]) * std::norm(z[j]);
  return s / 2;
}

double xi_norm2(const LinearAction& a, const CVector& z) {
  require_size(a, z);
  double s = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double w = static_cast<double>(a.weights()[j]);
    s += w * w * std::norm(z[j]);
  }
  return s;
}

double omega0(const CVector& u, const CVector& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::DimensionMismatch, "omega0 needs vectors of equal length");
  double s = 0;
  for (std::size_t j = 0; j < u.size(); ++j) s += (std::conj(u[j]) * v[j]).imag();
  return s;
}

CVector xi_field(const LinearAction& a, const CVector& z) {
  require_size(a, z);
  CVector out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = Complex(0, static_cast<double>(a.weights()[j])) * z[j];
  return out;
}

Derivative richardson(const std::function<double(double)>& f, double x, double h) {
  auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  const double d2 = central(2 * h), d1 = central(h), d05 = central(h / 2);
  return {(4 * d05 - d1) / 3, (4 * d1 - d2) / 3};
}

MonotoneReport check_monotone(const LinearAction& a, const CVector& z, const std::vector<double>& t_grid) {
  require_moving(a, z);
  MonotoneReport r;
  double prev = 0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    const CVector zt = flow(a, z, t);
    const double psi = moment_standard(a, zt);
    if (k > 0 && !(psi > prev)) r.increasing = false;
    prev = psi;
    const double exact = xi_norm2(a, zt);
    const double h = 1e-3 / std::max(1.0, static_cast<double>(*std::max_element(
                                               a.weights().begin(), a.weights().end(),
                                               [](long x, long y) { return std::abs(x) < std::abs(y); })));
    auto d = richardson([&](double s) { return moment_standard(a, flow(a, z, s)); }, t, std::abs(h));
    r.worst_derivative_error = std::max(r.worst_derivative_error, std::abs(d.value - exact) / exact);
    ++r.points;
  }
  return r;
}

bool level_membership(const LinearAction& a, const CVector& z, double s) {
  require_moving(a, z);
  const bool neg = block_nonzero(a.negative(), z), pos = block_nonzero(a.positive(), z);
  if (s > 0) return pos;
  if (s < 0) return neg;
  return neg && pos;
}

std::optional<double> solve_time_to_level(const LinearAction& a, const CVector& z, double s, double guess,
                                          bool newton) {
  if (!level_membership(a, z, s)) return std::nullopt;
  auto psi = [&](double t) { return moment_standard(a, flow(a, z, t)); };
  double lo = guess - 1, hi = guess + 1, step = 1;
  while (psi(hi) < s) {
    lo = hi;
    hi += step;
    step *= 2;
  }
  step = 1;
  while (psi(lo) > s) {
    hi = std::min(hi, lo);
    lo -= step;
    step *= 2;
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (psi(mid) < s ? lo : hi) = mid;
  }
  double t = std::abs(psi(lo) - s) <= std::abs(psi(hi) - s) ? lo : hi;
  if (newton) {
    for (int it = 0; it < 3; ++it) {
      const CVector zt = flow(a, z, t);
      const double d = xi_norm2(a, zt);
      if (d <= 0) break;
      const double next = t - (moment_standard(a, zt) - s) / d;
      if (!(next >= lo && next <= hi) || std::abs(psi(next) - s) >= std::abs(psi(t) - s)) break;
      t = next;
    }
  }
  return t;
}

std::pair<double, double> n_pm(const LinearAction& a, const CVector& z) {
  require_size(a, z);
  return {block_norm(a, a.negative(), z), block_norm(a, a.positive(), z)};
}

Region n_neighbourhood(const LinearAction& a, const NeighborhoodSpec& spec) {
  if (!(spec.eps > 0) || !(spec.eps_prime > 0) || !(spec.eps_prime < spec.eps) || !(spec.delta > 0) ||
      !(spec.k_bound >= 0))
    throw Error(ErrorCode::Precondition, "neighbourhood needs 0 < eps' < eps, delta > 0 and a nonnegative ball radius");
  Region r;
  r.contains = [a, spec](const CVector& z) {
    auto [nm, np] = n_pm(a, z);
    return nm < spec.eps && np < spec.eps && trivial_norm(a, z) <= spec.k_bound && nm * np < spec.eps * spec.eps_prime;
  };
  r.sample = [a, spec, contains = r.contains](std::mt19937_64& rng) {
    for (;;) {
      CVector z(a.dim());
      for (std::size_t j = 0; j < a.dim(); ++j) {
        const long w = a.weights()[j];
        z[j] = random_in_disk(rng, w == 0 ? spec.k_bound : std::pow(spec.eps, std::abs(static_cast<double>(w))));
      }
      if (contains(z) && !a.is_fixed(z)) return z;
    }
  };
  return r;
}

Region double_annulus(const LinearAction& a, double r1, double r2, double r3, double r4) {
  if (a.positive().empty()) throw Error(ErrorCode::Precondition, "double annulus needs a positive block");
  if (!(0 <= r1 && r1 < r2 && r2 < r3 && r3 < r4))
    throw Error(ErrorCode::Precondition, "annulus radii must increase");
  Region r;
  r.contains = [a, r1, r2, r3, r4](const CVector& z) {
    const double np = block_norm(a, a.positive(), z);
    return (np > r1 && np < r2) || (np > r3 && np < r4);
  };
  r.sample = [a, r1, r2, contains = r.contains](std::mt19937_64& rng) {
    for (;;) {
      CVector z(a.dim());
      for (std::size_t j = 0; j < a.dim(); ++j) {
        const long w = a.weights()[j];
        z[j] = random_in_disk(rng, w > 0 ? std::pow(r2, static_cast<double>(w)) : 1.0);
      }
      const double np = block_norm(a, a.positive(), z);
      if (np > r1 && np < r2 && contains(z)) return z;
    }
  };
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> occupancy(const LinearAction& a, const Region& r, const CVector& z,
                                                           const std::vector<double>& grid) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  bool inside = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool in = r.contains(flow(a, z, grid[k]));
    if (in && !inside) runs.emplace_back(k, k);
    if (in) runs.back().second = k;
    inside = in;
  }
  return runs;
}

ProbeReport orbital_convexity_probe(const LinearAction& a, const Region& region, const ProbeOptions& opt) {
  if (opt.grid < 3 || opt.grid % 2 == 0) throw Error(ErrorCode::Precondition, "grid size must be odd and at least 3");
  long wmax = 0;
  for (long w : a.weights()) wmax = std::max(wmax, std::abs(w));
  if (wmax == 0) throw Error(ErrorCode::Precondition, "action is trivial");
  const double tmax = opt.t_max / static_cast<double>(wmax);
  std::vector<double> grid(opt.grid);
  const std::size_t mid = opt.grid / 2;
  for (std::size_t k = 0; k < opt.grid; ++k)
    grid[k] = tmax * (static_cast<double>(k) - static_cast<double>(mid)) / static_cast<double>(mid);

  ProbeReport rep;
  rep.trials = opt.trials;
  rep.grid_step = tmax / static_cast<double>(mid);
  for (std::size_t trial = 0; trial < opt.trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(trial), 0x70726f62u};
    std::mt19937_64 rng(seq);
    const CVector z = region.sample(rng);
    auto runs = occupancy(a, region, z, grid);
    if (runs.size() != 1) {
      ++rep.re_entries;
      continue;
    }
    const auto [first, last] = runs.front();
    if (first == 0) ++rep.backward_unbounded;
    if (last + 1 == grid.size()) ++rep.forward_unbounded;
    if (!opt.delta) continue;
    double psi_max = -HUGE_VAL, psi_min = HUGE_VAL;
    for (std::size_t k = first; k <= last; ++k) {
      const double p = moment_standard(a, flow(a, z, grid[k]));
      psi_max = std::max(psi_max, p);
      psi_min = std::min(psi_min, p);
    }
    if (last + 1 < grid.size() && !(psi_max > *opt.delta)) ++rep.exit_failures_plus;
    if (first > 0 && !(psi_min < -*opt.delta)) ++rep.exit_failures_minus;
  }
  return rep;
}

ProbeReport orbital_convexity_probe(const LinearAction& a, const NeighborhoodSpec& spec, const ProbeOptions& opt) {
  ProbeOptions o = opt;
  if (!o.delta) o.delta = spec.delta;
  return orbital_convexity_probe(a, n_neighbourhood(a, spec), o);
}

double RhoSpec::operator()(double t) const {
  if (t <= r1) return 1;
  if (t >= r2) return 0;
  const double x = (t - r1) / (r2 - r1);
  return 1 - x * x * x * (10 - 15 * x + 6 * x * x);
}

double RhoSpec::d1(double t) const {
  if (t <= r1 || t >= r2) return 0;
  const double x = (t - r1) / (r2 - r1);
  return -30 * x * x * (1 - x) * (1 - x) / (r2 - r1);
}

double RhoSpec::d2(double t) const {
  if (t <= r1 || t >= r2) return 0;
  const double x = (t - r1) / (r2 - r1);
  return -60 * x * (1 - x) * (1 - 2 * x) / ((r2 - r1) * (r2 - r1));
}

RadialFunction radial_identity() {
  return {"t", [](double t) { return t; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

RadialFunction radial_square() {
  return {"t^2", [](double t) { return t * t; }, [](double t) { return 2 * t; }, [](double) { return 2.0; }};
}

RadialFunction radial_log() {
  return {"ln t", [](double t) { return std::log(t); }, [](double t) { return 1 / t; },
          [](double t) { return -1 / (t * t); }};
}

RadialFunction radial_identity_plus_square() {
  return {"t + t^2", [](double t) { return t + t * t; }, [](double t) { return 1 + 2 * t; },
          [](double) { return 2.0; }};
}

RadialFunction radial_blowup(const RhoSpec& rho) {
  const double c = 1 / (2 * kPi);
  return {"rho(t) ln t / 2pi", [rho, c](double t) { return c * rho(t) * std::log(t); },
          [rho, c](double t) { return c * (rho.d1(t) * std::log(t) + rho(t) / t); },
          [rho, c](double t) { return c * (rho.d2(t) * std::log(t) + 2 * rho.d1(t) / t - rho(t) / (t * t)); }};
}

PshReport psh_criterion(const RadialFunction& f, double t0, std::size_t n, std::uint64_t seed) {
  if (!(t0 > 0) || n == 0) throw Error(ErrorCode::Precondition, "psh criterion needs t0 > 0 and n >= 1");
  std::mt19937_64 rng(seed);
  Eigen::VectorXcd z(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
  } while (z.norm() < 1e-3);
  z *= std::sqrt(t0) / z.norm();
  const double d1 = f.d1(t0), d2 = f.d2(t0);
  Eigen::MatrixXcd h = d1 * Eigen::MatrixXcd::Identity(z.size(), z.size()) + d2 * z.conjugate() * z.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  PshReport r;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) r.eigenvalues.push_back(es.eigenvalues()[k]);
  r.expected.assign(n - 1, d1);
  r.expected.push_back(d1 + t0 * d2);
  std::sort(r.expected.begin(), r.expected.end());
  double scale = std::max(std::abs(d1), t0 * std::abs(d2)), err = 0;
  for (std::size_t k = 0; k < n; ++k) {
    scale = std::max(scale, std::abs(r.expected[k]));
    err = std::max(err, std::abs(r.eigenvalues[k] - r.expected[k]));
  }
  r.rel_error = err == 0 ? 0 : err / scale;
  // Closed-form values within rounding of 0 count as degenerate.
  r.kahler = std::all_of(r.expected.begin(), r.expected.end(),
                         [&](double x) { return x > 1e-12 * std::max(scale, std::abs(d1)); });
  return r;
}

CutIdentityReport cut_tameness_identity(const LinearAction& a, const CVector& z, Complex w) {
  require_size(a, z);
  if (a.is_fixed(z) && w == 0.0) throw Error(ErrorCode::FixedPointInput, "point is fixed by the diagonal action");
  const std::size_t n = z.size();
  const double big_a = xi_norm2(a, z), w2 = std::norm(w);
  CVector xi_m = xi_field(a, z);
  CVector xi(n + 1), big_xi(n + 1), j_xi(n + 1);
  for (std::size_t j = 0; j < n; ++j) xi[j] = xi_m[j];
  xi[n] = Complex(0, 1) * w;
  for (std::size_t j = 0; j < n; ++j) big_xi[j] = w2 * xi_m[j] / (big_a + w2);
  big_xi[n] = -big_a * xi[n] / (big_a + w2);
  for (std::size_t j = 0; j <= n; ++j) j_xi[j] = Complex(0, 1) * big_xi[j];

  CutIdentityReport r;
  r.direct = omega0(big_xi, j_xi);
  r.formula = w2 * big_a / (big_a + w2);
  const double err = std::abs(r.direct - r.formula);
  r.rel_error = err == 0 ? 0 : err / std::abs(r.formula);
  r.orth_omega = std::abs(omega0(xi, big_xi));
  r.orth_omega_j = std::abs(omega0(xi, j_xi));

  CVector pt(n + 1);
  for (std::size_t j = 0; j < n; ++j) pt[j] = z[j];
  pt[n] = w;
  auto psi_prime = [&](const CVector& p) {
    CVector head(p.begin(), p.end() - 1);
    return moment_standard(a, head) + std::norm(p[n]) / 2;
  };
  // xi_M' _| omega' = -dPsi' on the real basis of C^n x C.
  double scale = 0, worst = 0;
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t j = 0; j <= n; ++j) {
    for (int part = 0; part < 2; ++part) {
      CVector v(n + 1, 0.0);
      v[j] = part == 0 ? Complex(1, 0) : Complex(0, 1);
      auto d = richardson(
          [&](double s) {
            CVector p = pt;
            for (std::size_t k = 0; k <= n; ++k) p[k] += s * v[k];
            return psi_prime(p);
          },
          0, 1e-3 * std::max(1.0, std::abs(pt[j])));
      pairs.emplace_back(omega0(xi, v), -d.value);
      scale = std::max(scale, std::abs(d.value));
    }
  }
  for (auto [lhs, rhs] : pairs) worst = std::max(worst, std::abs(lhs - rhs));
  r.moment_error = worst == 0 ? 0 : worst / scale;
  return r;
}

namespace {

// Real coordinates (x_1, y_1, ..., x_n, y_n) of z.
CVector shifted(const CVector& z, std::size_t a, double da, std::size_t b, double db) {
  CVector p = z;
  auto bump = [&](std::size_t k, double d) { p[k / 2] += (k % 2 == 0) ? Complex(d, 0) : Complex(0, d); };
  bump(a, da);
  bump(b, db);
  return p;
}

// Hessian of g in real coordinates by central differences at step h.
std::vector<std::vector<double>> hessian(const std::function<double(const CVector&)>& g, const CVector& z, double h) {
  const std::size_t m = 2 * z.size();
  std::vector<std::vector<double>> out(m, std::vector<double>(m));
  const double g0 = g(z);
  for (std::size_t a = 0; a < m; ++a) {
    out[a][a] = (g(shifted(z, a, h, a, 0)) - 2 * g0 + g(shifted(z, a, -h, a, 0))) / (h * h);
    for (std::size_t b = a + 1; b < m; ++b) {
      out[a][b] = out[b][a] = (g(shifted(z, a, h, b, h)) - g(shifted(z, a, h, b, -h)) - g(shifted(z, a, -h, b, h)) +
                               g(shifted(z, a, -h, b, -h))) /
                              (4 * h * h);
    }
  }
  return out;
}

std::vector<std::vector<double>> richardson_hessian(const std::function<double(const CVector&)>& g, const CVector& z,
                                                    double h) {
  auto c = hessian(g, z, h), f = hessian(g, z, h / 2);
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b) c[a][b] = (4 * f[a][b] - c[a][b]) / 3;
  return c;
}

struct Contraction {
  std::vector<double> lhs, rhs;  // eta(xi, v_k), -dPhi(v_k) over the real basis
  double scale = 0;
};

Contraction contraction(const LinearAction& act, const RadialFunction& f, const CVector& z, double h) {
  const std::size_t n = z.size(), m = 2 * n;
  auto g = [&](const CVector& p) {
    double t = 0;
    for (auto c : p) t += std::norm(c);
    return f.f(t);
  };
  auto phi = [&](const CVector& p) {
    double t = 0;
    for (auto c : p) t += std::norm(c);
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(act.weights()[j]) * std::norm(p[j]);
    return s * f.d1(t);
  };
  auto hs = richardson_hessian(g, z, h);
  double hsmax = 0;
  for (const auto& row : hs)
    for (double x : row) hsmax = std::max(hsmax, std::abs(x));
  // H_jk = (g_xx + g_yy)/4 + i (g_xy - g_yx)/4, eta(u, v) = -2 Im sum u_j H_jk conj(v_k).
  std::vector<std::vector<Complex>> big_h(n, std::vector<Complex>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      big_h[j][k] = Complex((hs[2 * j][2 * k] + hs[2 * j + 1][2 * k + 1]) / 4,
                            (hs[2 * j][2 * k + 1] - hs[2 * j + 1][2 * k]) / 4);
  const CVector xi = xi_field(act, z);
  double xi1 = 0;
  for (auto c : xi) xi1 += std::abs(c);
  Contraction out;
  for (std::size_t k = 0; k < m; ++k) {
    CVector v(n, 0.0);
    v[k / 2] = (k % 2 == 0) ? Complex(1, 0) : Complex(0, 1);
    Complex s = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) s += xi[a] * big_h[a][b] * std::conj(v[b]);
    out.lhs.push_back(-2 * s.imag());
    auto d = richardson([&](double e) { return phi(shifted(z, k, e, k, 0)); }, 0, h);
    out.rhs.push_back(-d.value);
  }
  double rmax = 0;
  for (double x : out.rhs) rmax = std::max(rmax, std::abs(x));
  // Real second partials set the size of the terms even where H cancels.
  out.scale = std::max(rmax, hsmax * xi1);
  return out;
}

}  // namespace

BlowupPotentialReport blowup_potential_check(const LinearAction& a, const RhoSpec& rho, const CVector& z, double h,
                                             double tol) {
  require_size(a, z);
  if (!(h > 0)) throw Error(ErrorCode::Precondition, "step must be positive");
  if (!(rho.r1 > 0 && rho.r1 < rho.r2)) throw Error(ErrorCode::Precondition, "rho needs 0 < r1 < r2");
  double t = 0;
  for (auto c : z) t += std::norm(c);
  if (!(t > 0)) throw Error(ErrorCode::Precondition, "blow-up potential is singular at the origin");
  const RadialFunction f = radial_blowup(rho);
  auto fine = contraction(a, f, z, h);
  auto coarse = contraction(a, f, z, 2 * h);

  BlowupPotentialReport r;
  double gap = 0, err = 0;
  for (std::size_t k = 0; k < fine.lhs.size(); ++k) {
    gap = std::max({gap, std::abs(fine.lhs[k] - coarse.lhs[k]), std::abs(fine.rhs[k] - coarse.rhs[k])});
    err = std::max(err, std::abs(fine.lhs[k] - fine.rhs[k]));
  }
  r.richardson_gap = gap == 0 ? 0 : gap / fine.scale;
  r.rel_error = err == 0 ? 0 : err / fine.scale;
  if (r.richardson_gap > tol)
    throw Error(ErrorCode::StepTooLarge, "finite differences at steps h and 2h disagree by " +
                                             std::to_string(r.richardson_gap) + " relative");
  double s = 0;
  for (std::size_t j = 0; j < z.size(); ++j) s += static_cast<double>(a.weights()[j]) * std::norm(z[j]);
  r.phi = s * f.d1(t);
  if (t <= rho.r1) r.phi_formula = s / (2 * kPi * t);
  return r;
}

std::vector<std::string> suite_names() {
  return {"monotone", "solve", "membership", "npm", "convexity", "psh", "cut-identity", "blowup-potential"};
}

namespace {

std::mt19937_64 trial_rng(const BatteryOptions& opt, const std::string& suite, std::size_t trial) {
  const std::uint64_t h = name_hash(suite);
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

LinearAction random_action(std::mt19937_64& rng, const BatteryOptions& opt) {
  if (opt.weights) return LinearAction(*opt.weights);
  const std::size_t n = 1 + rng() % 4;
  std::vector<long> w(n);
  do {
    for (auto& x : w) x = static_cast<long>(rng() % 7) - 3;
  } while (std::all_of(w.begin(), w.end(), [](long x) { return x == 0; }));
  return LinearAction(w);
}

// Random point, each coordinate zeroed with probability `drop`, never fixed.
CVector random_point(std::mt19937_64& rng, const LinearAction& a, double drop, double radius = 1.5) {
  for (;;) {
    CVector z(a.dim());
    for (auto& c : z) {
      c = random_in_disk(rng, radius);
      if (unit(rng) < drop) c = 0;
    }
    if (!a.is_fixed(z)) return z;
  }
}

double max_abs_weight(const LinearAction& a) {
  long m = 0;
  for (long w : a.weights()) m = std::max(m, std::abs(w));
  return static_cast<double>(m);
}

void record(SuiteReport& r, double residual, bool failed) {
  r.worst = std::max(r.worst, residual);
  if (failed) ++r.failures;
}

}  // namespace

SuiteReport run_suite(const std::string& name, const BatteryOptions& opt) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw Error(ErrorCode::Precondition, "unknown local-model suite '" + name + "'");
  if (opt.weights && LinearAction(*opt.weights).positive().empty() && LinearAction(*opt.weights).negative().empty())
    throw Error(ErrorCode::Precondition, "weights are all zero");

  SuiteReport r;
  r.name = name;
  r.trials = opt.trials;

  if (name == "convexity") {
    LinearAction a(opt.weights.value_or(std::vector<long>{-1, 1}));
    if (a.positive().empty() || a.negative().empty())
      throw Error(ErrorCode::Precondition, "convexity probe needs weights of both signs");
    NeighborhoodSpec spec;
    ProbeOptions po;
    po.trials = opt.trials;
    po.seed = opt.seed;
    if (opt.tol) po.delta = *opt.tol;
    auto rep = orbital_convexity_probe(a, spec, po);
    r.tolerance = po.delta.value_or(spec.delta);
    r.failures = rep.re_entries + rep.exit_failures_plus + rep.exit_failures_minus;
    r.grid_step = rep.grid_step;
    return r;
  }

  const double default_tol = name == "monotone"          ? 1e-6
                             : name == "solve"           ? 1e-10
                             : name == "membership"      ? 0
                             : name == "npm"             ? 1e-10
                             : name == "psh"             ? 1e-9
                             : name == "cut-identity"    ? 1e-9
                                                         : 1e-5;
  r.tolerance = opt.tol.value_or(default_tol);
  const RhoSpec rho;

  for (std::size_t trial = 0; trial < opt.trials; ++trial) {
    auto rng = trial_rng(opt, name, trial);
    const LinearAction a = random_action(rng, opt);
    const double wmax = max_abs_weight(a);

    if (name == "monotone") {
      const CVector z = random_point(rng, a, 0.2);
      std::vector<double> grid(1000);
      for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = (-2 + 4 * static_cast<double>(k) / 999) / wmax;
      auto m = check_monotone(a, z, grid);
      record(r, m.worst_derivative_error, !m.increasing || m.worst_derivative_error > r.tolerance);
    } else if (name == "solve") {
      const CVector z = random_point(rng, a, 0.25);
      const double s = uniform(rng, -3, 3);
      const double g = uniform(rng, -5, 5);
      auto t1 = solve_time_to_level(a, z, s, 0);
      auto t2 = solve_time_to_level(a, z, s, g, true);
      if (t1.has_value() != t2.has_value()) {
        record(r, HUGE_VAL, true);
        continue;
      }
      if (!t1) continue;
      const double dt = std::abs(*t1 - *t2) / std::max(1.0, std::abs(*t1));
      const CVector zt = flow(a, z, *t1);
      const double res = std::abs(moment_standard(a, zt) - s) / std::max(1.0, moment_scale(a, zt));
      record(r, dt, dt > r.tolerance || res > 1e-12);
    } else if (name == "membership") {
      const CVector z = random_point(rng, a, 0.3);
      const double s = unit(rng) < 0.125 ? 0.0 : uniform(rng, -3, 3);
      const bool m = level_membership(a, z, s);
      const bool solved = solve_time_to_level(a, z, s, uniform(rng, -2, 2)).has_value();
      record(r, m == solved ? 0 : 1, m != solved);
    } else if (name == "npm") {
      const CVector z = random_point(rng, a, 0.2);
      const double t = uniform(rng, -2, 2) / wmax;
      const CVector zt = flow(a, z, t);
      auto [m0, p0] = n_pm(a, z);
      auto [m1, p1] = n_pm(a, zt);
      auto rel = [](double x, double y) { return x == y ? 0.0 : std::abs(x - y) / std::max(std::abs(x), std::abs(y)); };
      const double e = std::max({rel(p1, std::exp(t) * p0), rel(m1, std::exp(-t) * m0), rel(m1 * p1, m0 * p0)});
      record(r, e, e > r.tolerance);
    } else if (name == "psh") {
      const RadialFunction fam[] = {radial_identity(), radial_square(), radial_log(), radial_identity_plus_square(),
                                    radial_blowup(rho)};
      const auto& f = fam[rng() % 5];
      const double t0 = uniform(rng, 0.05, 3);
      const std::size_t n = opt.weights ? a.dim() : 1 + rng() % 4;
      auto p = psh_criterion(f, t0, n, rng());
      record(r, p.rel_error, p.rel_error > r.tolerance);
    } else if (name == "cut-identity") {
      const CVector z = random_point(rng, a, 0.2);
      const Complex w = unit(rng) < 0.1 ? Complex(0) : random_in_disk(rng, 1.5);
      auto c = cut_tameness_identity(a, z, w);
      const double e = std::max({c.rel_error, c.orth_omega, c.orth_omega_j});
      record(r, e, e > r.tolerance || c.moment_error > 1e-6);
    } else {
      // |z|^2 kept clear of r1 and r2, where rho is only C^2.
      CVector z;
      double t;
      do {
        z = random_point(rng, a, 0.2, 1.0);
        t = 0;
        for (auto c : z) t += std::norm(c);
      } while (!((t > 0.05 && t < 0.2) || (t > 0.3 && t < 0.95)));
      try {
        auto b = blowup_potential_check(a, rho, z, 1e-3, r.tolerance);
        bool bad = b.rel_error > r.tolerance;
        if (b.phi_formula) bad = bad || std::abs(*b.phi_formula - b.phi) > 1e-12 * std::max(1.0, std::abs(b.phi));
        record(r, b.rel_error, bad);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StepTooLarge) throw;
        record(r, HUGE_VAL, true);
      }
    }
  }
  return r;
}

}  // namespace momentcut::local
