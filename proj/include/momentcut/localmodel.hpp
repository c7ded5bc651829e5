#pragma once

// Floating-point checks of the local model: a linear C^x action on C^n with
// weights alpha, the standard form omega_0(u, v) = Im <u, v> and J = i.
// The circle field is xi = (i alpha_j z_j), the flow is e^t . z = (e^{alpha_j t} z_j)
// and Psi(z) = 1/2 sum alpha_j |z_j|^2 satisfies xi _| omega_0 = -dPsi.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace momentcut::local {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

class LinearAction {
 public:
  explicit LinearAction(std::vector<long> weights);
  const std::vector<long>& weights() const { return w_; }
  std::size_t dim() const { return w_.size(); }
  const std::vector<std::size_t>& negative() const { return neg_; }
  const std::vector<std::size_t>& positive() const { return pos_; }
  const std::vector<std::size_t>& trivial() const { return zero_; }
  /// z is fixed iff z_j = 0 whenever alpha_j != 0.
  bool is_fixed(const CVector& z) const;

 private:
  std::vector<long> w_;
  std::vector<std::size_t> neg_, pos_, zero_;
};

/// Throws Overflow when a coordinate leaves the double range.
CVector flow(const LinearAction& a, const CVector& z, double t);
double moment_standard(const LinearAction& a, const CVector& z);
/// omega_0(xi, J xi) = sum alpha_j^2 |z_j|^2.
double xi_norm2(const LinearAction& a, const CVector& z);
/// omega_0(u, v) = Im sum conj(u_j) v_j.
double omega0(const CVector& u, const CVector& v);
CVector xi_field(const LinearAction& a, const CVector& z);

/// Richardson-extrapolated central difference of f at x with step h, plus
/// the same estimate at step h/2 (their gap is the self-check).
struct Derivative {
  double value;
  double coarse;
};
Derivative richardson(const std::function<double(double)>& f, double x, double h);

struct MonotoneReport {
  bool increasing = true;
  double worst_derivative_error = 0;  // relative, vs sum alpha^2 |z(t)|^2
  std::size_t points = 0;
};

/// Throws FixedPointInput.
MonotoneReport check_monotone(const LinearAction& a, const CVector& z, const std::vector<double>& t_grid);

/// The unique t with Psi(e^t . z) = s, or nullopt when s is outside the
/// range of Psi along the orbit. Bisection from a bracket grown around
/// `guess`, then an optional Newton polish kept inside the bracket.
std::optional<double> solve_time_to_level(const LinearAction& a, const CVector& z, double s, double guess = 0,
                                          bool newton = false);

/// Whether the C^x orbit of z meets Psi^{-1}(s), decided by the block rule.
bool level_membership(const LinearAction& a, const CVector& z, double s);

/// N_-(z_-), N_+(z_+).
std::pair<double, double> n_pm(const LinearAction& a, const CVector& z);

struct NeighborhoodSpec {
  double eps = 0.5;
  double eps_prime = 0.25;
  double delta = 1.0 / 16;
  double k_bound = 1;  // radius of the closed ball K in the trivial block
};

/// A region with a membership test and a sampler for starting points.
struct Region {
  std::function<bool(const CVector&)> contains;
  std::function<CVector(std::mt19937_64&)> sample;
};

/// V = { N_- < eps, N_+ < eps, |w| <= k_bound, N_- N_+ < eps eps' }.
Region n_neighbourhood(const LinearAction& a, const NeighborhoodSpec& spec);

/// |z_+| in (r1, r2) or (r3, r4): a set the flow leaves and re-enters.
Region double_annulus(const LinearAction& a, double r1, double r2, double r3, double r4);

struct ProbeOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double t_max = 12;
  std::size_t grid = 6001;
  std::optional<double> delta;  // check the exit clauses when set
};

struct ProbeReport {
  std::size_t trials = 0;
  std::size_t re_entries = 0;
  std::size_t exit_failures_plus = 0;
  std::size_t exit_failures_minus = 0;
  std::size_t forward_unbounded = 0;   // occupied up to the end of the grid
  std::size_t backward_unbounded = 0;  // occupied from the start of the grid
  double grid_step = 0;
  bool ok() const { return re_entries == 0 && exit_failures_plus == 0 && exit_failures_minus == 0; }
};

/// Grid indices of { t : e^t . z in region } as maximal runs [first, last].
std::vector<std::pair<std::size_t, std::size_t>> occupancy(const LinearAction& a, const Region& r, const CVector& z,
                                                           const std::vector<double>& grid);

ProbeReport orbital_convexity_probe(const LinearAction& a, const Region& r, const ProbeOptions& opt);
ProbeReport orbital_convexity_probe(const LinearAction& a, const NeighborhoodSpec& spec, const ProbeOptions& opt);

struct RadialFunction {
  std::string name;
  std::function<double(double)> f, d1, d2;
};

/// C^2 smoothstep: 1 for t <= r1, 0 for t >= r2.
struct RhoSpec {
  double r1 = 0.25;
  double r2 = 1;
  double operator()(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

RadialFunction radial_identity();
RadialFunction radial_square();
RadialFunction radial_log();
RadialFunction radial_identity_plus_square();
/// rho(t) ln t / (2 pi), the blow-up potential profile.
RadialFunction radial_blowup(const RhoSpec& rho);

struct PshReport {
  std::vector<double> eigenvalues;  // ascending, numeric
  std::vector<double> expected;     // ascending, closed form
  double rel_error = 0;
  bool kahler = false;  // both closed-form eigenvalues positive
};

/// Hermitian matrix f' delta_jk + f'' conj(z_j) z_k at a point with |z|^2 = t0.
PshReport psh_criterion(const RadialFunction& f, double t0, std::size_t n, std::uint64_t seed = 1);

struct CutIdentityReport {
  double direct = 0;   // omega'(Xi, J'Xi)
  double formula = 0;  // |w|^2 A / (A + |w|^2)
  double rel_error = 0;
  double orth_omega = 0;    // |omega'(xi_M', Xi)|
  double orth_omega_j = 0;  // |omega'(xi_M', J' Xi)|
  double moment_error = 0;  // xi_M' _| omega' + dPsi', relative, finite differences
};

/// On C^n x C with the diagonal action (weight 1 on the last factor).
/// Throws FixedPointInput when (z, w) is fixed.
CutIdentityReport cut_tameness_identity(const LinearAction& a, const CVector& z, Complex w);

struct BlowupPotentialReport {
  double rel_error = 0;        // xi _| eta + dPhi over the real basis
  double richardson_gap = 0;   // between step h and h/2 estimates
  double phi = 0;
  std::optional<double> phi_formula;  // sum alpha |z|^2 / (2 pi |z|^2) when rho = 1 at z
};

/// eta = i d dbar f(|z|^2) by finite differences, Phi = sum alpha_j |z_j|^2 f'(|z|^2).
/// Throws StepTooLarge when the two Richardson levels disagree beyond `tol`.
BlowupPotentialReport blowup_potential_check(const LinearAction& a, const RhoSpec& rho, const CVector& z, double h,
                                             double tol = 1e-5);

struct SuiteReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0;  // worst residual seen
  double tolerance = 0;
  std::optional<double> grid_step;  // convexity probe only
};

struct BatteryOptions {
  std::uint64_t seed = 20240601;
  std::size_t trials = 1000;
  std::optional<std::vector<long>> weights;  // random per trial when unset
  std::optional<double> tol;                 // overrides each suite's default
};

/// Suites: monotone, solve, membership, npm, convexity, psh, cut-identity, blowup-potential.
SuiteReport run_suite(const std::string& name, const BatteryOptions& opt);
std::vector<std::string> suite_names();

}  // namespace momentcut::local
