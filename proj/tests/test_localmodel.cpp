#include <doctest.h>

#include <cmath>
#include <numbers>

#include "momentcut/error.hpp"
#include "momentcut/localmodel.hpp"

using namespace momentcut;
using namespace momentcut::local;

namespace {

constexpr double pi = std::numbers::pi;

bool close(double a, double b, double rel = 1e-12) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Parse;
}

}  // namespace

TEST_CASE("flow and moment map examples") {
  LinearAction a1({1});
  CHECK(flow(a1, {1.0}, 0)[0] == Complex(1));
  LinearAction a2({1, -1});
  auto z = flow(a2, {1.0, 1.0}, std::log(2.0));
  CHECK(close(z[0].real(), 2));
  CHECK(close(z[1].real(), 0.5));
  CHECK(code_of([&] { flow(a1, {1.0}, 1000); }) == ErrorCode::Overflow);

  CHECK(close(moment_standard(a1, {std::sqrt(2.0)}), 1));
  CHECK(close(moment_standard(LinearAction({-1, 2}), {1.0, 1.0}), 0.5));
  CHECK(moment_standard(LinearAction({-1, 2}), {0.0, 0.0}) == 0);
}

TEST_CASE("flow group law") {
  LinearAction a({2, -1, 0, 3});
  CVector z{{0.3, -0.2}, {1.1, 0.4}, {0.5, 0.5}, {-0.7, 0.1}};
  for (double t : {-0.7, 0.1, 0.9})
    for (double s : {-0.4, 0.3}) {
      auto lhs = flow(a, flow(a, z, t), s);
      auto rhs = flow(a, z, t + s);
      for (std::size_t j = 0; j < z.size(); ++j) CHECK(std::abs(lhs[j] - rhs[j]) <= 1e-12 * std::abs(rhs[j]));
    }
}

TEST_CASE("moment map generates the circle field") {
  // xi _| omega_0 = -dPsi checked on the real basis by symbolic partials.
  LinearAction a({-2, 1, 3});
  CVector z{{0.4, -0.3}, {1.2, 0.5}, {-0.6, 0.8}};
  auto xi = xi_field(a, z);
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double w = static_cast<double>(a.weights()[j]);
    CVector ex(3, 0.0), ey(3, 0.0);
    ex[j] = 1;
    ey[j] = Complex(0, 1);
    CHECK(close(omega0(xi, ex), -w * z[j].real()));
    CHECK(close(omega0(xi, ey), -w * z[j].imag()));
  }
  CHECK(close(omega0(xi, CVector{2.0 * z[0], -1.0 * z[1], -3.0 * z[2]}), xi_norm2(a, z)));
}

TEST_CASE("monotone flow") {
  std::vector<double> grid;
  for (int k = -50; k <= 50; ++k) grid.push_back(k / 25.0);
  auto r = check_monotone(LinearAction({1}), {1.0}, grid);
  CHECK(r.increasing);
  CHECK(r.worst_derivative_error < 1e-6);

  LinearAction a({-1, 1});
  CHECK(close(xi_norm2(a, {1.0, 1.0}), 2));
  auto d = richardson([&](double t) { return moment_standard(a, flow(a, {1.0, 1.0}, t)); }, 0, 1e-3);
  CHECK(std::abs(d.value - 2) < 1e-9);
  CHECK(code_of([] { check_monotone(LinearAction({0}), {1.0}, {0.0}); }) == ErrorCode::FixedPointInput);
  CHECK(code_of([] { check_monotone(LinearAction({1, 0}), {0.0, 1.0}, {0.0}); }) == ErrorCode::FixedPointInput);
}

TEST_CASE("time to level") {
  LinearAction a({1});
  auto t = solve_time_to_level(a, {1.0}, 2);
  REQUIRE(t);
  CHECK(std::abs(*t - 0.5 * std::log(4.0)) < 1e-13);
  CHECK(!solve_time_to_level(a, {1.0}, -1));
  CHECK(!solve_time_to_level(LinearAction({-1, 1}), {0.0, 1.0}, -1));
  auto u = solve_time_to_level(LinearAction({-1, 1}), {1.0, 1.0}, 0, 7, true);
  REQUIRE(u);
  CHECK(std::abs(*u) < 1e-13);
  CHECK(code_of([&] { solve_time_to_level(a, {0.0}, 1); }) == ErrorCode::FixedPointInput);
}

TEST_CASE("level membership") {
  LinearAction a({-1, 1});
  CHECK(!level_membership(a, {1.0, 0.0}, 0.5));
  for (double s : {-5.0, 0.0, 0.5, 9.0}) CHECK(level_membership(a, {1.0, 1.0}, s));
  CHECK(level_membership(a, {0.0, 1.0}, 0.5));
  CHECK(!level_membership(a, {0.0, 1.0}, 0));
  CHECK(!level_membership(a, {0.0, 1.0}, -0.5));
  CHECK(code_of([&] { level_membership(a, {0.0, 0.0}, 1); }) == ErrorCode::FixedPointInput);
}

TEST_CASE("N plus and minus") {
  auto [m, p] = n_pm(LinearAction({-1, 1}), {3.0, 4.0});
  CHECK(close(m, 3));
  CHECK(close(p, 4));
  auto [m2, p2] = n_pm(LinearAction({-2, 2}), {4.0, 9.0});
  CHECK(close(m2, 2));
  CHECK(close(p2, 3));

  LinearAction a({-3, -1, 2, 0});
  CVector z{{0.2, 0.1}, {-0.5, 0.4}, {0.9, -0.3}, {2.0, 0.0}};
  for (double t : {-1.0, 0.3, 1.2}) {
    auto [m0, p0] = n_pm(a, z);
    auto [m1, p1] = n_pm(a, flow(a, z, t));
    CHECK(std::abs(p1 - std::exp(t) * p0) <= 1e-10 * p1);
    CHECK(std::abs(m1 - std::exp(-t) * m0) <= 1e-10 * m1);
  }
}

TEST_CASE("orbital convexity of the N neighbourhood") {
  LinearAction a({-1, 1});
  NeighborhoodSpec spec;  // eps 1/2, eps' 1/4, delta 1/16
  ProbeOptions opt;
  opt.trials = 300;
  auto r = orbital_convexity_probe(a, spec, opt);
  CHECK(r.ok());
  CHECK(r.re_entries == 0);
  CHECK(r.grid_step > 0);

  // z_+ = 0: N_+ stays 0 and the forward flow never leaves.
  auto v = n_neighbourhood(a, spec);
  std::vector<double> grid;
  for (int k = -600; k <= 600; ++k) grid.push_back(k / 50.0);
  auto runs = occupancy(a, v, {0.3, 0.0}, grid);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].first > 0);
  CHECK(runs[0].second + 1 == grid.size());
  CHECK(grid[runs[0].first] < std::log(0.3 / 0.5) + 0.03);

  // A trivial block inside the ball rides along unchanged.
  LinearAction b({-1, 2, 0});
  auto rb = orbital_convexity_probe(b, spec, opt);
  CHECK(rb.re_entries == 0);

  CHECK(code_of([&] {
          NeighborhoodSpec bad;
          bad.eps_prime = 0.6;
          n_neighbourhood(a, bad);
        }) == ErrorCode::Precondition);
}

TEST_CASE("double annulus is caught re-entering") {
  LinearAction a({-1, 1});
  auto region = double_annulus(a, 0.1, 0.2, 0.4, 0.8);
  ProbeOptions opt;
  opt.trials = 50;
  auto r = orbital_convexity_probe(a, region, opt);
  CHECK(r.re_entries == 50);
  CHECK(!r.ok());

  // A single annulus is a single time interval for each orbit.
  auto single = double_annulus(a, 0.1, 0.2, 5, 6);
  opt.t_max = 1;
  CHECK(orbital_convexity_probe(a, single, opt).re_entries == 0);
}

TEST_CASE("psh criterion on the radial family") {
  auto r = psh_criterion(radial_identity(), 0.7, 3);
  for (double e : r.eigenvalues) CHECK(std::abs(e - 1) < 1e-12);
  CHECK(r.kahler);

  for (double t0 : {0.1, 1.0, 2.5}) {
    auto s = psh_criterion(radial_square(), t0, 3, 5);
    CHECK(s.rel_error < 1e-9);
    CHECK(close(s.expected.front(), 2 * t0));
    CHECK(close(s.expected.back(), 4 * t0));
    CHECK(s.kahler);
  }
  auto l = psh_criterion(radial_log(), 0.4, 2);
  CHECK(l.rel_error < 1e-9);
  CHECK(l.expected.front() == 0);
  CHECK(!l.kahler);

  auto b = psh_criterion(radial_blowup(RhoSpec{}), 0.1, 2);
  CHECK(!b.kahler);
  CHECK(close(b.expected.back(), 1 / (2 * pi * 0.1)));
  CHECK(code_of([] { psh_criterion(radial_identity(), 0, 2); }) == ErrorCode::Precondition);
}

TEST_CASE("smoothstep bump") {
  RhoSpec rho;
  CHECK(rho(0.1) == 1);
  CHECK(rho(0.25) == 1);
  CHECK(rho(1.0) == 0);
  CHECK(rho(3.0) == 0);
  CHECK(close(rho(0.625), 0.5));
  for (double t : {0.3, 0.5, 0.8}) {
    CHECK(std::abs(richardson([&](double x) { return rho(x); }, t, 1e-4).value - rho.d1(t)) < 1e-8);
    CHECK(std::abs(richardson([&](double x) { return rho.d1(x); }, t, 1e-4).value - rho.d2(t)) < 1e-7);
  }
}

TEST_CASE("cut tameness identity") {
  auto r = cut_tameness_identity(LinearAction({1}), {1.0}, 1.0);
  CHECK(close(r.direct, 0.5));
  CHECK(close(r.formula, 0.5));
  CHECK(r.orth_omega < 1e-15);
  CHECK(r.orth_omega_j < 1e-15);
  CHECK(r.moment_error < 1e-8);

  auto w0 = cut_tameness_identity(LinearAction({2, -1}), {0.5, 1.0}, 0.0);
  CHECK(w0.direct == 0);
  CHECK(w0.formula == 0);

  auto tiny = cut_tameness_identity(LinearAction({1}), {1e-6}, 1.0);
  CHECK(tiny.formula < 1e-11);
  CHECK(std::abs(tiny.direct - tiny.formula) < 1e-20);

  auto g = cut_tameness_identity(LinearAction({-3, 2, 0}), {{0.3, 0.4}, {-1.0, 0.2}, {0.7, 0.7}}, {0.2, -1.1});
  CHECK(g.rel_error < 1e-9);
  CHECK(g.orth_omega < 1e-9);
  CHECK(g.orth_omega_j < 1e-9);
  CHECK(g.moment_error < 1e-6);

  CHECK(code_of([] { cut_tameness_identity(LinearAction({1, 0}), {0.0, 1.0}, 0.0); }) == ErrorCode::FixedPointInput);
}

TEST_CASE("blow-up potential contraction") {
  // rho = 1 for |z|^2 <= 2, so z = (1, 0) sits in the flat zone.
  RhoSpec wide{2, 4};
  auto r = blowup_potential_check(LinearAction({1, 1}), wide, {1.0, 0.0}, 1e-3);
  REQUIRE(r.phi_formula);
  CHECK(close(r.phi, 1 / (2 * pi)));
  CHECK(close(*r.phi_formula, 1 / (2 * pi)));
  CHECK(r.rel_error < 1e-5);

  LinearAction a({2, -1, 3});
  CVector z{{0.3, 0.1}, {-0.2, 0.25}, {0.1, -0.15}};
  double n2 = 0;
  for (auto c : z) n2 += std::norm(c);
  auto b = blowup_potential_check(a, wide, z, 1e-3);
  REQUIRE(b.phi_formula);
  CHECK(close(b.phi, moment_standard(a, z) * 2 / (2 * pi * n2)));
  CHECK(b.rel_error < 1e-5);

  // Degree 0 homogeneity in the flat zone.
  CVector z2 = z;
  for (auto& c : z2) c *= 1.7;
  CHECK(close(blowup_potential_check(a, wide, z2, 1e-3).phi, b.phi));

  // The identity holds through the transition zone of rho as well.
  auto c = blowup_potential_check(a, RhoSpec{}, CVector{{0.5, 0.2}, {0.3, -0.4}, {0.2, 0.1}}, 1e-3);
  CHECK(!c.phi_formula);
  CHECK(c.rel_error < 1e-5);

  CHECK(code_of([&] { blowup_potential_check(a, RhoSpec{}, CVector{{0.5, 0.2}, {0.3, -0.4}, {0.2, 0.1}}, 0.3); }) ==
        ErrorCode::StepTooLarge);
  CHECK(code_of([&] { blowup_potential_check(a, wide, CVector(3, 0.0), 1e-3); }) == ErrorCode::Precondition);
}

TEST_CASE("battery suites are reproducible and pass") {
  BatteryOptions opt;
  opt.trials = 100;
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    auto r1 = run_suite(name, opt);
    auto r2 = run_suite(name, opt);
    CHECK(r1.failures == 0);
    CHECK(r1.worst == r2.worst);
    CHECK(r1.trials == 100);
  }
  opt.weights = std::vector<long>{-2, 1, 1};
  CHECK(run_suite("solve", opt).failures == 0);
  CHECK(code_of([&] { run_suite("nope", opt); }) == ErrorCode::Precondition);
}
