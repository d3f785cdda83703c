#include "doctest.h"
#include "plap/errors.hpp"
#include "plap/hyperbolic.hpp"
#include "test_support.hpp"

using namespace plap;
using namespace plap::testing;

namespace {

ProblemSpec wave_problem(Mode mode, const GridPtr& g, double p, double T, Field u0, Field u1,
                         Source h = Source::zero()) {
  ProblemSpec spec;
  spec.mode = mode;
  spec.p = p;
  spec.p2_diagnostic = p == 2.0;
  spec.T = T;
  spec.grid = g;
  spec.u0 = std::move(u0);
  spec.u1 = std::move(u1);
  spec.h = std::move(h);
  return spec;
}

double l2_gap(const Trajectory& a, const Trajectory& b) {
  // discrete L2(Q): trapezoid in time of ||a_k - b_k||^2
  double s = 0.0;
  const double dt = a.dt();
  const std::size_t n = a.states.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k == n - 1) ? 0.5 * dt : dt;
    s += w * lp_norm_pow(a.states[k] - b.states[k], 2.0);
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("accumulate_H integrates the source by trapezoid") {
  const auto g = unit_grid_1d(9);
  const double dt = 0.1;
  Field H(g);
  const Field Hz = accumulate_H(Source::zero(), g, dt, dt, H);
  CHECK(Hz.max_abs() == 0.0);

  Field Hc(g), Hl(g);
  const Source c = Source::closed_form([](double, auto) { return 2.5; });
  const Source lin = Source::closed_form([](double t, auto) { return t; });
  for (int k = 1; k <= 7; ++k) {
    Hc = accumulate_H(c, g, k * dt, dt, Hc);
    Hl = accumulate_H(lin, g, k * dt, dt, Hl);
  }
  const double t = 7 * dt;
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(Hc[i] == doctest::Approx(2.5 * t).epsilon(1e-14));
    CHECK(Hl[i] == doctest::Approx(0.5 * t * t).epsilon(1e-14));
  }
}

TEST_CASE("constant state stays constant in both schemes") {
  const auto g = unit_grid_2d(9);
  for (Mode mode : {Mode::hyperbolic, Mode::integro}) {
    const auto spec = wave_problem(mode, g, 3.0, 0.1, Field::constant(g, 1.5), Field(g));
    SolverConfig cfg;
    cfg.dt = 1e-2;
    const Trajectory traj = solve_hyperbolic(spec, cfg);
    for (const auto& s : traj.states) CHECK(max_abs_diff(s, spec.u0) < 1e-12);
  }
}

TEST_CASE("linear-in-time motion is reproduced exactly by leapfrog") {
  const auto g = unit_grid_1d(17);
  const double c = 0.75;
  const auto spec = wave_problem(Mode::hyperbolic, g, 3.0, 0.5, Field(g), Field::constant(g, c));
  SolverConfig cfg;
  cfg.dt = 1e-2;
  const Trajectory traj = solve_hyperbolic(spec, cfg);
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    CHECK(max_abs_diff(traj.states[k], Field::constant(g, c * traj.times[k])) < 1e-12);
}

TEST_CASE("p = 2 Neumann wave eigenmode") {
  const auto g = unit_grid_1d(65);
  const Field c = Field::from_function(g, [](auto x) { return std::cos(pi * x[0]); });
  const auto spec = wave_problem(Mode::hyperbolic, g, 2.0, 1.0, c, Field(g));
  SolverConfig cfg;
  cfg.dt = 0.4 * g->spacing(0);
  const Trajectory traj = solve_hyperbolic(spec, cfg);
  const double h = g->spacing(0);
  double err = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    err = std::max(err, max_abs_diff(traj.states[k], std::cos(pi * traj.times[k]) * c));
  CHECK(err < 2.0 * (cfg.dt * cfg.dt + h * h) * pi * pi * pi);
}

TEST_CASE("integro scheme follows the spatial-mean ODE") {
  const auto g = unit_grid_1d(17);
  const double c = 0.4, a = 1.5, T = 0.5;
  const auto spec = wave_problem(Mode::integro, g, 3.0, T, Field::constant(g, 1.0), Field::constant(g, c),
                                 Source::closed_form([a](double, auto) { return a; }));
  SolverConfig cfg;
  cfg.dt = 1e-3;
  const Trajectory traj = solve_hyperbolic(spec, cfg);
  const double exact = 1.0 + c * T + 0.5 * a * T * T;
  CHECK(std::abs(traj.states.back()[3] - exact) <= a * T * cfg.dt);
  // right-endpoint bias of the first-order scheme is exactly a*T*dt/2
  CHECK(traj.states.back()[3] == doctest::Approx(exact - 0.5 * a * T * cfg.dt).epsilon(1e-10));
}

TEST_CASE("mean dynamics: second difference of the mass equals dt^2 * integral of h") {
  std::mt19937_64 rng(61);
  const auto g = unit_grid_2d(17);
  const auto spec = wave_problem(Mode::hyperbolic, g, 3.0, 0.2, random_smooth_field(g, rng),
                                 random_smooth_field(g, rng), Source::closed_form([](double t, auto x) {
                                   return std::cos(3 * t) + x[0] * x[1];
                                 }));
  SolverConfig cfg;
  cfg.dt = 2e-3;
  const Trajectory traj = solve_hyperbolic(spec, cfg);
  for (std::size_t k = 1; k + 1 < traj.states.size(); ++k) {
    const double d2 = integrate(traj.states[k + 1]) - 2 * integrate(traj.states[k]) + integrate(traj.states[k - 1]);
    CHECK(std::abs(d2 - cfg.dt * cfg.dt * integrate(spec.h.sample(g, traj.times[k]))) < 1e-9);
  }
}

TEST_CASE("zero data stays zero") {
  const auto g = unit_grid_1d(17);
  for (Mode mode : {Mode::hyperbolic, Mode::integro}) {
    const auto spec = wave_problem(mode, g, 3.0, 0.1, Field(g), Field(g));
    SolverConfig cfg;
    cfg.dt = 1e-2;
    const Trajectory traj = solve_hyperbolic(spec, cfg);
    for (const auto& s : traj.states) CHECK(s.max_abs() == 0.0);
    for (const auto& a : traj.accumulated_flux) CHECK(a.boundary_is_zero());
  }
}

TEST_CASE("leapfrog energy drift is second order in dt") {
  const auto g = unit_grid_1d(65);
  const Field u0 = Field::from_function(g, [](auto x) { return 0.5 * std::cos(pi * x[0]); });
  const double p = 3.0;
  auto drift = [&](double dt) {
    const auto spec = wave_problem(Mode::hyperbolic, g, p, 0.5, u0, Field(g));
    SolverConfig cfg;
    cfg.dt = dt;
    const Trajectory traj = solve_hyperbolic(spec, cfg);
    auto energy = [&](std::size_t k) {
      const double pot = 0.5 * (gradient_lp_pow(traj.states[k], p) + gradient_lp_pow(traj.states[k + 1], p)) / p;
      return 0.5 * lp_norm_pow(traj.dstates[k], 2.0) + pot;
    };
    double m = 0.0;
    for (std::size_t k = 0; k < traj.dstates.size(); ++k) m = std::max(m, std::abs(energy(k) - energy(0)));
    return m;
  };
  const double d1 = drift(2e-3);
  const double d2 = drift(1e-3);
  CHECK(d1 / d2 > 3.0);
}

TEST_CASE("leapfrog is time reversible") {
  std::mt19937_64 rng(67);
  const auto g = unit_grid_2d(17);
  auto spec = wave_problem(Mode::hyperbolic, g, 3.0, 0.1, 0.3 * random_smooth_field(g, rng),
                           0.3 * random_smooth_field(g, rng));
  SolverConfig cfg;
  cfg.dt = 2e-3;
  WaveState s = initial_wave_state(spec, cfg);
  for (int k = 0; k < 50; ++k) s = step_wave(s, spec, cfg);
  std::swap(s.u_prev, s.u_curr);
  for (int k = 0; k < 49; ++k) s = step_wave(s, spec, cfg);
  CHECK(max_abs_diff(s.u_curr, spec.u0) < 1e-8);
}

TEST_CASE("stability guard aborts with a suggested dt") {
  const auto g = unit_grid_1d(33);
  const Field u0 = Field::from_function(g, [](auto x) { return 5.0 * std::cos(pi * x[0]); });
  const auto spec = wave_problem(Mode::hyperbolic, g, 4.0, 0.1, u0, Field(g));
  SolverConfig cfg;
  cfg.dt = 0.05;
  try {
    (void)solve_hyperbolic(spec, cfg);
    FAIL("expected SolverAbort");
  } catch (const SolverAbort& e) {
    CHECK(e.reason() == AbortReason::stability_guard);
    CHECK(e.suggested_dt() > 0.0);
    CHECK(e.suggested_dt() < cfg.dt);
    CHECK(e.suggested_dt() <= stable_dt(u0, 4.0, cfg.eps_reg));
  }
}

TEST_CASE("wave and integro trajectories converge to each other") {
  const auto g = unit_grid_1d(33);
  const Field u0 = Field::from_function(g, [](auto x) { return 0.5 * std::cos(pi * x[0]); });
  const Field u1 = Field::from_function(g, [](auto x) { return 0.2 * std::cos(2 * pi * x[0]); });
  const Source h = Source::closed_form([](double t, auto x) { return std::sin(pi * t) * std::cos(pi * x[0]); });
  std::vector<double> gaps;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    SolverConfig cfg;
    cfg.dt = dt;
    const auto a = solve_hyperbolic(wave_problem(Mode::hyperbolic, g, 3.0, 0.5, u0, u1, h), cfg);
    const auto b = solve_hyperbolic(wave_problem(Mode::integro, g, 3.0, 0.5, u0, u1, h), cfg);
    gaps.push_back(l2_gap(a, b));
  }
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < gaps[1]);
  CHECK(std::log2(gaps[1] / gaps[2]) > 0.9);
}
