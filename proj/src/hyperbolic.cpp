#include "plap/hyperbolic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "plap/errors.hpp"

namespace plap {

Field accumulate_H(const Source& h, const GridPtr& grid, double t, double dt, const Field& prior) {
  if (h.is_zero()) return prior;
  Field out = prior;
  out.axpy(0.5 * dt, h.sample(grid, t - dt));
  out.axpy(0.5 * dt, h.sample(grid, t));
  return out;
}

double stable_dt(const Field& u, double p, double eps) {
  const Grid& g = u.grid();
  double m = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const FaceField s = face_gradient(u, a);
    const auto w = g.face_weights(a);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (w[i] == 0.0) continue;
      m = std::max(m, p == 2.0 ? 1.0 : std::pow(std::abs(s[i]), 0.5 * (p - 2.0)));
    }
  }
  const double denom = m + eps;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * g.min_spacing() / denom;
}

namespace {

void guard(const WaveState& state, const ProblemSpec& spec, const SolverConfig& cfg) {
  const double limit = stable_dt(state.u_curr, spec.p, cfg.eps_reg);
  if (cfg.dt > limit) {
    throw SolverAbort(AbortReason::stability_guard, state.t,
                      "dt = " + std::to_string(cfg.dt) + " exceeds the explicit stability limit " +
                          std::to_string(limit),
                      0.0, 0, 0.9 * limit);
  }
}

void check_finite(const Field& u, double t) {
  if (!u.all_finite()) throw SolverAbort(AbortReason::non_finite, t, "non-finite state");
}

}  // namespace

WaveState initial_wave_state(const ProblemSpec& spec, const SolverConfig& cfg) {
  const OperatorParams params = spec.operator_params(cfg.eps_reg);
  WaveState s;
  s.u_curr = spec.u0;
  s.u_prev = spec.u0;
  s.u_prev.axpy(-cfg.dt, spec.u1);
  Field accel = plap_apply(spec.u0, params);
  accel += spec.h.sample(spec.grid, 0.0);
  s.u_prev.axpy(0.5 * cfg.dt * cfg.dt, accel);
  s.t = 0.0;
  s.accumulated_flux = FluxField::zeros(spec.grid);
  s.accumulated_H = Field(spec.grid);
  return s;
}

WaveState initial_integro_state(const ProblemSpec& spec, const SolverConfig& cfg) {
  WaveState s;
  s.u_curr = spec.u0;
  s.u_prev = spec.u0;
  s.u_prev.axpy(-cfg.dt, spec.u1);
  s.t = 0.0;
  s.accumulated_flux = FluxField::zeros(spec.grid);
  s.accumulated_H = Field(spec.grid);
  return s;
}

WaveState step_wave(const WaveState& state, const ProblemSpec& spec, const SolverConfig& cfg) {
  guard(state, spec, cfg);
  const OperatorParams params = spec.operator_params(cfg.eps_reg);
  const double dt = cfg.dt;
  const FluxField q_curr = plap_flux(state.u_curr, params);

  Field accel = flux_divergence(q_curr);
  accel += spec.h.sample(spec.grid, state.t);

  WaveState next;
  next.t = state.t + dt;
  next.u_curr = state.u_curr;
  next.u_curr *= 2.0;
  next.u_curr -= state.u_prev;
  next.u_curr.axpy(dt * dt, accel);
  check_finite(next.u_curr, next.t);
  next.u_prev = state.u_curr;

  next.accumulated_flux = state.accumulated_flux;
  next.accumulated_flux.axpy(0.5 * dt, q_curr);
  next.accumulated_flux.axpy(0.5 * dt, plap_flux(next.u_curr, params));
  next.accumulated_H = accumulate_H(spec.h, spec.grid, next.t, dt, state.accumulated_H);
  return next;
}

WaveState step_integro(const WaveState& state, const ProblemSpec& spec, const SolverConfig& cfg) {
  guard(state, spec, cfg);
  const OperatorParams params = spec.operator_params(cfg.eps_reg);
  const double dt = cfg.dt;

  Field velocity = flux_divergence(state.accumulated_flux);
  velocity += state.accumulated_H;
  velocity += spec.u1;

  WaveState next;
  next.t = state.t + dt;
  next.u_curr = state.u_curr;
  next.u_curr.axpy(dt, velocity);
  check_finite(next.u_curr, next.t);
  next.u_prev = state.u_curr;
  next.accumulated_flux = state.accumulated_flux;
  next.accumulated_flux.axpy(dt, plap_flux(next.u_curr, params));
  next.accumulated_H = accumulate_H(spec.h, spec.grid, next.t, dt, state.accumulated_H);
  return next;
}

Trajectory solve_hyperbolic(const ProblemSpec& spec, const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (spec.mode == Mode::parabolic) throw std::invalid_argument("solve_hyperbolic needs a hyperbolic or integro problem");
  const bool wave = spec.mode == Mode::hyperbolic;
  const int n = step_count(spec.T, cfg.dt);

  WaveState state = wave ? initial_wave_state(spec, cfg) : initial_integro_state(spec, cfg);
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(state.u_curr);
  traj.accumulated_flux.push_back(state.accumulated_flux);
  for (int k = 0; k < n; ++k) {
    state = wave ? step_wave(state, spec, cfg) : step_integro(state, spec, cfg);
    traj.times.push_back((k + 1) * cfg.dt);
    traj.states.push_back(state.u_curr);
    traj.accumulated_flux.push_back(state.accumulated_flux);
  }
  for (int k = 0; k < n; ++k) {
    Field d = traj.states[k + 1] - traj.states[k];
    d *= 1.0 / cfg.dt;
    traj.dstates.push_back(std::move(d));
  }
  return traj;
}

}  // namespace plap
