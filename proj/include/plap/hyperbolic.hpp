#pragma once

// Explicit schemes for  u_tt - sum_i D_i(|D_i u|^{p-2} D_i u) = h  and for the
// equivalent first-order-in-time integro form
//
//   u_t - sum_i D_i int_0^t |D_i u|^{p-2} D_i u dtau = H(t, x) + u1,
//   H(t, x) = int_0^t h(tau, x) dtau.

#include "plap/problem.hpp"

namespace plap {

struct WaveState {
  Field u_prev;
  Field u_curr;
  double t = 0.0;
  FluxField accumulated_flux;  // running integral of the flux
  Field accumulated_H;         // H(t, x)
};

/// Trapezoid update prior + (dt/2)(h(t - dt) + h(t)).
Field accumulate_H(const Source& h, const GridPtr& grid, double t, double dt, const Field& prior);

/// Largest dt accepted by the explicit stability guard at state u:
/// 0.5 * min_spacing / (max_face |s|^{(p-2)/2} + eps).
double stable_dt(const Field& u, double p, double eps);

/// Leapfrog start: u_prev = u0 - dt*u1 + (dt^2/2)(plap_apply(u0) + h(0)).
WaveState initial_wave_state(const ProblemSpec& spec, const SolverConfig& cfg);
/// Integro start: u_prev = u0 - dt*u1, accumulators zero.
WaveState initial_integro_state(const ProblemSpec& spec, const SolverConfig& cfg);

/// u_next = 2 u_curr - u_prev + dt^2 (plap_apply(u_curr) + h(t)).
WaveState step_wave(const WaveState& state, const ProblemSpec& spec, const SolverConfig& cfg);

/// u_next = u_curr + dt (div A + H + u1), then A += dt * plap_flux(u_next).
WaveState step_integro(const WaveState& state, const ProblemSpec& spec, const SolverConfig& cfg);

Trajectory solve_hyperbolic(const ProblemSpec& spec, const SolverConfig& cfg);

}  // namespace plap
