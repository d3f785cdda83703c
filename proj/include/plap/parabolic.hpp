#pragma once

// Implicit Euler for  u_t - sum_i D_i(|D_i u|^{p-2} D_i u) = h  with zero
// normal flux. Each step solves
//
//   u_{k+1} - dt * plap_apply(u_{k+1}) = u_k + dt * h(t_{k+1})
//
// by damped Newton on the regularized operator, falling back to frozen-
// coefficient (Picard) sweeps when Newton stalls.

#include "plap/problem.hpp"

namespace plap {

struct StepDiagnostics {
  int newton_iterations = 0;
  int picard_sweeps = 0;
  double residual = 0.0;
};

/// Euclidean norm of u_next - dt*plap_apply(u_next) - u_k - dt*h(t_next).
double step_residual_norm(const Field& u_next, const Field& u_k, double t_next, const ProblemSpec& spec,
                          const SolverConfig& cfg);

Field step_parabolic(const Field& u_k, double t_k, const ProblemSpec& spec, const SolverConfig& cfg,
                     StepDiagnostics* diag = nullptr);

Trajectory solve_parabolic(const ProblemSpec& spec, const SolverConfig& cfg);

}  // namespace plap
