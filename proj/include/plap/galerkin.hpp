#pragma once

// Spectral Galerkin step for the parabolic problem on a Neumann box.
//
// u_c = sum_j c_j phi_j with tensor cosines phi_j; the implicit Euler level
// is the square system
//
//   R_k(c) = < (u_c - u_k)/dt - plap_apply(u_c) - h(t + dt), phi_k > = 0.

#include <array>
#include <string>
#include <vector>

#include "plap/problem.hpp"

namespace plap {

using Wavenumber = std::array<int, kMaxDim>;

struct BasisSet {
  int m = 0;
  GridPtr grid;
  std::vector<Wavenumber> modes;
  std::vector<Field> evaluated;
  std::vector<double> norms;  // quadrature L2 norms

  double min_norm() const;
};

/// First m tensor cosines, ordered by total wavenumber then lexicographically.
/// Wavenumbers along an axis with N nodes are limited to N - 1.
BasisSet neumann_basis(int m, const GridPtr& grid);

std::vector<double> project(const Field& f, const BasisSet& basis);
Field synthesize(const std::vector<double>& coeffs, const BasisSet& basis);

/// Sampled check of <R(c), c> >= 0 on spheres |c| = r, 2r, 4r.
struct AcuteAngleCertificate {
  double base_radius = 0.0;
  std::vector<double> radii;
  std::vector<double> min_pairing;  // smallest <R(c), c> seen per radius
  std::vector<bool> passed;
  int directions = 0;

  bool all_passed() const;
  bool any_passed() const;
};

struct GalerkinState {
  std::vector<double> coeffs;
  std::vector<double> residual;
  double residual_norm = 0.0;
  int newton_iterations = 0;
  AcuteAngleCertificate certificate;
  std::string warning;
};

/// Residual vector at coefficients `state.coeffs`; t is the current level,
/// the source is taken at t + dt.
std::vector<double> galerkin_residual(const GalerkinState& state, const Field& u_k, double t, const ProblemSpec& spec,
                                      const SolverConfig& cfg, const BasisSet& basis);

/// (|u_k|_2 + dt |h(t + dt)|_2) / min_j |phi_j|_2: beyond this radius the
/// pairing is non-negative whatever the direction.
double certificate_radius(const Field& u_k, double t, const ProblemSpec& spec, const SolverConfig& cfg,
                          const BasisSet& basis);

AcuteAngleCertificate acute_angle_certificate(const Field& u_k, double t, const ProblemSpec& spec,
                                              const SolverConfig& cfg, const BasisSet& basis, int directions = 64);

GalerkinState solve_galerkin_step(const Field& u_k, double t, const ProblemSpec& spec, const SolverConfig& cfg,
                                  const BasisSet& basis);

struct GalerkinRun {
  Trajectory trajectory;  // synthesized states
  std::vector<GalerkinState> steps;
};

/// Runs the Galerkin scheme over [0, T]; the first state is the projection of u0.
GalerkinRun solve_galerkin(const ProblemSpec& spec, const SolverConfig& cfg, const BasisSet& basis);

}  // namespace plap
