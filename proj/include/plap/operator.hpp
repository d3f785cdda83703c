#pragma once

// Coordinate-wise degenerate operator  sum_i D_i(|D_i u|^{p-2} D_i u)  with
// the zero normal-flux condition built into the face layout: every boundary
// face of a FluxField is exactly zero.

#include <array>
#include <vector>

#include "plap/grid.hpp"

namespace plap {

inline constexpr double kEpsFloor = 1e-14;

struct OperatorParams {
  double p = 3.0;
  double eps_reg = 0.0;
  // Admits p = 2 (linear diffusion) for analytic cross-checks.
  bool p2_diagnostic = false;
  std::array<bool, kMaxDim> per_axis_flux_zero{true, true, true};

  void validate() const;
};

struct FluxField {
  std::vector<FaceField> axes;

  static FluxField zeros(const GridPtr& grid);
  FluxField& axpy(double s, const FluxField& other);
  bool boundary_is_zero() const;
};

/// q(s) = (s^2 + eps^2)^{(p-2)/2} s; equals |s|^{p-2} s when eps = 0.
double flux_law(double s, double p, double eps);
/// dq/ds = (s^2 + eps^2)^{(p-4)/2} ((p-1) s^2 + eps^2).
double flux_law_derivative(double s, double p, double eps);

FluxField plap_flux(const Field& u, const OperatorParams& params);
Field flux_divergence(const FluxField& flux);
Field plap_apply(const Field& u, const OperatorParams& params);

/// Directional derivative of plap_apply at u along v. Throws
/// DegenerateLinearization when eps_reg = 0 and some face gradient of u is
/// below kEpsFloor (p > 2).
Field plap_jacobian_vec(const Field& u, const Field& v, const OperatorParams& params);

/// Face coefficients dq/ds of the linearization, one FaceField per axis.
FluxField plap_jacobian_coefficients(const Field& u, const OperatorParams& params);

/// Dissipation sum_i sum_faces q(s) s w = -<plap_apply(u), u>.
double plap_dissipation(const Field& u, const OperatorParams& params);

/// sum_i ||D_i u||_r^r over interior faces.
double gradient_lp_pow(const Field& u, double r);

}  // namespace plap
