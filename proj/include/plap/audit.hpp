#pragma once

// Discrete evaluation of the energy functionals, pairings and interpolation
// bounds along a trajectory. All operator evaluations here use the
// unregularized flux (eps_reg = 0).

#include <map>
#include <string>
#include <vector>

#include "plap/problem.hpp"

namespace plap {

struct PNormParams {
  double alpha = 1.0;
  double beta = 2.0;
  bool include_zero_order = true;

  void validate() const;
  std::string label() const;  // series key, e.g. "pnorm_S[a=1,b=2]"
  friend bool operator==(const PNormParams&, const PNormParams&) = default;
};

/// ( |u|_r^r + sum_i |D_i u|_r^r + | sum_{i,j} |D_i u|^{a/b} D_j D_i u |_b^b )^{1/r},
/// r = a + b; the first term only with include_zero_order.
double pnorm_S1(const Field& u, const PNormParams& params);

struct Verdict {
  bool pass = true;
  double margin = 0.0;
  std::string detail;
};

struct EstimateReport {
  std::vector<double> times;
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, double> scalars;

  bool all_pass() const;
};

/// Both sides of the parabolic pairing identity
///   |u0|^2 + int <u_t - Phi(u), u_t - Lap u> = int |u_t|^2 + [(1/p)|D_i u|_p^p + (1/2)|D_i u|_2^2]_0^t
///                                            + |u0|^2 + (p-1) int sum_{i,j} |D_i u|^{p-2} (D_i D_j u)^2.
struct PairingReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;
  // right-side pieces
  double kinetic = 0.0;
  double potential_end = 0.0;
  double quadratic_end = 0.0;
  double initial_l2 = 0.0;
  double hessian = 0.0;
  double potential_start = 0.0;
  double quadratic_start = 0.0;
};

PairingReport parabolic_pairing(const Trajectory& traj, const ProblemSpec& spec);

/// |int <h, u_t - Lap u>| <= C(eps) int |h|_2^2 + eps int |u_t|_2^2
///                           + C1(eps1) int |h|_{W1,q}^q + eps1 int sum_i |D_i u|_p^p
struct RhsBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double c_eps = 0.0;
  double c_eps1 = 0.0;
  double h_l2 = 0.0;    // int |h|_2^2
  double ut_l2 = 0.0;   // int |u_t|_2^2
  double h_w1q = 0.0;   // int |h|_{W1,q}^q
  double grad_lp = 0.0; // int sum_i |D_i u|_p^p

  bool holds() const { return margin >= 0.0; }
};

RhsBoundReport rhs_bound_check(const Trajectory& traj, const ProblemSpec& spec, double eps, double eps1);

/// Young constants: ab <= eps a^2 + young_quadratic(eps) b^2 and
/// ab <= eps a^p + young_conjugate(p, eps) b^q.
double young_quadratic(double eps);
double young_conjugate(double p, double eps);

/// Per-step check of
///   (1/4)|u_t|^2 + y' <= a + lambda y,   y = (1/p) sum_i |D_i u|_p^p + (1/2)|W|^2,
/// W = div of the accumulated flux, a = |H~|_2^2 + C'(1/p) |H~|_{W1,p}^p,
/// H~ = int_0^t h + u1. Right sides use the two-level average.
struct EnergyAuditReport {
  std::vector<double> times;
  std::vector<double> kinetic;      // (1/2)|u_t|^2
  std::vector<double> potential;    // (1/p) sum_i |D_i u|_p^p
  std::vector<double> flux_energy;  // (1/2)|W|^2
  std::vector<double> y;
  std::vector<double> source;       // a(t)
  std::vector<double> step_lhs;     // one per step
  std::vector<double> step_rhs;
  double lambda = 2.0;
  double worst_margin = 0.0;
  bool all_steps_hold = true;
};

EnergyAuditReport hyperbolic_energy_audit(const Trajectory& traj, const ProblemSpec& spec);

/// sup_t (sum_i |D_i u|_p^p + |W|^2) <= max(p, 2) (y(0) + int a) e^{lambda T}.
struct GronwallReport {
  double lambda = 2.0;
  double y0 = 0.0;
  double source_integral = 0.0;
  double constant = 0.0;
  double sup_lhs = 0.0;
  double margin = 0.0;
  bool holds = true;
  std::vector<double> lhs;    // per time
  std::vector<double> bound;  // running bound with T -> t
};

GronwallReport gronwall_bound(const Trajectory& traj, const ProblemSpec& spec);

/// Interpolation |D^l v|_{p2} <= C |D^m v|_{p0}^theta |v|_{p1}^{1-theta} with
///   1/p2 - l/n = (1 - theta)/p1 + theta (1/p0 - m/n).
struct NgsExponents {
  int n = 1;
  double p0 = 2.0;
  double p1 = 2.0;
  double p2 = 2.0;
  int l = 0;
  int m = 1;
};

/// The instance used for the wave estimates: p2 = 2, l = 0, p1 = p/(p-1), p0 = 2, m = 1.
NgsExponents wave_ngs_exponents(int n, double p);
double ngs_theta(const NgsExponents& e);
/// n(p-2) / (n(p-2) + 2p)
double ngs_theta_closed_form(int n, double p);

struct NgsSides {
  double lhs = 0.0;
  double factor = 0.0;  // |D^m v|^theta |v|^{1-theta}, without the constant
  bool degenerate = false;
  double ratio() const { return degenerate ? 0.0 : lhs / factor; }
};

NgsSides ngs_sides(const Field& v, const NgsExponents& e);

/// 20 zero-mean fields per set: 16 Gaussian bumps anchored at the box corners
/// and 4 low cosine profiles. Sets 0 and 1 share no field.
std::vector<Field> ngs_calibration_set(const GridPtr& grid, int set = 0);
double ngs_calibrate(const GridPtr& grid, const NgsExponents& e, int set = 0);

struct NgsReport {
  double theta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
  bool holds = true;
};

NgsReport ngs_check(const Field& v, const NgsExponents& e, double constant);
NgsReport ngs_check(const Field& v, const NgsExponents& e);

/// Derivative seminorm of order j in L^r: j = 0, 1, 2.
double derivative_norm(const Field& v, int order, double r);

/// Second time derivative of the states: centered inside, one-sided at the ends.
std::vector<Field> second_time_difference(const Trajectory& traj);

/// Membership witnesses of the wave solution class.
EstimateReport ds_class_report(const Trajectory& traj, const ProblemSpec& spec,
                               const std::vector<PNormParams>& pnorms = {});

/// Series, dissipation and pairing summaries for parabolic runs.
EstimateReport parabolic_report(const Trajectory& traj, const ProblemSpec& spec,
                                const std::vector<PNormParams>& pnorms = {});

/// Default pseudo-norm for exponent p: alpha = p - 2, beta = 2.
PNormParams default_pnorm(double p);

}  // namespace plap
