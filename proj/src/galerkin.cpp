#include "plap/galerkin.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "plap/errors.hpp"

namespace plap {

namespace {

double euclid(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// All wavenumber tuples with the given total, in lexicographic order.
void tuples_with_total(int dim, int total, const Grid& g, std::vector<Wavenumber>& out) {
  Wavenumber k{0, 0, 0};
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == dim - 1) {
      if (left <= g.nodes(axis) - 1) {
        k[axis] = left;
        out.push_back(k);
      }
      return;
    }
    for (int v = 0; v <= std::min(left, g.nodes(axis) - 1); ++v) {
      k[axis] = v;
      self(self, axis + 1, left - v);
    }
  };
  rec(rec, 0, total);
}

class GalerkinSystem {
 public:
  GalerkinSystem(const Field& u_k, double t, const ProblemSpec& spec, const SolverConfig& cfg, const BasisSet& basis)
      : basis_(basis), params_(spec.operator_params(cfg.eps_reg)), dt_(cfg.dt), rhs_(u_k) {
    rhs_.axpy(cfg.dt, spec.h.sample(spec.grid, t + cfg.dt));
    rhs_ *= 1.0 / cfg.dt;  // u_k/dt + h
  }

  std::vector<double> residual(const std::vector<double>& c) const {
    const Field u = synthesize(c, basis_);
    Field r = u;
    r *= 1.0 / dt_;
    r -= plap_apply(u, params_);
    r -= rhs_;
    return project_raw(r);
  }

  Eigen::MatrixXd jacobian(const std::vector<double>& c) const {
    const Field u = synthesize(c, basis_);
    const int m = basis_.m;
    Eigen::MatrixXd J(m, m);
    for (int j = 0; j < m; ++j) {
      Field col = basis_.evaluated[j];
      col *= 1.0 / dt_;
      col -= plap_jacobian_vec(u, basis_.evaluated[j], params_);
      const std::vector<double> row = project_raw(col);
      for (int k = 0; k < m; ++k) J(k, j) = row[k];
    }
    return J;
  }

  const Field& rhs() const { return rhs_; }

 private:
  std::vector<double> project_raw(const Field& f) const {
    std::vector<double> out(basis_.m);
    for (int k = 0; k < basis_.m; ++k) out[k] = inner(f, basis_.evaluated[k]);
    return out;
  }

  const BasisSet& basis_;
  OperatorParams params_;
  double dt_;
  Field rhs_;
};

}  // namespace

double BasisSet::min_norm() const { return norms.empty() ? 0.0 : *std::min_element(norms.begin(), norms.end()); }

BasisSet neumann_basis(int m, const GridPtr& grid) {
  if (!grid) throw std::invalid_argument("neumann_basis: null grid");
  if (m < 1) throw std::invalid_argument("neumann_basis: m must be at least 1");
  const Grid& g = *grid;
  std::size_t available = 1;
  int max_total = 0;
  for (int a = 0; a < g.dim(); ++a) {
    available *= static_cast<std::size_t>(g.nodes(a));
    max_total += g.nodes(a) - 1;
  }
  if (static_cast<std::size_t>(m) > available)
    throw std::invalid_argument("neumann_basis: m = " + std::to_string(m) + " exceeds the " +
                                std::to_string(available) + " modes resolvable on this grid (Nyquist limit)");

  BasisSet b;
  b.m = m;
  b.grid = grid;
  for (int total = 0; total <= max_total && static_cast<int>(b.modes.size()) < m; ++total)
    tuples_with_total(g.dim(), total, g, b.modes);
  b.modes.resize(static_cast<std::size_t>(m));

  for (const Wavenumber& k : b.modes) {
    Field f = Field::from_function(grid, [&](std::span<const double> x) {
      double v = 1.0;
      for (int a = 0; a < g.dim(); ++a) {
        const Bounds bd = g.bounds(a);
        v *= std::cos(k[a] * std::numbers::pi * (x[a] - bd.low) / (bd.high - bd.low));
      }
      return v;
    });
    b.norms.push_back(lp_norm(f, 2.0));
    b.evaluated.push_back(std::move(f));
  }
  return b;
}

std::vector<double> project(const Field& f, const BasisSet& basis) {
  std::vector<double> c(basis.m);
  for (int j = 0; j < basis.m; ++j) c[j] = inner(f, basis.evaluated[j]) / (basis.norms[j] * basis.norms[j]);
  return c;
}

Field synthesize(const std::vector<double>& coeffs, const BasisSet& basis) {
  if (coeffs.size() != static_cast<std::size_t>(basis.m))
    throw std::invalid_argument("coefficient vector length differs from the basis size");
  Field u(basis.grid);
  for (int j = 0; j < basis.m; ++j)
    if (coeffs[j] != 0.0) u.axpy(coeffs[j], basis.evaluated[j]);
  return u;
}

bool AcuteAngleCertificate::all_passed() const {
  return !passed.empty() && std::all_of(passed.begin(), passed.end(), [](bool b) { return b; });
}

bool AcuteAngleCertificate::any_passed() const {
  return std::any_of(passed.begin(), passed.end(), [](bool b) { return b; });
}

std::vector<double> galerkin_residual(const GalerkinState& state, const Field& u_k, double t, const ProblemSpec& spec,
                                      const SolverConfig& cfg, const BasisSet& basis) {
  if (state.coeffs.size() != static_cast<std::size_t>(basis.m))
    throw std::invalid_argument("coefficient vector length differs from the basis size");
  return GalerkinSystem(u_k, t, spec, cfg, basis).residual(state.coeffs);
}

double certificate_radius(const Field& u_k, double t, const ProblemSpec& spec, const SolverConfig& cfg,
                          const BasisSet& basis) {
  const double hn = spec.h.is_zero() ? 0.0 : lp_norm(spec.h.sample(spec.grid, t + cfg.dt), 2.0);
  return (lp_norm(u_k, 2.0) + cfg.dt * hn) / basis.min_norm();
}

AcuteAngleCertificate acute_angle_certificate(const Field& u_k, double t, const ProblemSpec& spec,
                                              const SolverConfig& cfg, const BasisSet& basis, int directions) {
  const GalerkinSystem sys(u_k, t, spec, cfg, basis);
  AcuteAngleCertificate cert;
  cert.directions = directions;
  cert.base_radius = certificate_radius(u_k, t, spec, cfg, basis);
  // zero data: any sphere will do
  const double r0 = cert.base_radius > 0.0 ? cert.base_radius : 1.0;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(basis.m);
  for (double scale : {1.0, 2.0, 4.0}) {
    const double r = scale * r0;
    double lowest = std::numeric_limits<double>::infinity();
    for (int d = 0; d < directions; ++d) {
      for (double& v : c) v = normal(rng);
      const double len = euclid(c);
      for (double& v : c) v *= r / len;
      const std::vector<double> res = sys.residual(c);
      double pairing = 0.0;
      for (int j = 0; j < basis.m; ++j) pairing += res[j] * c[j];
      lowest = std::min(lowest, pairing);
    }
    cert.radii.push_back(r);
    cert.min_pairing.push_back(lowest);
    cert.passed.push_back(lowest >= 0.0);
  }
  return cert;
}

GalerkinState solve_galerkin_step(const Field& u_k, double t, const ProblemSpec& spec, const SolverConfig& cfg,
                                  const BasisSet& basis) {
  cfg.validate();
  const double t_next = t + cfg.dt;
  const GalerkinSystem sys(u_k, t, spec, cfg, basis);

  GalerkinState st;
  st.certificate = acute_angle_certificate(u_k, t, spec, cfg, basis);
  if (!st.certificate.any_passed())
    st.warning = "acute-angle certificate failed at every sampled radius; solving anyway";

  st.coeffs = project(u_k, basis);
  st.residual = sys.residual(st.coeffs);
  st.residual_norm = euclid(st.residual);

  while (st.residual_norm > cfg.newton_tol && st.newton_iterations < cfg.newton_max_iters) {
    const Eigen::MatrixXd J = sys.jacobian(st.coeffs);
    Eigen::VectorXd b(basis.m);
    for (int k = 0; k < basis.m; ++k) b[k] = -st.residual[k];
    const Eigen::VectorXd delta = J.partialPivLu().solve(b);
    ++st.newton_iterations;

    double alpha = 1.0;
    std::vector<double> trial(basis.m), trial_r;
    double trial_rn = st.residual_norm;
    for (int halving = 0; halving < 30; ++halving) {
      for (int k = 0; k < basis.m; ++k) trial[k] = st.coeffs[k] + alpha * delta[k];
      trial_r = sys.residual(trial);
      trial_rn = euclid(trial_r);
      if (!cfg.line_search || (std::isfinite(trial_rn) && trial_rn <= (1.0 - 1e-4 * alpha) * st.residual_norm))
        break;
      alpha *= 0.5;
    }
    if (!std::isfinite(trial_rn))
      throw SolverAbort(AbortReason::non_finite, t_next, "non-finite Galerkin residual", trial_rn,
                        st.newton_iterations);
    if (cfg.line_search && !(trial_rn < st.residual_norm)) break;
    st.coeffs = std::move(trial);
    st.residual = std::move(trial_r);
    st.residual_norm = trial_rn;
  }
  if (st.residual_norm > cfg.newton_tol)
    throw SolverAbort(AbortReason::newton_nonconvergence, t_next,
                      "Galerkin Newton did not converge; residual " + std::to_string(st.residual_norm),
                      st.residual_norm, st.newton_iterations);
  return st;
}

GalerkinRun solve_galerkin(const ProblemSpec& spec, const SolverConfig& cfg, const BasisSet& basis) {
  spec.validate();
  cfg.validate();
  if (spec.mode != Mode::parabolic) throw std::invalid_argument("solve_galerkin needs a parabolic problem");
  const int n = step_count(spec.T, cfg.dt);
  GalerkinRun run;
  Trajectory& traj = run.trajectory;
  traj.times.push_back(0.0);
  traj.states.push_back(synthesize(project(spec.u0, basis), basis));
  for (int k = 0; k < n; ++k) {
    GalerkinState st = solve_galerkin_step(traj.states.back(), k * cfg.dt, spec, cfg, basis);
    traj.states.push_back(synthesize(st.coeffs, basis));
    traj.times.push_back((k + 1) * cfg.dt);
    run.steps.push_back(std::move(st));
  }
  for (int k = 0; k < n; ++k) {
    Field d = traj.states[k + 1] - traj.states[k];
    d *= 1.0 / cfg.dt;
    traj.dstates.push_back(std::move(d));
  }
  return run;
}

}  // namespace plap
