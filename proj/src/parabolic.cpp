#include "plap/parabolic.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <string>

#include "plap/errors.hpp"

namespace plap {

namespace {

double euclid(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s);
}

// Symmetric form of (I - dt * L) where L is a weighted Laplacian with face
// coefficients `coef`: diag(w) + dt * sum_f (tau_f c_f / h)(e_a - e_b)(e_a - e_b)^T.
Eigen::SparseMatrix<double> assemble_system(const Grid& g, const FluxField& coef, double dt) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.size() * (1 + 4 * static_cast<std::size_t>(g.dim())));
  const auto w = g.weights();
  for (std::size_t n = 0; n < g.size(); ++n) trips.emplace_back(static_cast<int>(n), static_cast<int>(n), w[n]);
  for (const FaceField& c : coef.axes) {
    const int axis = c.axis();
    const std::size_t ns = g.stride(axis);
    const std::size_t fs = g.face_stride(axis, axis);
    const int nn = g.nodes(axis);
    const double h = g.spacing(axis);
    g.for_each_line(axis, [&](std::size_t nb, std::size_t fb, double line_w) {
      for (int k = 1; k < nn; ++k) {
        const double a = dt * line_w * c[fb + k * fs] / h;
        const int lo = static_cast<int>(nb + (k - 1) * ns);
        const int hi = static_cast<int>(nb + k * ns);
        trips.emplace_back(lo, lo, a);
        trips.emplace_back(hi, hi, a);
        trips.emplace_back(lo, hi, -a);
        trips.emplace_back(hi, lo, -a);
      }
    });
  }
  Eigen::SparseMatrix<double> m(static_cast<int>(g.size()), static_cast<int>(g.size()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

class StepProblem {
 public:
  StepProblem(const Field& u_k, double t_next, const ProblemSpec& spec, const SolverConfig& cfg)
      : params_(spec.operator_params(cfg.eps_reg)), dt_(cfg.dt), rhs_(u_k) {
    rhs_.axpy(cfg.dt, spec.h.sample(spec.grid, t_next));
  }

  Field residual(const Field& u) const {
    Field r = u;
    r.axpy(-dt_, plap_apply(u, params_));
    r -= rhs_;
    return r;
  }

  const OperatorParams& params() const { return params_; }
  const Field& rhs() const { return rhs_; }
  double dt() const { return dt_; }

 private:
  OperatorParams params_;
  double dt_;
  Field rhs_;
};

}  // namespace

double step_residual_norm(const Field& u_next, const Field& u_k, double t_next, const ProblemSpec& spec,
                          const SolverConfig& cfg) {
  return euclid(StepProblem(u_k, t_next, spec, cfg).residual(u_next));
}

Field step_parabolic(const Field& u_k, double t_k, const ProblemSpec& spec, const SolverConfig& cfg,
                     StepDiagnostics* diag) {
  cfg.validate();
  const double t_next = t_k + cfg.dt;
  const StepProblem problem(u_k, t_next, spec, cfg);
  const Grid& g = *spec.grid;
  const auto w = g.weights();

  StepDiagnostics local;
  StepDiagnostics& d = diag ? *diag : local;
  d = {};

  Field u = u_k;
  Field r = problem.residual(u);
  double rn = euclid(r);
  auto check_finite = [&](const char* where) {
    if (!std::isfinite(rn))
      throw SolverAbort(AbortReason::non_finite, t_next, std::string("non-finite residual during ") + where, rn,
                        d.newton_iterations + d.picard_sweeps);
  };
  check_finite("setup");

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  bool pattern_ready = false;
  auto solve = [&](const FluxField& coef, const Eigen::VectorXd& b) {
    const Eigen::SparseMatrix<double> m = assemble_system(g, coef, cfg.dt);
    if (!pattern_ready) {
      solver.analyzePattern(m);
      pattern_ready = true;
    }
    solver.factorize(m);
    if (solver.info() != Eigen::Success)
      throw SolverAbort(AbortReason::non_finite, t_next, "linear solve failed", rn, d.newton_iterations);
    return Eigen::VectorXd(solver.solve(b));
  };

  bool stalled = false;
  while (rn > cfg.newton_tol && d.newton_iterations < cfg.newton_max_iters) {
    FluxField coef = plap_jacobian_coefficients(u, problem.params());
    Eigen::VectorXd b(static_cast<Eigen::Index>(g.size()));
    for (std::size_t n = 0; n < g.size(); ++n) b[static_cast<Eigen::Index>(n)] = -w[n] * r[n];
    const Eigen::VectorXd delta = solve(coef, b);
    ++d.newton_iterations;

    double alpha = 1.0;
    Field trial = u;
    Field trial_r = r;
    double trial_rn = rn;
    for (int halving = 0; halving < 30; ++halving) {
      trial = u;
      for (std::size_t n = 0; n < g.size(); ++n) trial[n] += alpha * delta[static_cast<Eigen::Index>(n)];
      trial_r = problem.residual(trial);
      trial_rn = euclid(trial_r);
      if (!cfg.line_search || (std::isfinite(trial_rn) && trial_rn <= (1.0 - 1e-4 * alpha) * rn)) break;
      alpha *= 0.5;
    }
    if (cfg.line_search && !(trial_rn < rn)) {
      stalled = true;
      break;
    }
    u = std::move(trial);
    r = std::move(trial_r);
    rn = trial_rn;
    check_finite("Newton iteration");
  }

  if (rn > cfg.newton_tol) {
    // Frozen-coefficient sweeps: (W + dt * L(u_old)) u_new = W * rhs.
    const double p = problem.params().p;
    const double eps = problem.params().eps_reg;
    for (int sweep = 0; sweep < cfg.picard_sweeps && rn > cfg.newton_tol; ++sweep) {
      FluxField coef = FluxField::zeros(spec.grid);
      for (auto& c : coef.axes) {
        const FaceField s = face_gradient(u, c.axis());
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double s2 = s[i] * s[i] + eps * eps;
          c[i] = p == 2.0 ? 1.0 : (s2 > 0.0 ? std::pow(s2, 0.5 * (p - 2.0)) : 0.0);
        }
      }
      Eigen::VectorXd b(static_cast<Eigen::Index>(g.size()));
      for (std::size_t n = 0; n < g.size(); ++n) b[static_cast<Eigen::Index>(n)] = w[n] * problem.rhs()[n];
      const Eigen::VectorXd x = solve(coef, b);
      for (std::size_t n = 0; n < g.size(); ++n) u[n] = x[static_cast<Eigen::Index>(n)];
      r = problem.residual(u);
      rn = euclid(r);
      ++d.picard_sweeps;
      check_finite("Picard sweep");
    }
  }

  d.residual = rn;
  if (rn > cfg.newton_tol) {
    throw SolverAbort(AbortReason::newton_nonconvergence, t_next,
                      std::string(stalled ? "Newton stalled" : "Newton hit the iteration limit") +
                          " and Picard sweeps did not reach tolerance; residual " + std::to_string(rn),
                      rn, d.newton_iterations + d.picard_sweeps);
  }
  return u;
}

Trajectory solve_parabolic(const ProblemSpec& spec, const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (spec.mode != Mode::parabolic) throw std::invalid_argument("solve_parabolic needs a parabolic problem");
  const int n = step_count(spec.T, cfg.dt);

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n) + 1);
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(spec.u0);
  for (int k = 0; k < n; ++k) {
    const double t_k = k * cfg.dt;
    traj.states.push_back(step_parabolic(traj.states.back(), t_k, spec, cfg));
    traj.times.push_back((k + 1) * cfg.dt);
  }
  traj.dstates.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Field d = traj.states[k + 1] - traj.states[k];
    d *= 1.0 / cfg.dt;
    traj.dstates.push_back(std::move(d));
  }
  return traj;
}

}  // namespace plap
