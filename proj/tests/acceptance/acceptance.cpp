// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "plap/audit.hpp"
#include "plap/galerkin.hpp"
#include "plap/hyperbolic.hpp"
#include "plap/manufactured.hpp"
#include "plap/operator.hpp"
#include "plap/parabolic.hpp"
#include "test_support.hpp"

using namespace plap;
using namespace plap::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures and a short summary.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_++ < 3) fail_ += (fail_.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Outcome done() const {
    std::string d = notes_;
    if (!pass_) d += " | failed: " + fail_ + (failures_ > 3 ? " (+" + std::to_string(failures_ - 3) + " more)" : "");
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string fail_, notes_;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

ProblemSpec problem(Mode mode, const GridPtr& g, double p, double T, Field u0, Field u1 = {}, Source h = {}) {
  ProblemSpec s;
  s.mode = mode;
  s.p = p;
  s.p2_diagnostic = p == 2.0;
  s.T = T;
  s.grid = g;
  s.u0 = std::move(u0);
  s.u1 = u1.size() ? std::move(u1) : Field(g);
  s.h = std::move(h);
  return s;
}

ProblemSpec manufactured_problem(Mode mode, const GridPtr& g, double p, double T, const std::string& name) {
  ProblemSpec s = problem(mode, g, p, T, Field(g));
  apply_manufactured(s, name);
  return s;
}

Trajectory run(const ProblemSpec& s, double dt) {
  SolverConfig cfg;
  cfg.dt = dt;
  return s.mode == Mode::parabolic ? solve_parabolic(s, cfg) : solve_hyperbolic(s, cfg);
}

Field cosine(const GridPtr& g) {
  return Field::from_function(g, [](std::span<const double> x) { return std::cos(pi * x[0]); });
}

double l1(const Field& f) {
  Field a = f;
  for (double& v : a.values()) v = std::abs(v);
  return integrate(a);
}

// discrete L2(Q): node quadrature in space, trapezoid in time
double l2q_gap(const Trajectory& a, const Trajectory& b) {
  const double dt = a.dt();
  double s = 0.0;
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    const Field d = a.states[k] - b.states[k];
    const double w = (k == 0 || k + 1 == a.states.size()) ? 0.5 * dt : dt;
    s += w * inner(d, d);
  }
  return std::sqrt(s);
}

Field zero_mean(Field f) {
  const double m = integrate(f) / f.grid().volume();
  for (double& v : f.values()) v -= m;
  return f;
}

// 1. Conservation
Outcome conservation() {
  Tally t;
  std::mt19937_64 rng(2024);
  double worst_par = 0.0, worst_wave = 0.0;
  for (const GridPtr& g : {unit_grid_1d(65), unit_grid_2d(33)})
    for (double p : {2.5, 3.0, 4.0}) {
      const Field u0 = random_smooth_field(g, rng);
      const Trajectory tr = run(problem(Mode::parabolic, g, p, 0.05, u0), 1e-3);
      const double scale = std::max(std::abs(integrate(u0)), l1(u0));
      for (std::size_t k = 1; k < tr.states.size(); ++k) {
        const double rel = std::abs(integrate(tr.states[k]) - integrate(tr.states[k - 1])) / scale;
        worst_par = std::max(worst_par, rel);
        t.expect(rel <= 1e-10, "parabolic mass drift " + fmt(rel));
      }

      const Source h = Source::closed_form([](double s, std::span<const double> x) {
        return std::cos(3.0 * s) + x[0] * x[0] - 0.5 * x[0];
      });
      const ProblemSpec w = problem(Mode::hyperbolic, g, p, 0.2, u0, random_smooth_field(g, rng), h);
      const Trajectory wt = run(w, std::min(1e-3, 0.5 * stable_dt(u0, p, 1e-8)));
      const double dt = wt.dt();
      for (std::size_t k = 1; k + 1 < wt.states.size(); ++k) {
        const double d2 = integrate(wt.states[k + 1]) - 2.0 * integrate(wt.states[k]) + integrate(wt.states[k - 1]);
        const double err = std::abs(d2 - dt * dt * integrate(h.sample(g, wt.times[k])));
        worst_wave = std::max(worst_wave, err);
        t.expect(err <= 1e-9, "second-difference identity off by " + fmt(err));
      }
    }
  t.note("max relative mass change per step " + fmt(worst_par));
  t.note("max second-difference defect " + fmt(worst_wave));
  return t.done();
}

// 2. p = 2 reductions
Outcome p2_reductions() {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> heat, wave, hs;
  for (int n : {17, 33, 65}) {
    const GridPtr g = unit_grid_1d(n);
    const double h = g->spacing(0);
    hs.push_back(h);
    const Field c = cosine(g);

    const double T = 0.1;
    const Trajectory ht = run(problem(Mode::parabolic, g, 2.0, T, c), 0.1 * h * h);
    heat.push_back(max_abs_diff(ht.states.back(), std::exp(-pi * pi * ht.times.back()) * c));

    const Trajectory wt = run(problem(Mode::hyperbolic, g, 2.0, 1.0, c), 0.25 * h);
    double err = 0.0;
    for (std::size_t k = 0; k < wt.states.size(); ++k)
      err = std::max(err, max_abs_diff(wt.states[k], std::cos(pi * wt.times[k]) * c));
    wave.push_back(err);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string ho, wo;
  for (int i = 0; i < 2; ++i) {
    const double oh = std::log(heat[i] / heat[i + 1]) / std::log(hs[i] / hs[i + 1]);
    const double ow = std::log(wave[i] / wave[i + 1]) / std::log(hs[i] / hs[i + 1]);
    ho += (i ? "/" : "") + fmt(oh);
    wo += (i ? "/" : "") + fmt(ow);
    t.expect(oh >= 1.9, "heat order " + fmt(oh));
    t.expect(ow >= 1.9, "wave order " + fmt(ow));
  }
  t.expect(secs < 30.0, "runtime " + fmt(secs) + " s");
  t.note("heat orders " + ho);
  t.note("wave orders " + wo);
  t.note(fmt(secs, 2) + " s");
  return t.done();
}

// 3. Wave / integro equivalence
Outcome equivalence() {
  Tally t;
  const GridPtr g = unit_grid_1d(65);
  std::vector<double> gaps;
  for (double dt : {4e-4, 2e-4, 1e-4}) {
    const Trajectory w = run(manufactured_problem(Mode::hyperbolic, g, 3.0, 1.0, "cos_oscillation"), dt);
    const Trajectory i = run(manufactured_problem(Mode::integro, g, 3.0, 1.0, "cos_oscillation"), dt);
    gaps.push_back(l2q_gap(w, i));
  }
  std::string orders;
  for (int k = 0; k < 2; ++k) {
    const double o = std::log2(gaps[k] / gaps[k + 1]);
    orders += (k ? "/" : "") + fmt(o, 7);
    t.expect(gaps[k + 1] < gaps[k], "gap not decreasing");
    t.expect(o >= 1.0, "order " + fmt(o, 7) + " < 1");
  }
  t.note("cos_oscillation p=3, 65 nodes, T=1");
  t.note("gaps " + fmt(gaps[0]) + " " + fmt(gaps[1]) + " " + fmt(gaps[2]));
  t.note("orders " + orders);
  return t.done();
}

// 4. Pairing identity
Outcome pairing() {
  Tally t;
  std::vector<double> gaps;
  for (int n : {17, 33, 65, 129}) {
    const GridPtr g = unit_grid_1d(n);
    const ProblemSpec s = manufactured_problem(Mode::parabolic, g, 3.0, 0.5, "cos_decay");
    gaps.push_back(parabolic_pairing(run(s, 0.2 / (n - 1)), s).relative_gap);
  }
  std::string orders;
  for (int k = 0; k + 1 < static_cast<int>(gaps.size()); ++k) {
    const double o = std::log2(gaps[k] / gaps[k + 1]);
    orders += (k ? "/" : "") + fmt(o);
    t.expect(o >= 1.0, "order " + fmt(o));
  }
  t.note("cos_decay p=3, dt = 0.2 h, relative gaps " + fmt(gaps.front()) + " .. " + fmt(gaps.back()));
  t.note("orders " + orders);
  return t.done();
}

// 5. Dissipation
Outcome dissipation() {
  Tally t;
  std::mt19937_64 rng(5);
  int steps = 0;
  for (const GridPtr& g : {unit_grid_1d(65), unit_grid_2d(33)})
    for (double p : {2.5, 3.0, 4.0})
      for (double dt : {1e-3, 1e-2, 1e-1, 1.0}) {
        const Field u0 = random_smooth_field(g, rng);
        const Trajectory tr = run(problem(Mode::parabolic, g, p, std::max(0.05, 4 * dt), u0), dt);
        for (std::size_t k = 1; k < tr.states.size(); ++k, ++steps) {
          const double prev = gradient_lp_pow(tr.states[k - 1], p) / p;
          const double cur = gradient_lp_pow(tr.states[k], p) / p;
          t.expect(cur <= prev, "increase " + fmt(cur - prev) + " at p=" + fmt(p) + " dt=" + fmt(dt));
        }
      }
  t.note(std::to_string(steps) + " accepted steps, p in {2.5, 3, 4}, dt in {1e-3 .. 1}");
  return t.done();
}

// 6. Gronwall boundedness
Outcome gronwall() {
  Tally t;
  int runs = 0;
  double min_slack = 1e300;
  for (const GridPtr& g : {unit_grid_1d(65), unit_grid_2d(33)})
    for (const std::string& name : manufactured_names())
      for (Mode mode : {Mode::hyperbolic, Mode::integro})
        for (double p : {2.5, 3.0, 4.0}) {
          const ProblemSpec s = manufactured_problem(mode, g, p, 1.0, name);
          const Trajectory tr = run(s, 1e-3);
          const EnergyAuditReport e = hyperbolic_energy_audit(tr, s);
          const GronwallReport gr = gronwall_bound(tr, s);
          const std::string tag = name + "/" + to_string(mode) + "/p=" + fmt(p) + "/" + std::to_string(g->dim()) + "D";
          t.expect(e.all_steps_hold, tag + " per-step inequality");
          t.expect(gr.holds, tag + " sup " + fmt(gr.sup_lhs) + " > C " + fmt(gr.constant));
          min_slack = std::min(min_slack, gr.constant / std::max(gr.sup_lhs, 1e-300));
          ++runs;
        }
  t.note(std::to_string(runs) + " manufactured runs");
  t.note("smallest C / sup ratio " + fmt(min_slack));
  return t.done();
}

// 7. Solution-class witnesses
Outcome witnesses() {
  Tally t;
  const GridPtr g = unit_grid_1d(65);
  const ProblemSpec s = manufactured_problem(Mode::hyperbolic, g, 3.0, 1.0, "cos_oscillation");
  const EstimateReport a = ds_class_report(run(s, 2e-3), s);
  const EstimateReport b = ds_class_report(run(s, 1e-3), s);
  t.expect(a.verdicts.at("finite").pass && b.verdicts.at("finite").pass, "non-finite witness");
  double worst = 0.0;
  std::string worst_key;
  for (const auto& [key, va] : a.scalars) {
    if (key == "utt_residual_avg") continue;
    const double vb = b.scalars.at(key);
    const double rel = rel_diff(va, vb);
    if (rel > worst) {
      worst = rel;
      worst_key = key;
    }
    t.expect(rel < 0.1, key + " changed by " + fmt(100 * rel) + "%");
  }
  const double ra = a.scalars.at("utt_residual_avg"), rb = b.scalars.at("utt_residual_avg");
  const double order = std::log2(ra / rb);
  t.expect(order >= 1.0, "residual order " + fmt(order));
  t.note("largest change " + fmt(100 * worst, 3) + "% (" + worst_key + ")");
  t.note("residual " + fmt(ra) + " -> " + fmt(rb) + ", order " + fmt(order));
  return t.done();
}

// 8. Interpolation inequality
Outcome interpolation() {
  Tally t;
  const double th1 = ngs_theta(wave_ngs_exponents(2, 4.0));
  const double th2 = ngs_theta(wave_ngs_exponents(1, 3.0));
  t.expect(std::abs(th1 - 1.0 / 3.0) < 1e-14, "theta(2,4) = " + fmt(th1, 17));
  t.expect(std::abs(th2 - 1.0 / 7.0) < 1e-14, "theta(1,3) = " + fmt(th2, 17));
  int failures = 0, checked = 0;
  for (const auto& [g, p] : std::vector<std::pair<GridPtr, double>>{{unit_grid_1d(129), 3.0}, {unit_grid_2d(65), 4.0}}) {
    const NgsExponents e = wave_ngs_exponents(g->dim(), p);
    const double c0 = ngs_calibrate(g, e, 0);
    const double c1 = ngs_calibrate(g, e, 1);
    t.expect(std::abs(c1 - c0) <= 0.2 * c0, "calibration unstable");
    std::mt19937_64 rng(1000 + g->dim());
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const NgsReport r = ngs_check(zero_mean(random_smooth_field(g, rng, 6)), e, c0);
      worst = std::max(worst, r.ratio);
      ++checked;
      if (!r.holds) ++failures;
    }
    t.note(std::to_string(g->dim()) + "D p=" + fmt(p) + ": C = " + fmt(c0) + " (other set " + fmt(c1) +
           "), worst ratio " + fmt(worst));
  }
  t.expect(failures == 0, std::to_string(failures) + " of " + std::to_string(checked) + " fields violate");
  t.note(std::to_string(failures) + "/" + std::to_string(checked) + " failures");
  return t.done();
}

// 9. Galerkin scheme
Outcome galerkin() {
  Tally t;
  // p = 2: modes decouple
  {
    const GridPtr g = unit_grid_1d(129);
    const double h = g->spacing(0);
    std::mt19937_64 rng(83);
    const ProblemSpec s = problem(Mode::parabolic, g, 2.0, 0.05, random_smooth_field(g, rng, 5),
                                  Field(g), Source::closed_form([](double tt, std::span<const double> x) {
                                    return std::exp(tt) * x[0] * x[0];
                                  }));
    SolverConfig cfg;
    cfg.dt = 1e-2;
    const BasisSet b = neumann_basis(8, g);
    const GalerkinRun r = solve_galerkin(s, cfg, b);
    double worst = 0.0;
    std::vector<double> c = project(s.u0, b);
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
      const double tn = r.trajectory.times[k + 1];
      const std::vector<double> hk = project(s.h.sample(g, tn), b);
      for (int j = 0; j < b.m; ++j) {
        const int kk = b.modes[j][0];
        const double lam = 4.0 / (h * h) * std::pow(std::sin(kk * pi * h / 2), 2);
        c[j] = (c[j] + cfg.dt * hk[j]) / (1.0 + cfg.dt * lam);
        worst = std::max(worst, std::abs(r.steps[k].coeffs[j] - c[j]));
      }
    }
    t.expect(worst <= 1e-10, "p=2 closed form off by " + fmt(worst));
    t.note("p=2 max coefficient error " + fmt(worst));
  }
  // p = 3: convergence to the finite-difference trajectory, certificates
  {
    const GridPtr g = unit_grid_1d(65);
    const Field u0 = Field::from_function(g, [](std::span<const double> x) {
      return std::cos(pi * x[0]) + 0.5 * std::cos(2 * pi * x[0]) + 0.25 * x[0] * x[0];
    });
    const ProblemSpec s = problem(Mode::parabolic, g, 3.0, 0.1, u0, Field(g),
                                  Source::closed_form([](double tt, std::span<const double> x) {
                                    return std::cos(tt) * std::cos(3 * pi * x[0]);
                                  }));
    SolverConfig cfg;
    cfg.dt = 1e-2;
    const Trajectory fd = solve_parabolic(s, cfg);
    std::vector<double> gaps;
    int certs = 0;
    for (int m : {4, 8, 16}) {
      const GalerkinRun r = solve_galerkin(s, cfg, neumann_basis(m, g));
      gaps.push_back(l2q_gap(fd, r.trajectory));
      for (const GalerkinState& st : r.steps) {
        t.expect(st.certificate.all_passed(), "certificate failed at m=" + std::to_string(m));
        certs += static_cast<int>(st.certificate.radii.size());
      }
    }
    t.expect(gaps[1] < gaps[0] && gaps[2] < gaps[1], "gap not decreasing");
    t.note("p=3 gaps " + fmt(gaps[0]) + " " + fmt(gaps[1]) + " " + fmt(gaps[2]));
    t.note(std::to_string(certs) + " certified radii");
  }
  return t.done();
}

// 10. Operator properties
Outcome operator_properties() {
  Tally t;
  std::mt19937_64 rng(10);
  int pairs = 0;
  double worst_sym = 0.0, worst_fd = 0.0, max_pairing = -1e300;
  const double delta = 1e-6;
  for (const GridPtr& g : {unit_grid_1d(65), unit_grid_2d(17)})
    for (double p : {2.5, 3.0, 4.0, 5.0})
      for (int trial = 0; trial < 13 && pairs < 100; ++trial, ++pairs) {
        OperatorParams o;
        o.p = p;
        o.eps_reg = 1e-8;
        const bool rough = trial % 2 == 1;
        const Field u = rough ? random_field(g, rng) : random_smooth_field(g, rng);
        const Field w = rough ? random_field(g, rng) : random_smooth_field(g, rng);

        OperatorParams exact = o;
        exact.eps_reg = 0.0;
        const double pairing = inner(plap_apply(u, exact) - plap_apply(w, exact), u - w);
        max_pairing = std::max(max_pairing, pairing);
        t.expect(pairing <= 0.0, "monotonicity " + fmt(pairing));

        const Field v = w - u;
        const Field jv = plap_jacobian_vec(u, v, o);
        const double a = inner(jv, w);
        const double b = inner(plap_jacobian_vec(u, w, o), v);
        const double sym = rel_diff(a, b);
        worst_sym = std::max(worst_sym, sym);
        t.expect(sym <= 1e-10, "symmetry " + fmt(sym));

        if (!rough) {
          Field up = u;
          up.axpy(delta, v);
          Field fd = plap_apply(up, o) - plap_apply(u, o);
          fd *= 1.0 / delta;
          Field diff = fd - jv;
          const double rel = std::sqrt(inner(diff, diff) / inner(jv, jv));
          worst_fd = std::max(worst_fd, rel);
          t.expect(rel <= 100.0 * delta, "finite-difference mismatch " + fmt(rel));
        }
      }
  t.expect(pairs == 100, "ran " + std::to_string(pairs) + " pairs");
  t.note(std::to_string(pairs) + " pairs");
  t.note("max pairing " + fmt(max_pairing));
  t.note("symmetry " + fmt(worst_sym));
  t.note("FD relative " + fmt(worst_fd));
  return t.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 conservation", conservation},
      {"2 p=2 analytic reductions", p2_reductions},
      {"3 wave/integro equivalence", equivalence},
      {"4 parabolic pairing identity", pairing},
      {"5 dissipation", dissipation},
      {"6 Gronwall boundedness", gronwall},
      {"7 solution-class witnesses", witnesses},
      {"8 interpolation inequality", interpolation},
      {"9 Galerkin scheme", galerkin},
      {"10 operator properties", operator_properties},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("[%s] %-30s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
