#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "plap/grid.hpp"
#include "plap/operator.hpp"

namespace plap {

enum class Mode { parabolic, hyperbolic, integro };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

/// Time-dependent source h(t, x): a closed-form callable, per-step samples
/// (linear in time between sample times), or identically zero.
class Source {
 public:
  using Fn = std::function<double(double t, std::span<const double> x)>;

  Source() = default;
  static Source zero() { return {}; }
  static Source closed_form(Fn fn);
  static Source samples(std::vector<double> times, std::vector<Field> fields);

  bool is_zero() const { return kind_ == Kind::zero; }
  Field sample(const GridPtr& grid, double t) const;

 private:
  enum class Kind { zero, closed_form, samples };
  Kind kind_ = Kind::zero;
  Fn fn_;
  std::vector<double> times_;
  std::vector<Field> fields_;
};

struct ProblemSpec {
  Mode mode = Mode::parabolic;
  double p = 3.0;
  double T = 1.0;
  GridPtr grid;
  Field u0;
  Field u1;  // initial velocity; hyperbolic and integro modes
  Source h;
  bool p2_diagnostic = false;

  void validate() const;
  OperatorParams operator_params(double eps_reg) const;
};

struct SolverConfig {
  double dt = 1e-3;
  double newton_tol = 1e-10;
  int newton_max_iters = 50;
  double eps_reg = 1e-8;
  bool line_search = true;
  int picard_sweeps = 20;
  std::uint64_t seed = 0x5eed;

  void validate() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Number of steps covering [0, T]; the last time is within dt/2 of T.
int step_count(double T, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<Field> dstates;              // (states[k+1] - states[k]) / dt
  std::vector<FluxField> accumulated_flux;  // running time integral of the flux (wave modes)

  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
};

}  // namespace plap
