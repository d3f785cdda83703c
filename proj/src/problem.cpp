#include "plap/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace plap {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::parabolic:
      return "parabolic";
    case Mode::hyperbolic:
      return "hyperbolic";
    case Mode::integro:
      return "integro";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  if (name == "parabolic") return Mode::parabolic;
  if (name == "hyperbolic") return Mode::hyperbolic;
  if (name == "integro") return Mode::integro;
  throw std::invalid_argument("unknown mode '" + name + "' (expected parabolic, hyperbolic or integro)");
}

Source Source::closed_form(Fn fn) {
  Source s;
  s.kind_ = Kind::closed_form;
  s.fn_ = std::move(fn);
  return s;
}

Source Source::samples(std::vector<double> times, std::vector<Field> fields) {
  if (times.empty() || times.size() != fields.size())
    throw std::invalid_argument("source samples need one field per sample time");
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end())
    throw std::invalid_argument("source sample times must be strictly increasing");
  Source s;
  s.kind_ = Kind::samples;
  s.times_ = std::move(times);
  s.fields_ = std::move(fields);
  return s;
}

Field Source::sample(const GridPtr& grid, double t) const {
  switch (kind_) {
    case Kind::zero:
      return Field(grid);
    case Kind::closed_form:
      return Field::from_function(grid, [&](std::span<const double> x) { return fn_(t, x); });
    case Kind::samples: {
      if (t <= times_.front()) return fields_.front();
      if (t >= times_.back()) return fields_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
      const double th = (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
      Field f = fields_[hi - 1];
      f *= (1.0 - th);
      f.axpy(th, fields_[hi]);
      return f;
    }
  }
  return Field(grid);
}

void ProblemSpec::validate() const {
  if (!grid) throw std::invalid_argument("problem has no grid");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive");
  operator_params(0.0).validate();
  if (u0.size() != grid->size()) throw std::invalid_argument("u0 does not conform to the grid");
  if (mode != Mode::parabolic && u1.size() != grid->size())
    throw std::invalid_argument("u1 does not conform to the grid");
  if (!u0.all_finite()) throw std::invalid_argument("u0 has non-finite entries");
  if (u1.size() > 0 && !u1.all_finite()) throw std::invalid_argument("u1 has non-finite entries");
}

OperatorParams ProblemSpec::operator_params(double eps_reg) const {
  OperatorParams params;
  params.p = p;
  params.eps_reg = eps_reg;
  params.p2_diagnostic = p2_diagnostic;
  return params;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
  if (newton_max_iters < 1) throw std::invalid_argument("newton_max_iters must be at least 1");
  if (!(eps_reg >= 0.0)) throw std::invalid_argument("eps_reg must be non-negative");
  if (picard_sweeps < 0) throw std::invalid_argument("picard_sweeps must be non-negative");
}

int step_count(double T, double dt) {
  const double n = std::round(T / dt);
  return std::max(1, static_cast<int>(n));
}

}  // namespace plap
