#pragma once

#include <stdexcept>
#include <string>

namespace plap {

// Precondition violations on public operations throw std::invalid_argument.

enum class AbortReason { newton_nonconvergence, non_finite, stability_guard, degenerate_linearization };

const char* to_string(AbortReason reason);

/// A time step could not be completed. Carries enough context to report the
/// failing time and, for the explicit schemes, a dt that would pass the guard.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(AbortReason reason, double time, const std::string& detail, double last_residual = 0.0,
              int iterations = 0, double suggested_dt = 0.0);

  AbortReason reason() const { return reason_; }
  double time() const { return time_; }
  double last_residual() const { return last_residual_; }
  int iterations() const { return iterations_; }
  double suggested_dt() const { return suggested_dt_; }

 private:
  AbortReason reason_;
  double time_;
  double last_residual_;
  int iterations_;
  double suggested_dt_;
};

/// Raised by plap_jacobian_vec when eps_reg = 0 and a face gradient is below
/// the floor, so the linearized coefficient is undefined.
class DegenerateLinearization : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message);

  const std::string& key() const { return key_; }
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string key_;
  int line_;
  std::string detail_;
};

}  // namespace plap
