#include "plap/errors.hpp"

namespace plap {

const char* to_string(AbortReason reason) {
  switch (reason) {
    case AbortReason::newton_nonconvergence:
      return "newton_nonconvergence";
    case AbortReason::non_finite:
      return "non_finite";
    case AbortReason::stability_guard:
      return "stability_guard";
    case AbortReason::degenerate_linearization:
      return "degenerate_linearization";
  }
  return "unknown";
}

SolverAbort::SolverAbort(AbortReason reason, double time, const std::string& detail, double last_residual,
                         int iterations, double suggested_dt)
    : std::runtime_error(std::string(to_string(reason)) + " at t=" + std::to_string(time) + ": " + detail),
      reason_(reason),
      time_(time),
      last_residual_(last_residual),
      iterations_(iterations),
      suggested_dt_(suggested_dt) {}

namespace {
std::string config_message(const std::string& key, int line, const std::string& message) {
  std::string out = "config error";
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  if (!key.empty()) out += " [" + key + "]";
  return out + ": " + message;
}
}  // namespace

ConfigError::ConfigError(const std::string& key, int line, const std::string& message)
    : std::runtime_error(config_message(key, line, message)), key_(key), line_(line), detail_(message) {}

}  // namespace plap
