#pragma once

// Run configuration: a flat `key = value` document with dotted namespaces.
//
//   mode = hyperbolic
//   p = 3
//   T = 0.5
//   grid.nodes = 65          # one value per axis, or one for all
//   u0 = manufactured(cos_oscillation)
//   h = exp(-t) * cos(pi*x1)
//   solver.dt = 1e-3
//
// Data fields (u0, u1, h) take a preset call or an expression over t, x1..x3.
// Presets: constant(c), cosine_mode(k1[,k2,k3]), gaussian_bump(center, width),
// manufactured(name).

#include <map>
#include <string>
#include <vector>

#include "plap/audit.hpp"
#include "plap/problem.hpp"

namespace plap {

enum class Method { finite_difference, galerkin };

const char* to_string(Method method);

struct GridConfig {
  int dim = 1;
  std::vector<int> nodes{65};  // single entries are broadcast to every axis
  std::vector<double> low{0.0};
  std::vector<double> high{1.0};

  void normalize();
  GridPtr build() const;
  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct AuditConfig {
  bool estimates = true;             // parabolic_report / ds_class_report
  bool interpolation = false;        // interpolation check on the final state (wave modes)
  std::vector<PNormParams> pnorms;   // empty: the default pseudo-norm for p
  friend bool operator==(const AuditConfig&, const AuditConfig&) = default;
};

struct OutputConfig {
  std::string dir = "run";
  int snapshot_stride = 10;  // 0 disables snapshots
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  std::string label = "run";
  Mode mode = Mode::parabolic;
  Method method = Method::finite_difference;
  double p = 3.0;
  double T = 0.1;
  bool p2_diagnostic = false;
  GridConfig grid;
  std::string u0 = "0";
  std::string u1 = "0";
  std::string h = "0";
  SolverConfig solver;
  int galerkin_modes = 8;
  AuditConfig audit;
  OutputConfig output;

  /// Throws ConfigError naming the failing key.
  void validate() const;
  ProblemSpec build_problem() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParseOptions {
  bool strict = true;          // reject unknown keys
  bool p2_diagnostic = false;  // command-line override
};

/// Throws ConfigError with line and key on malformed input or invariant violations.
RunConfig parse_config(const std::string& text, const ParseOptions& options = {});
RunConfig load_config(const std::string& path, const ParseOptions& options = {});
std::string render_config(const RunConfig& cfg);

/// Applies one `key=value` assignment (as in the document) to cfg.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

/// Field or source described by a data string. `name` is the config key; for
/// u1 a manufactured preset yields the exact velocity.
Field data_field(const std::string& text, const GridPtr& grid, double p, const std::string& name = "u0");
Source data_source(const std::string& text, const GridPtr& grid, double p, const std::string& name = "h");

}  // namespace plap
