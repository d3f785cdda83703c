#pragma once

// Run orchestration and artifacts. A run directory holds
//
//   config.txt      rendered configuration (reconstructs the run)
//   report.csv      t, then one column per report series
//   snapshots.csv   t, then one column per node (every `snapshot_stride` steps and the last)
//   manifest.json   config echo, versions, wall time, status, verdicts, scalars
//
// CSV floats carry 17 significant digits.

#include <optional>
#include <string>
#include <vector>

#include "plap/audit.hpp"
#include "plap/config.hpp"

namespace plap {

enum ExitCode : int { exit_ok = 0, exit_audit_failure = 1, exit_solver_abort = 2, exit_config_error = 3 };

struct AbortInfo {
  std::string reason;
  double time = 0.0;
  std::string detail;
  double suggested_dt = 0.0;
};

struct RunArtifact {
  std::string dir;
  std::string status;  // ok | audit_failure | solver_abort
  int exit_code = exit_ok;
  EstimateReport report;
  std::optional<AbortInfo> abort;
  double wall_time = 0.0;
};

/// Solves, audits and writes the artifact into cfg.output.dir.
RunArtifact run_scenario(const RunConfig& cfg);

/// Report without touching the filesystem (what run_scenario writes).
RunArtifact evaluate_scenario(const RunConfig& cfg, Trajectory* trajectory = nullptr);

struct AuditResult {
  bool reproduced = false;
  std::vector<std::string> mismatched;  // artifact files whose bytes differ
  int original_exit = exit_ok;
  int exit_code = exit_ok;
};

/// Re-runs the configuration stored in `dir` and compares the CSVs byte for byte.
AuditResult audit_artifact(const std::string& dir);

struct SeriesGap {
  std::string name;
  double max_gap = 0.0;
  double l2_gap = 0.0;  // trapezoid in time over the shared times
};

struct CompareReport {
  std::size_t shared_times = 0;
  std::vector<SeriesGap> gaps;  // report series, then "state" from the snapshots
  const SeriesGap* find(const std::string& name) const;
};

/// Gaps between two artifacts on the same grid. The finer time axis must
/// contain the coarser one; comparison happens at the shared times.
CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// `key=v1,v2,...`; values are split on ';' when present, else on top-level commas.
SweepAxis parse_vary(const std::string& text);

/// Runs the Cartesian product of the axes concurrently, each in its own
/// sub-directory of cfg.output.dir, and writes sweep.csv there.
std::vector<RunArtifact> sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, int threads = 0);

/// Worst exit code of a set of runs.
int combined_exit(const std::vector<RunArtifact>& runs);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace plap
