// plapkit: run, audit, compare and sweep p-Laplacian evolution scenarios.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "plap/errors.hpp"
#include "plap/runner.hpp"

using namespace plap;

namespace {

void print_artifact(const RunArtifact& a, bool quiet) {
  std::printf("%s: %s (exit %d, %.2fs)\n", a.dir.c_str(), a.status.c_str(), a.exit_code, a.wall_time);
  if (a.abort) std::printf("  abort: %s\n", a.abort->detail.c_str());
  if (quiet) return;
  for (const auto& [name, v] : a.report.verdicts)
    std::printf("  %-18s %s  margin %.6g  (%s)\n", name.c_str(), v.pass ? "PASS" : "FAIL", v.margin, v.detail.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretizations and estimate audits for p-Laplacian evolution equations"};
  app.require_subcommand(1);
  app.fallthrough();
  bool p2 = false;
  bool quiet = false;
  app.add_flag("--p2-diagnostic", p2, "allow p = 2 (linear diagnostic runs)");
  app.add_flag("-q,--quiet", quiet, "print only the status line");

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "solve a configuration and write its artifact");
  run->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "output directory (overrides output.dir)");

  std::string artifact;
  auto* audit = app.add_subcommand("audit", "re-run an artifact and compare its CSVs byte for byte");
  audit->add_option("artifact", artifact, "run directory")->required()->check(CLI::ExistingDirectory);

  std::string dir_a, dir_b;
  auto* compare = app.add_subcommand("compare", "per-series max and L2 gaps between two runs");
  compare->add_option("a", dir_a, "first run directory")->required()->check(CLI::ExistingDirectory);
  compare->add_option("b", dir_b, "second run directory")->required()->check(CLI::ExistingDirectory);

  std::vector<std::string> vary;
  int threads = 0;
  auto* sw = app.add_subcommand("sweep", "run the Cartesian product of --vary lists concurrently");
  sw->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  sw->add_option("--vary", vary, "key=v1,v2,... (repeatable; use ';' to separate values containing commas)")
      ->required();
  sw->add_option("-j,--threads", threads, "worker threads (default: hardware concurrency)");
  sw->add_option("-o,--out", out_dir, "sweep root directory (overrides output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config_error;
  }

  try {
    if (*run) {
      RunConfig cfg = load_config(config_path, {true, p2});
      if (!out_dir.empty()) cfg.output.dir = out_dir;
      const RunArtifact a = run_scenario(cfg);
      print_artifact(a, quiet);
      return a.exit_code;
    }
    if (*audit) {
      const AuditResult r = audit_artifact(artifact);
      std::printf("%s: %s\n", artifact.c_str(), r.reproduced ? "reproduced" : "NOT reproduced");
      for (const auto& f : r.mismatched) std::printf("  differs: %s\n", f.c_str());
      return r.exit_code;
    }
    if (*compare) {
      const CompareReport r = compare_runs(dir_a, dir_b);
      std::printf("series,max_gap,l2_gap\n");
      for (const SeriesGap& g : r.gaps) std::printf("%s,%.17g,%.17g\n", g.name.c_str(), g.max_gap, g.l2_gap);
      if (!quiet) std::fprintf(stderr, "%zu shared times\n", r.shared_times);
      return exit_ok;
    }
    if (*sw) {
      RunConfig cfg = load_config(config_path, {true, p2});
      if (!out_dir.empty()) cfg.output.dir = out_dir;
      std::vector<SweepAxis> axes;
      for (const auto& v : vary) axes.push_back(parse_vary(v));
      const auto runs = sweep(cfg, axes, threads);
      for (const RunArtifact& a : runs) print_artifact(a, true);
      return combined_exit(runs);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_config_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_config_error;
  }
  return exit_ok;
}
