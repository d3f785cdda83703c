#include "plap/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <Eigen/Core>

#include "json.hpp"
#include "plap/errors.hpp"
#include "plap/galerkin.hpp"
#include "plap/hyperbolic.hpp"
#include "plap/parabolic.hpp"

#ifndef PLAP_VERSION
#define PLAP_VERSION "0.0.0"
#endif

namespace plap {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string report_csv(const EstimateReport& r) {
  std::string out = "t";
  for (const auto& kv : r.series) out += "," + kv.first;
  out += "\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    out += g17(r.times[k]);
    for (const auto& kv : r.series) out += "," + (k < kv.second.size() ? g17(kv.second[k]) : std::string("nan"));
    out += "\n";
  }
  return out;
}

std::string snapshots_csv(const Trajectory& tr, int stride) {
  if (tr.states.empty()) return "t\n";
  std::string out = "t";
  for (std::size_t i = 0; i < tr.states[0].size(); ++i) out += ",u" + std::to_string(i);
  out += "\n";
  const std::size_t last = tr.states.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    if (k % static_cast<std::size_t>(stride) != 0 && k != last) continue;
    out += g17(tr.times[k]);
    for (double v : tr.states[k].values()) out += "," + g17(v);
    out += "\n";
  }
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Field zero_mean(Field f) {
  const double m = integrate(f) / f.grid().volume();
  for (double& v : f.values()) v -= m;
  return f;
}

EstimateReport basic_report(const Trajectory& tr, double p) {
  EstimateReport r;
  r.times = tr.times;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    r.series["mass"].push_back(integrate(tr.states[k]));
    r.series["grad_lp"].push_back(gradient_lp_pow(tr.states[k], p));
  }
  return r;
}

json manifest_json(const RunConfig& cfg, const RunArtifact& a, std::size_t steps, bool snapshots) {
  json m;
  m["tool"] = "plapkit";
  m["version"] = PLAP_VERSION;
  m["versions"] = {{"plapkit", PLAP_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  m["label"] = cfg.label;
  m["config"] = render_config(cfg);
  m["grid"] = {{"dim", cfg.grid.dim}, {"nodes", cfg.grid.nodes}, {"low", cfg.grid.low}, {"high", cfg.grid.high}};
  m["mode"] = to_string(cfg.mode);
  m["method"] = to_string(cfg.method);
  m["status"] = a.status;
  m["exit_code"] = a.exit_code;
  m["wall_time_s"] = a.wall_time;
  m["steps"] = steps;
  json files = json::array({"config.txt", "manifest.json"});
  if (!a.abort) {
    files.push_back("report.csv");
    if (snapshots) files.push_back("snapshots.csv");
  }
  m["files"] = files;
  if (a.abort) {
    m["abort"] = {{"reason", a.abort->reason},
                  {"time", a.abort->time},
                  {"detail", a.abort->detail},
                  {"suggested_dt", a.abort->suggested_dt}};
  }
  json verdicts = json::object();
  for (const auto& [name, v] : a.report.verdicts)
    verdicts[name] = {{"pass", v.pass}, {"margin", finite_or_null(v.margin)}, {"detail", v.detail}};
  m["verdicts"] = verdicts;
  json scalars = json::object();
  for (const auto& [name, v] : a.report.scalars) scalars[name] = finite_or_null(v);
  m["scalars"] = scalars;
  return m;
}

json load_manifest(const fs::path& dir) {
  try {
    return json::parse(slurp(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed manifest in '" + dir.string() + "': " + e.what());
  }
}

}  // namespace

RunArtifact evaluate_scenario(const RunConfig& cfg, Trajectory* out_traj) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunArtifact a;
  a.dir = cfg.output.dir;
  const ProblemSpec spec = cfg.build_problem();
  Trajectory tr;
  try {
    if (cfg.method == Method::galerkin) {
      const BasisSet basis = neumann_basis(cfg.galerkin_modes, spec.grid);
      GalerkinRun run = solve_galerkin(spec, cfg.solver, basis);
      tr = std::move(run.trajectory);
      a.report = cfg.audit.estimates ? parabolic_report(tr, spec, cfg.audit.pnorms) : basic_report(tr, spec.p);
      auto& res = a.report.series["galerkin_residual"];
      auto& cert = a.report.series["certificate_min_pairing"];
      res.push_back(0.0);
      cert.push_back(0.0);
      bool certified = true;
      double worst = std::numeric_limits<double>::infinity();
      for (const GalerkinState& st : run.steps) {
        res.push_back(st.residual_norm);
        double m = std::numeric_limits<double>::infinity();
        for (double v : st.certificate.min_pairing) m = std::min(m, v);
        cert.push_back(m);
        worst = std::min(worst, m);
        certified = certified && st.certificate.all_passed();
      }
      a.report.verdicts["acute_angle"] = {certified, std::isfinite(worst) ? worst : 0.0,
                                          "<R(c), c> >= 0 on every sampled sphere"};
    } else if (cfg.mode == Mode::parabolic) {
      tr = solve_parabolic(spec, cfg.solver);
      a.report = cfg.audit.estimates ? parabolic_report(tr, spec, cfg.audit.pnorms) : basic_report(tr, spec.p);
    } else {
      tr = solve_hyperbolic(spec, cfg.solver);
      a.report = cfg.audit.estimates ? ds_class_report(tr, spec, cfg.audit.pnorms) : basic_report(tr, spec.p);
    }
    if (cfg.audit.interpolation) {
      const NgsExponents e = wave_ngs_exponents(spec.grid->dim(), spec.p);
      const NgsReport n = ngs_check(zero_mean(tr.states.back()), e);
      a.report.scalars["ngs_theta"] = n.theta;
      a.report.scalars["ngs_constant"] = n.constant;
      a.report.scalars["ngs_ratio"] = n.ratio;
      a.report.verdicts["interpolation"] = {n.holds, n.rhs - n.lhs, "final state, mean removed"};
    }
    a.status = a.report.all_pass() ? "ok" : "audit_failure";
    a.exit_code = a.report.all_pass() ? exit_ok : exit_audit_failure;
  } catch (const SolverAbort& e) {
    a.abort = AbortInfo{to_string(e.reason()), e.time(), e.what(), e.suggested_dt()};
    a.status = "solver_abort";
    a.exit_code = exit_solver_abort;
  }
  a.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out_traj) *out_traj = std::move(tr);
  return a;
}

RunArtifact run_scenario(const RunConfig& cfg) {
  Trajectory tr;
  RunArtifact a = evaluate_scenario(cfg, &tr);
  const fs::path dir = cfg.output.dir;
  fs::create_directories(dir);
  for (const char* stale : {"report.csv", "snapshots.csv"}) fs::remove(dir / stale);
  write_file(dir / "config.txt", render_config(cfg));
  const bool snapshots = cfg.output.snapshot_stride > 0;
  if (!a.abort) {
    write_file(dir / "report.csv", report_csv(a.report));
    if (snapshots) write_file(dir / "snapshots.csv", snapshots_csv(tr, cfg.output.snapshot_stride));
  }
  write_file(dir / "manifest.json", manifest_json(cfg, a, tr.steps(), snapshots).dump(2) + "\n");
  return a;
}

AuditResult audit_artifact(const std::string& dir_name) {
  const fs::path dir = dir_name;
  const json m = load_manifest(dir);
  RunConfig cfg = parse_config(m.at("config").get<std::string>());
  const fs::path tmp = dir / ".audit";
  fs::remove_all(tmp);
  cfg.output.dir = tmp.string();
  const RunArtifact rerun = run_scenario(cfg);

  AuditResult r;
  r.original_exit = m.at("exit_code").get<int>();
  r.reproduced = rerun.exit_code == r.original_exit;
  if (!r.reproduced) r.mismatched.push_back("manifest.json:exit_code");
  for (const char* f : {"report.csv", "snapshots.csv"}) {
    const bool a = fs::exists(dir / f), b = fs::exists(tmp / f);
    if (a != b || (a && slurp(dir / f) != slurp(tmp / f))) {
      r.reproduced = false;
      r.mismatched.push_back(f);
    }
  }
  if (m.contains("abort") && rerun.abort) {
    if (m["abort"].at("time").get<double>() != rerun.abort->time ||
        m["abort"].at("reason").get<std::string>() != rerun.abort->reason) {
      r.reproduced = false;
      r.mismatched.push_back("manifest.json:abort");
    }
  }
  fs::remove_all(tmp);
  r.exit_code = r.reproduced ? r.original_exit : exit_audit_failure;
  return r;
}

CsvTable read_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV '" + path + "'");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream rs(line);
    for (std::string cell; std::getline(rs, cell, ',');) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != t.header.size()) throw std::runtime_error("ragged row in '" + path + "'");
    t.rows.push_back(std::move(row));
  }
  return t;
}

const SeriesGap* CompareReport::find(const std::string& name) const {
  for (const SeriesGap& g : gaps)
    if (g.name == name) return &g;
  return nullptr;
}

namespace {

// Index pairs (i in a, j in b) at shared times; a must be the coarser axis.
std::vector<std::pair<std::size_t, std::size_t>> shared_rows(const CsvTable& a, const CsvTable& b, double tol) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double t = a.rows[i][0];
    while (j < b.rows.size() && b.rows[j][0] < t - tol) ++j;
    if (j == b.rows.size() || std::abs(b.rows[j][0] - t) > tol)
      throw std::invalid_argument("incompatible time axes: t = " + g17(t) + " is missing from the finer run");
    out.emplace_back(i, j);
  }
  return out;
}

double time_tol(const CsvTable& t) {
  if (t.rows.size() < 2) return 1e-12;
  return 1e-6 * std::abs(t.rows[1][0] - t.rows[0][0]);
}

// trapezoid weights over the given times
std::vector<double> trap_weights(const std::vector<double>& times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double h = times[k + 1] - times[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  if (times.size() == 1) w[0] = 1.0;
  return w;
}

}  // namespace

CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b) {
  const json ma = load_manifest(dir_a), mb = load_manifest(dir_b);
  if (ma.at("grid") != mb.at("grid"))
    throw std::invalid_argument("incompatible grids: " + ma.at("grid").dump() + " vs " + mb.at("grid").dump());
  if (!fs::exists(fs::path(dir_a) / "report.csv") || !fs::exists(fs::path(dir_b) / "report.csv"))
    throw std::invalid_argument("both runs need a report.csv (did one abort?)");

  CsvTable a = read_csv((fs::path(dir_a) / "report.csv").string());
  CsvTable b = read_csv((fs::path(dir_b) / "report.csv").string());
  if (a.rows.size() > b.rows.size()) std::swap(a, b);
  const auto pairs = shared_rows(a, b, time_tol(b));

  std::vector<double> times;
  for (const auto& [i, j] : pairs) times.push_back(a.rows[i][0]);
  const std::vector<double> w = trap_weights(times);

  CompareReport r;
  r.shared_times = pairs.size();
  for (std::size_t ca = 1; ca < a.header.size(); ++ca) {
    const auto it = std::find(b.header.begin(), b.header.end(), a.header[ca]);
    if (it == b.header.end()) continue;
    const std::size_t cb = static_cast<std::size_t>(it - b.header.begin());
    SeriesGap g{a.header[ca]};
    double s = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double d = std::abs(a.rows[pairs[k].first][ca] - b.rows[pairs[k].second][cb]);
      g.max_gap = std::max(g.max_gap, d);
      s += w[k] * d * d;
    }
    g.l2_gap = std::sqrt(s);
    r.gaps.push_back(g);
  }

  const fs::path sa = fs::path(dir_a) / "snapshots.csv", sb = fs::path(dir_b) / "snapshots.csv";
  if (fs::exists(sa) && fs::exists(sb)) {
    CsvTable x = read_csv(sa.string());
    CsvTable y = read_csv(sb.string());
    if (x.rows.size() > y.rows.size()) std::swap(x, y);
    // snapshot strides need not nest; keep the times present in both
    std::vector<std::pair<std::size_t, std::size_t>> sp;
    const double tol = std::max(time_tol(a), time_tol(b));
    for (std::size_t i = 0, j = 0; i < x.rows.size(); ++i) {
      while (j < y.rows.size() && y.rows[j][0] < x.rows[i][0] - tol) ++j;
      if (j < y.rows.size() && std::abs(y.rows[j][0] - x.rows[i][0]) <= tol) sp.emplace_back(i, j);
    }
    if (!sp.empty()) {
      RunConfig cfg = parse_config(ma.at("config").get<std::string>());
      const GridPtr grid = cfg.grid.build();
      std::vector<double> st;
      for (const auto& [i, j] : sp) st.push_back(x.rows[i][0]);
      const std::vector<double> sw = trap_weights(st);
      SeriesGap g{"state"};
      double s = 0.0;
      for (std::size_t k = 0; k < sp.size(); ++k) {
        Field d(grid);
        for (std::size_t n = 0; n < d.size(); ++n) {
          d.values()[n] = x.rows[sp[k].first][n + 1] - y.rows[sp[k].second][n + 1];
          g.max_gap = std::max(g.max_gap, std::abs(d[n]));
        }
        s += sw[k] * inner(d, d);
      }
      g.l2_gap = std::sqrt(s);
      r.gaps.push_back(g);
    }
  }
  return r;
}

SweepAxis parse_vary(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("", 0, "--vary expects key=v1,v2,..., got '" + text + "'");
  SweepAxis ax;
  ax.key = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const char sep = rest.find(';') != std::string::npos ? ';' : ',';
  std::string cur;
  int depth = 0;
  for (char c : rest) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      ax.values.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  ax.values.push_back(cur);
  for (auto& v : ax.values) {
    const auto b = v.find_first_not_of(' '), e = v.find_last_not_of(' ');
    v = b == std::string::npos ? "" : v.substr(b, e - b + 1);
    if (v.empty()) throw ConfigError(ax.key, 0, "empty value in --vary list");
  }
  const auto keys = config_keys();
  if (std::find(keys.begin(), keys.end(), ax.key) == keys.end()) throw ConfigError(ax.key, 0, "unknown key");
  return ax;
}

namespace {

std::string dir_token(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

std::vector<RunArtifact> sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, int threads) {
  std::vector<RunConfig> configs{base};
  std::vector<std::string> names{""};
  for (const SweepAxis& ax : axes) {
    std::vector<RunConfig> next;
    std::vector<std::string> next_names;
    for (std::size_t i = 0; i < configs.size(); ++i)
      for (const std::string& v : ax.values) {
        RunConfig c = configs[i];
        set_config_value(c, ax.key, v);
        next.push_back(std::move(c));
        next_names.push_back(names[i] + (names[i].empty() ? "" : "-") + dir_token(ax.key) + "=" + dir_token(v));
      }
    configs = std::move(next);
    names = std::move(next_names);
  }
  const fs::path root = base.output.dir;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    configs[i].grid.normalize();
    configs[i].output.dir = (root / (names[i].empty() ? "run" : names[i])).string();
    if (!names[i].empty()) configs[i].label = base.label + "-" + names[i];
    configs[i].validate();
  }

  std::vector<RunArtifact> out(configs.size());
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(configs.size(), threads > 0 ? threads : hw);
  std::mutex err_mu;
  std::exception_ptr err;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
          try {
            out[i] = run_scenario(configs[i]);
          } catch (...) {
            std::lock_guard lock(err_mu);
            if (!err) err = std::current_exception();
          }
        }
      });
  }
  if (err) std::rethrow_exception(err);

  std::string index = "run,dir,status,exit_code\n";
  for (std::size_t i = 0; i < out.size(); ++i)
    index += configs[i].label + "," + out[i].dir + "," + out[i].status + "," + std::to_string(out[i].exit_code) + "\n";
  fs::create_directories(root);
  write_file(root / "sweep.csv", index);
  return out;
}

int combined_exit(const std::vector<RunArtifact>& runs) {
  int code = exit_ok;
  for (const RunArtifact& r : runs) code = std::max(code, r.exit_code);
  return code;
}

}  // namespace plap
