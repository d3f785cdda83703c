#include "plap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <fstream>
#include <regex>
#include <sstream>

#include "plap/errors.hpp"
#include "plap/expression.hpp"
#include "plap/galerkin.hpp"
#include "plap/manufactured.hpp"

namespace plap {

const char* to_string(Method method) { return method == Method::galerkin ? "galerkin" : "fd"; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& msg) { throw ConfigError(key, 0, msg); }

double to_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) bad(key, "expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  long long v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) bad(key, "expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t to_seed(const std::string& key, const std::string& text) {
  std::string s = trim(text);
  int base = 10;
  if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) {
    s = s.substr(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v, base);
  if (ec != std::errc() || ptr != end || s.empty()) bad(key, "expected an unsigned integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  bad(key, "expected true or false, got '" + text + "'");
}

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + f(v[i]);
  return out;
}

template <class T>
void broadcast(std::vector<T>& v, int dim) {
  if (v.size() == 1 && dim > 1) v.assign(dim, v[0]);
}

// --- data strings ----------------------------------------------------------

struct Preset {
  std::string name;
  std::vector<std::string> args;
};

std::optional<Preset> as_preset(const std::string& text) {
  static const std::regex re(R"(^\s*(constant|cosine_mode|gaussian_bump|manufactured)\s*\((.*)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return std::nullopt;
  Preset p;
  p.name = m[1];
  p.args = split(m[2], ',');
  if (p.args.size() == 1 && p.args[0].empty()) p.args.clear();
  return p;
}

using Fn = Source::Fn;

struct DataFn {
  Fn fn;
  bool zero = false;
  std::optional<Manufactured> manufactured;
};

DataFn data_function(const std::string& text, const GridPtr& grid, double p, const std::string& key) {
  const int dim = grid->dim();
  std::array<double, kMaxDim> low{}, len{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    low[a] = grid->bounds(a).low;
    len[a] = grid->bounds(a).high - low[a];
  }
  DataFn out;
  if (const auto pre = as_preset(text)) {
    const auto& args = pre->args;
    if (pre->name == "constant") {
      if (args.size() != 1) bad(key, "constant(c) takes one argument");
      const double c = to_double(key, args[0]);
      out.zero = c == 0.0;
      out.fn = [c](double, std::span<const double>) { return c; };
    } else if (pre->name == "cosine_mode") {
      if (args.empty() || static_cast<int>(args.size()) > dim)
        bad(key, "cosine_mode takes one wavenumber per axis (1 to " + std::to_string(dim) + ")");
      std::array<int, kMaxDim> k{};
      for (std::size_t a = 0; a < args.size(); ++a) {
        const long long v = to_integer(key, args[a]);
        if (v < 0) bad(key, "cosine_mode wavenumbers must be non-negative");
        k[a] = static_cast<int>(v);
      }
      out.fn = [k, low, len, dim](double, std::span<const double> x) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= std::cos(k[a] * std::numbers::pi * (x[a] - low[a]) / len[a]);
        return v;
      };
    } else if (pre->name == "gaussian_bump") {
      if (args.size() != 2 && static_cast<int>(args.size()) != dim + 1)
        bad(key, "gaussian_bump takes (center, width) or one center per axis then width");
      std::array<double, kMaxDim> c{};
      for (int a = 0; a < dim; ++a) c[a] = to_double(key, args[args.size() == 2 ? 0 : a]);
      const double w = to_double(key, args.back());
      if (!(w > 0.0)) bad(key, "gaussian_bump width must be positive");
      out.fn = [c, w, dim](double, std::span<const double> x) {
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
        return std::exp(-0.5 * r2 / (w * w));
      };
    } else {
      if (args.size() != 1) bad(key, "manufactured(name) takes one argument");
      const auto names = manufactured_names();
      if (std::find(names.begin(), names.end(), args[0]) == names.end())
        bad(key, "unknown manufactured solution '" + args[0] + "' (known: " +
                     join(names, [](const std::string& s) { return s; }) + ")");
      out.manufactured = manufactured(args[0], p, grid);
      const Manufactured& m = *out.manufactured;
      if (key == "u1") out.fn = m.u_t;
      else if (key == "h") out.fn = nullptr;
      else out.fn = m.u;
    }
    return out;
  }
  Expression e;
  try {
    e = Expression::parse(text);
  } catch (const std::invalid_argument& ex) {
    bad(key, ex.what());
  }
  if (e.max_axis() > dim)
    bad(key, "expression uses x" + std::to_string(e.max_axis()) + " on a " + std::to_string(dim) + "D grid");
  if (key != "h" && e.uses_time()) bad(key, "initial data may not depend on t");
  const double probe[kMaxDim] = {0, 0, 0};
  out.zero = !e.uses_time() && e.max_axis() == 0 && e(0.0, probe) == 0.0;
  out.fn = [e](double t, std::span<const double> x) { return e(t, x); };
  return out;
}

// --- keys --------------------------------------------------------------------

const std::vector<std::string> kKeys = {
    "label",          "mode",         "method",           "p",
    "T",              "p2_diagnostic", "grid.dim",        "grid.nodes",
    "grid.low",       "grid.high",    "u0",               "u1",
    "h",              "solver.dt",    "solver.newton_tol", "solver.newton_max_iters",
    "solver.eps_reg", "solver.line_search", "solver.picard_sweeps", "solver.seed",
    "galerkin.modes", "audit.estimates", "audit.interpolation", "audit.pnorms",
    "output.dir",     "output.snapshot_stride"};

std::vector<PNormParams> parse_pnorms(const std::string& key, const std::string& text) {
  std::vector<PNormParams> out;
  if (trim(text).empty() || trim(text) == "default") return out;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() < 2 || parts.size() > 3) bad(key, "pseudo-norms are written alpha:beta[:zero_order]");
    PNormParams pn;
    pn.alpha = to_double(key, parts[0]);
    pn.beta = to_double(key, parts[1]);
    pn.include_zero_order = parts.size() == 3 ? to_bool(key, parts[2]) : true;
    out.push_back(pn);
  }
  return out;
}

int as_int(const std::string& key, const std::string& v) {
  const long long n = to_integer(key, v);
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) bad(key, "integer out of range");
  return static_cast<int>(n);
}

void check(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) bad(key, msg);
}

void validate_config(const RunConfig& c) {
  check(!c.label.empty() && c.label.find('/') == std::string::npos, "label", "label must be non-empty without '/'");
  try {
    OperatorParams op;
    op.p = c.p;
    op.p2_diagnostic = c.p2_diagnostic;
    op.validate();
  } catch (const std::invalid_argument& e) {
    bad("p", e.what());
  }
  check(c.T > 0.0 && std::isfinite(c.T), "T", "T must be positive");
  check(c.grid.dim >= 1 && c.grid.dim <= kMaxDim, "grid.dim", "grid.dim must be 1, 2 or 3");
  const auto count_ok = [&](std::size_t n) { return n == 1 || static_cast<int>(n) == c.grid.dim; };
  check(count_ok(c.grid.nodes.size()), "grid.nodes", "give one node count or one per axis");
  check(count_ok(c.grid.low.size()), "grid.low", "give one bound or one per axis");
  check(count_ok(c.grid.high.size()), "grid.high", "give one bound or one per axis");
  GridPtr g;
  try {
    g = c.grid.build();
  } catch (const std::invalid_argument& e) {
    bad("grid.nodes", e.what());
  }
  try {
    c.solver.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find(' '));
    bad("solver." + field, msg);
  }
  data_function(c.u0, g, c.p, "u0");
  data_function(c.u1, g, c.p, "u1");
  data_function(c.h, g, c.p, "h");
  if (c.method == Method::galerkin) {
    check(c.mode == Mode::parabolic, "method", "the Galerkin method is available for parabolic runs only");
    check(c.galerkin_modes >= 1, "galerkin.modes", "galerkin.modes must be at least 1");
    try {
      neumann_basis(c.galerkin_modes, g);
    } catch (const std::invalid_argument& e) {
      bad("galerkin.modes", e.what());
    }
  }
  for (const PNormParams& pn : c.audit.pnorms) {
    try {
      pn.validate();
    } catch (const std::invalid_argument& e) {
      bad("audit.pnorms", e.what());
    }
  }
  check(c.output.snapshot_stride >= 0, "output.snapshot_stride", "snapshot stride must be non-negative");
  check(!c.output.dir.empty(), "output.dir", "output directory must be non-empty");
}

}  // namespace

void GridConfig::normalize() {
  broadcast(nodes, dim);
  broadcast(low, dim);
  broadcast(high, dim);
}

GridPtr GridConfig::build() const {
  GridConfig g = *this;
  g.normalize();
  std::vector<Bounds> b;
  for (int a = 0; a < g.dim; ++a) b.push_back({g.low.at(a), g.high.at(a)});
  return build_grid(g.dim, g.nodes, b);
}

std::vector<std::string> config_keys() { return kKeys; }

void set_config_value(RunConfig& c, const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  if (key == "label") c.label = v;
  else if (key == "mode") {
    try {
      c.mode = mode_from_string(v);
    } catch (const std::invalid_argument& e) {
      bad(key, e.what());
    }
  } else if (key == "method") {
    if (v == "fd") c.method = Method::finite_difference;
    else if (v == "galerkin") c.method = Method::galerkin;
    else bad(key, "unknown method '" + v + "' (expected fd or galerkin)");
  } else if (key == "p") c.p = to_double(key, v);
  else if (key == "T") c.T = to_double(key, v);
  else if (key == "p2_diagnostic") c.p2_diagnostic = to_bool(key, v);
  else if (key == "grid.dim") c.grid.dim = as_int(key, v);
  else if (key == "grid.nodes") {
    c.grid.nodes.clear();
    for (const auto& s : split(v, ',')) c.grid.nodes.push_back(as_int(key, s));
  } else if (key == "grid.low" || key == "grid.high") {
    auto& dst = key == "grid.low" ? c.grid.low : c.grid.high;
    dst.clear();
    for (const auto& s : split(v, ',')) dst.push_back(to_double(key, s));
  } else if (key == "u0") c.u0 = v;
  else if (key == "u1") c.u1 = v;
  else if (key == "h") c.h = v;
  else if (key == "solver.dt") c.solver.dt = to_double(key, v);
  else if (key == "solver.newton_tol") c.solver.newton_tol = to_double(key, v);
  else if (key == "solver.newton_max_iters") c.solver.newton_max_iters = as_int(key, v);
  else if (key == "solver.eps_reg") c.solver.eps_reg = to_double(key, v);
  else if (key == "solver.line_search") c.solver.line_search = to_bool(key, v);
  else if (key == "solver.picard_sweeps") c.solver.picard_sweeps = as_int(key, v);
  else if (key == "solver.seed") c.solver.seed = to_seed(key, v);
  else if (key == "galerkin.modes") c.galerkin_modes = as_int(key, v);
  else if (key == "audit.estimates") c.audit.estimates = to_bool(key, v);
  else if (key == "audit.interpolation") c.audit.interpolation = to_bool(key, v);
  else if (key == "audit.pnorms") c.audit.pnorms = parse_pnorms(key, v);
  else if (key == "output.dir") c.output.dir = v;
  else if (key == "output.snapshot_stride") c.output.snapshot_stride = as_int(key, v);
  else bad(key, "unknown key");
}

void RunConfig::validate() const { validate_config(*this); }

RunConfig parse_config(const std::string& text, const ParseOptions& options) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", lineno, "missing key");
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      if (options.strict) throw ConfigError(key, lineno, "unknown key");
      continue;
    }
    if (seen.count(key)) throw ConfigError(key, lineno, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    seen[key] = lineno;
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(key, lineno, e.detail());
    }
  }
  if (options.p2_diagnostic) cfg.p2_diagnostic = true;
  cfg.grid.normalize();
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    const auto it = seen.find(e.key());
    if (it == seen.end()) throw;
    throw ConfigError(e.key(), it->second, e.detail());
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), options);
}

std::string render_config(const RunConfig& c) {
  std::ostringstream o;
  const auto ints = [](int v) { return std::to_string(v); };
  o << "label = " << c.label << "\n";
  o << "mode = " << to_string(c.mode) << "\n";
  o << "method = " << to_string(c.method) << "\n";
  o << "p = " << num(c.p) << "\n";
  o << "T = " << num(c.T) << "\n";
  o << "p2_diagnostic = " << (c.p2_diagnostic ? "true" : "false") << "\n";
  o << "grid.dim = " << c.grid.dim << "\n";
  o << "grid.nodes = " << join(c.grid.nodes, ints) << "\n";
  o << "grid.low = " << join(c.grid.low, num) << "\n";
  o << "grid.high = " << join(c.grid.high, num) << "\n";
  o << "u0 = " << c.u0 << "\n";
  o << "u1 = " << c.u1 << "\n";
  o << "h = " << c.h << "\n";
  o << "solver.dt = " << num(c.solver.dt) << "\n";
  o << "solver.newton_tol = " << num(c.solver.newton_tol) << "\n";
  o << "solver.newton_max_iters = " << c.solver.newton_max_iters << "\n";
  o << "solver.eps_reg = " << num(c.solver.eps_reg) << "\n";
  o << "solver.line_search = " << (c.solver.line_search ? "true" : "false") << "\n";
  o << "solver.picard_sweeps = " << c.solver.picard_sweeps << "\n";
  o << "solver.seed = " << c.solver.seed << "\n";
  o << "galerkin.modes = " << c.galerkin_modes << "\n";
  o << "audit.estimates = " << (c.audit.estimates ? "true" : "false") << "\n";
  o << "audit.interpolation = " << (c.audit.interpolation ? "true" : "false") << "\n";
  o << "audit.pnorms = "
    << (c.audit.pnorms.empty() ? std::string("default") : join(c.audit.pnorms, [](const PNormParams& pn) {
          return num(pn.alpha) + ":" + num(pn.beta) + ":" + (pn.include_zero_order ? "1" : "0");
        }))
    << "\n";
  o << "output.dir = " << c.output.dir << "\n";
  o << "output.snapshot_stride = " << c.output.snapshot_stride << "\n";
  return o.str();
}

ProblemSpec RunConfig::build_problem() const {
  ProblemSpec s;
  s.mode = mode;
  s.p = p;
  s.T = T;
  s.p2_diagnostic = p2_diagnostic;
  s.grid = grid.build();
  s.u0 = data_field(u0, s.grid, p, "u0");
  s.u1 = data_field(u1, s.grid, p, "u1");
  s.h = data_source(h, s.grid, p, "h");
  return s;
}

Field data_field(const std::string& text, const GridPtr& grid, double p, const std::string& name) {
  const DataFn d = data_function(text, grid, p, name);
  if (d.zero) return Field(grid);
  return Field::from_function(grid, [&](std::span<const double> x) { return d.fn(0.0, x); });
}

Source data_source(const std::string& text, const GridPtr& grid, double p, const std::string& name) {
  const DataFn d = data_function(text, grid, p, name);
  if (d.manufactured) return d.manufactured->h;
  if (d.zero) return Source::zero();
  return Source::closed_form(d.fn);
}

}  // namespace plap
