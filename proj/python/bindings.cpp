#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plap/audit.hpp"
#include "plap/config.hpp"
#include "plap/errors.hpp"
#include "plap/hyperbolic.hpp"
#include "plap/operator.hpp"
#include "plap/parabolic.hpp"
#include "plap/runner.hpp"

namespace py = pybind11;
using namespace plap;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

struct GridHandle {
  GridPtr ptr;
  int axis(int a) const {
    if (a < 0 || a >= ptr->dim()) throw py::index_error("axis " + std::to_string(a) + " out of range");
    return a;
  }
};

Field to_field(const GridHandle& h, const Array& a) {
  const GridPtr& g = h.ptr;
  if (static_cast<std::size_t>(a.size()) != g->size())
    throw std::invalid_argument("array has " + std::to_string(a.size()) + " entries, grid has " +
                                std::to_string(g->size()) + " nodes");
  return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

// Node arrays come back shaped like the grid (axis 0 slowest).
Array to_array(const Field& f) {
  std::vector<py::ssize_t> shape;
  const Grid& g = f.grid();
  for (int a = g.dim() - 1; a >= 0; --a) shape.push_back(g.nodes(a));
  Array out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

OperatorParams op_params(double p, double eps_reg, bool p2) {
  OperatorParams o;
  o.p = p;
  o.eps_reg = eps_reg;
  o.p2_diagnostic = p2;
  o.validate();
  return o;
}

py::dict report_dict(const RunArtifact& a) {
  py::dict d;
  d["status"] = a.status;
  d["exit_code"] = a.exit_code;
  d["dir"] = a.dir;
  d["wall_time"] = a.wall_time;
  d["times"] = a.report.times;
  d["series"] = a.report.series;
  d["scalars"] = a.report.scalars;
  py::dict verdicts;
  for (const auto& [name, v] : a.report.verdicts) verdicts[py::str(name)] = py::make_tuple(v.pass, v.margin, v.detail);
  d["verdicts"] = verdicts;
  if (a.abort) {
    d["abort"] = py::dict(py::arg("reason") = a.abort->reason, py::arg("time") = a.abort->time,
                          py::arg("detail") = a.abort->detail, py::arg("suggested_dt") = a.abort->suggested_dt);
  } else {
    d["abort"] = py::none();
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "p-Laplacian evolution solvers and estimate audits";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<SolverAbort> solver_abort(m, "SolverAbort", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const SolverAbort& e) {
      py::set_error(solver_abort, e.what());
    }
  });

  py::class_<GridHandle>(m, "Grid")
      .def(py::init([](std::vector<int> nodes, std::vector<std::pair<double, double>> bounds) {
             std::vector<Bounds> b;
             for (auto [lo, hi] : bounds) b.push_back({lo, hi});
             if (b.empty()) b.assign(nodes.size(), Bounds{0.0, 1.0});
             return GridHandle{build_grid(static_cast<int>(nodes.size()), nodes, b)};
           }),
           py::arg("nodes"), py::arg("bounds") = std::vector<std::pair<double, double>>{})
      .def_property_readonly("dim", [](const GridHandle& g) { return g.ptr->dim(); })
      .def_property_readonly("size", [](const GridHandle& g) { return g.ptr->size(); })
      .def_property_readonly("volume", [](const GridHandle& g) { return g.ptr->volume(); })
      .def_property_readonly("nodes", [](const GridHandle& g) {
        auto s = g.ptr->nodes_per_axis();
        return std::vector<int>(s.begin(), s.end());
      })
      .def("spacing", [](const GridHandle& g, int axis) { return g.ptr->spacing(g.axis(axis)); }, py::arg("axis"))
      .def("coords", [](const GridHandle& g, int axis) {
        std::vector<double> c;
        for (int k = 0; k < g.ptr->nodes(g.axis(axis)); ++k) c.push_back(g.ptr->coord(axis, k));
        return c;
      }, py::arg("axis"));

  m.def("integrate", [](const GridHandle& g, const Array& f) { return integrate(to_field(g, f)); }, py::arg("grid"),
        py::arg("f"));
  m.def("lp_norm", [](const GridHandle& g, const Array& f, double r) { return lp_norm(to_field(g, f), r); },
        py::arg("grid"), py::arg("f"), py::arg("r"));
  m.def("plap_apply",
        [](const GridHandle& g, const Array& u, double p, double eps_reg, bool p2) {
          return to_array(plap_apply(to_field(g, u), op_params(p, eps_reg, p2)));
        },
        py::arg("grid"), py::arg("u"), py::arg("p"), py::arg("eps_reg") = 0.0, py::arg("p2_diagnostic") = false,
        "sum_i D_i(|D_i u|^{p-2} D_i u) with zero boundary flux");
  m.def("plap_jacobian_vec",
        [](const GridHandle& g, const Array& u, const Array& v, double p, double eps_reg, bool p2) {
          return to_array(plap_jacobian_vec(to_field(g, u), to_field(g, v), op_params(p, eps_reg, p2)));
        },
        py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("p"), py::arg("eps_reg") = 1e-8,
        py::arg("p2_diagnostic") = false);
  m.def("gradient_lp_pow", [](const GridHandle& g, const Array& u, double r) { return gradient_lp_pow(to_field(g, u), r); },
        py::arg("grid"), py::arg("u"), py::arg("r"));
  m.def("pnorm_S1",
        [](const GridHandle& g, const Array& u, double alpha, double beta, bool zero) {
          return pnorm_S1(to_field(g, u), PNormParams{alpha, beta, zero});
        },
        py::arg("grid"), py::arg("u"), py::arg("alpha") = 1.0, py::arg("beta") = 2.0,
        py::arg("include_zero_order") = true);
  m.def("ngs_theta", [](int n, double p) { return ngs_theta(wave_ngs_exponents(n, p)); }, py::arg("n"), py::arg("p"));
  m.def("young_conjugate", &young_conjugate, py::arg("p"), py::arg("eps"));

  m.def("parse_config",
        [](const std::string& text, bool p2) { return render_config(parse_config(text, {true, p2})); },
        py::arg("text"), py::arg("p2_diagnostic") = false, "validate a config document; returns its canonical form");
  m.def("solve",
        [](const std::string& text, bool p2) {
          const RunConfig cfg = parse_config(text, {true, p2});
          Trajectory tr;
          const RunArtifact a = evaluate_scenario(cfg, &tr);
          if (a.abort) {
            py::set_error(solver_abort, a.abort->detail.c_str());
            throw py::error_already_set();
          }
          py::list states;
          for (const Field& f : tr.states) states.append(to_array(f));
          return py::make_tuple(tr.times, states);
        },
        py::arg("text"), py::arg("p2_diagnostic") = false, "solve a configuration; returns (times, states)");
  m.def("evaluate",
        [](const std::string& text, bool p2) {
          const RunConfig cfg = parse_config(text, {true, p2});
          RunArtifact a;
          {
            py::gil_scoped_release release;
            a = evaluate_scenario(cfg);
          }
          return report_dict(a);
        },
        py::arg("text"), py::arg("p2_diagnostic") = false, "solve and audit without writing files");
  m.def("run",
        [](const std::string& text, const std::string& out, bool p2) {
          RunConfig cfg = parse_config(text, {true, p2});
          if (!out.empty()) cfg.output.dir = out;
          RunArtifact a;
          {
            py::gil_scoped_release release;
            a = run_scenario(cfg);
          }
          return report_dict(a);
        },
        py::arg("text"), py::arg("out") = "", py::arg("p2_diagnostic") = false,
        "solve, audit and write the artifact directory");
  m.def("audit",
        [](const std::string& dir) {
          const AuditResult r = audit_artifact(dir);
          return py::dict(py::arg("reproduced") = r.reproduced, py::arg("mismatched") = r.mismatched,
                          py::arg("exit_code") = r.exit_code);
        },
        py::arg("dir"));
  m.def("compare",
        [](const std::string& a, const std::string& b) {
          const CompareReport r = compare_runs(a, b);
          py::dict gaps;
          for (const SeriesGap& g : r.gaps) gaps[py::str(g.name)] = py::make_tuple(g.max_gap, g.l2_gap);
          return gaps;
        },
        py::arg("a"), py::arg("b"), "per-series (max, L2) gaps between two artifact directories");
}
