#include "doctest.h"
#include "plap/config.hpp"
#include "plap/errors.hpp"
#include "test_support.hpp"

using namespace plap;
using namespace plap::testing;

TEST_CASE("minimal document") {
  const RunConfig c = parse_config(
      "mode = parabolic\n"
      "p = 3\n"
      "T = 0.1\n"
      "grid.dim = 1\n"
      "grid.nodes = 65\n"
      "u0 = cosine_mode(1)\n"
      "h = 0\n");
  CHECK(c.mode == Mode::parabolic);
  CHECK(c.p == 3.0);
  CHECK(c.grid.nodes == std::vector<int>{65});
  const ProblemSpec s = c.build_problem();
  CHECK(s.grid->size() == 65);
  CHECK(s.h.is_zero());
  CHECK(s.u0[0] == doctest::Approx(1.0));
  CHECK(s.u0[64] == doctest::Approx(-1.0));
}

TEST_CASE("p below 2 is rejected with the line") {
  try {
    parse_config("mode = parabolic\np = 1.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "p");
    CHECK(e.line() == 2);
    CHECK(e.detail() == "p must exceed 2 (or enable p2_diagnostic)");
  }
  CHECK_THROWS_AS(parse_config("p = 2\n"), ConfigError);
  CHECK(parse_config("p = 2\n", {true, true}).p2_diagnostic);
  CHECK(parse_config("p = 2\np2_diagnostic = true\n").p == 2.0);
}

TEST_CASE("expression matches the cosine preset") {
  const GridPtr g = unit_grid_1d(129);
  const Field a = data_field("cos(3.14159*x1)", g, 3.0);
  const Field b = data_field("cosine_mode(1)", g, 3.0);
  CHECK(max_abs_diff(a, b) < 1e-4);
}

TEST_CASE("presets") {
  const GridPtr g = build_grid(2, {9, 17}, {{0, 2}, {-1, 1}});
  const Field c = data_field("constant(2.5)", g, 3.0);
  CHECK(c.max_abs() == 2.5);
  const Field cm = data_field("cosine_mode(1, 2)", g, 3.0);
  CHECK(cm[0] == doctest::Approx(1.0));
  const Field gb = data_field("gaussian_bump(1, 0, 0.2)", g, 3.0);
  CHECK(gb.max_abs() == doctest::Approx(1.0));
  const Field gb2 = data_field("gaussian_bump(0.5, 0.2)", g, 3.0);
  CHECK(gb2.max_abs() <= 1.0);
  const Field mu = data_field("manufactured(cos_oscillation)", g, 3.0, "u1");
  CHECK(mu[0] == doctest::Approx(0.5));  // a'(0) = 1/2
  CHECK_FALSE(data_source("manufactured(cos_decay)", g, 3.0).is_zero());
  CHECK(data_source("0", g, 3.0).is_zero());
  CHECK(data_source("constant(0)", g, 3.0).is_zero());
  CHECK_FALSE(data_source("0*t + 1", g, 3.0).is_zero());

  CHECK_THROWS_AS(data_field("manufactured(nope)", g, 3.0), ConfigError);
  CHECK_THROWS_AS(data_field("cosine_mode(1,1,1)", g, 3.0), ConfigError);
  CHECK_THROWS_AS(data_field("gaussian_bump(0.5, -1)", g, 3.0), ConfigError);
  CHECK_THROWS_AS(data_field("x3", g, 3.0), ConfigError);
  CHECK_THROWS_WITH_AS(data_field("t*x1", g, 3.0), doctest::Contains("may not depend on t"), ConfigError);
}

TEST_CASE("strict keys, duplicates and malformed lines") {
  try {
    parse_config("p = 3\nsolver.dtt = 1e-3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "solver.dtt");
    CHECK(e.line() == 2);
  }
  CHECK_NOTHROW(parse_config("p = 3\nsolver.dtt = 1e-3\n", {false, false}));
  CHECK_THROWS_WITH_AS(parse_config("p = 3\np = 4\n"), doctest::Contains("duplicate"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("p 3\n"), doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("solver.dt = fast\n"), doctest::Contains("[solver.dt]"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("solver.dt = -1\n"), doctest::Contains("dt must be positive"), ConfigError);
  CHECK_THROWS_AS(parse_config("mode = elliptic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.dim = 2\ngrid.nodes = 9,9,9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.low = 1\ngrid.high = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mode = hyperbolic\nmethod = galerkin\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("method = galerkin\ngrid.nodes = 5\ngalerkin.modes = 9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("u0 = cos(\n"), ConfigError);
  // comments and blank lines
  CHECK(parse_config("# header\n\n  T = 0.25   # trailing\n").T == 0.25);
}

TEST_CASE("render/parse round trip") {
  RunConfig c;
  CHECK(parse_config(render_config(c)) == c);

  c.label = "wave-2d";
  c.mode = Mode::integro;
  c.p = 3.3;
  c.T = 0.1 + 0.2;
  c.grid.dim = 2;
  c.grid.nodes = {33, 17};
  c.grid.low = {0.0, -1.0 / 3.0};
  c.grid.high = {2.0, 1.0};
  c.u0 = "gaussian_bump(1, 0, 0.2)";
  c.u1 = "0.1*cos(pi*x1)";
  c.h = "exp(-t)*cos(pi*x2)";
  c.solver.dt = 1.0 / 3000.0;
  c.solver.seed = 0xdeadbeefcafeULL;
  c.solver.line_search = false;
  c.audit.pnorms = {{1.0, 2.0, true}, {0.25, 3.5, false}};
  c.audit.interpolation = true;
  c.output.dir = "out/wave 2d";
  c.output.snapshot_stride = 0;
  const RunConfig back = parse_config(render_config(c));
  CHECK(back == c);
  CHECK(render_config(back) == render_config(c));

  RunConfig g;
  g.method = Method::galerkin;
  g.galerkin_modes = 5;
  g.p2_diagnostic = true;
  g.p = 2.0;
  CHECK(parse_config(render_config(g)) == g);
}

TEST_CASE("single values broadcast to every axis") {
  const RunConfig c = parse_config("grid.dim = 3\ngrid.nodes = 5\ngrid.high = 2\n");
  CHECK(c.grid.nodes == std::vector<int>{5, 5, 5});
  CHECK(c.grid.high == std::vector<double>{2, 2, 2});
  CHECK(c.grid.build()->volume() == doctest::Approx(8.0));
}
