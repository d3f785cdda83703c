#include "doctest.h"
#include "plap/grid.hpp"
#include "test_support.hpp"

using namespace plap;
using namespace plap::testing;

TEST_CASE("build_grid derives spacing and trapezoid weights") {
  const auto g = unit_grid_1d(5);
  CHECK(g->spacing(0) == 0.25);
  const std::vector<double> expected{0.125, 0.25, 0.25, 0.25, 0.125};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(g->weights()[i] == doctest::Approx(expected[i]).epsilon(1e-15));

  const auto g2 = unit_grid_2d(3);
  double sum = 0.0;
  for (double w : g2->weights()) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  const auto g3 = build_grid(3, {4, 5, 6}, {{-1.0, 2.0}, {0.0, 0.5}, {1.0, 3.0}});
  sum = 0.0;
  for (double w : g3->weights()) sum += w;
  CHECK(rel_diff(sum, g3->volume()) < 1e-12);
  CHECK(g3->spacing(0) == (2.0 - -1.0) / 3);
}

TEST_CASE("build_grid rejects invalid input") {
  CHECK_THROWS_AS(build_grid(1, {2}, {{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(4, {3, 3, 3, 3}, {{0, 1}, {0, 1}, {0, 1}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, {5}, {{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(2, {5}, {{0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("integrate") {
  const auto g = unit_grid_1d(65);
  CHECK(integrate(Field::constant(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  const Field c = Field::from_function(g, [](auto x) { return std::cos(pi * x[0]); });
  CHECK(std::abs(integrate(c)) < 1e-3);
  for (int n : {3, 7, 33}) {
    const auto gn = unit_grid_1d(n);
    CHECK(integrate(Field::from_function(gn, [](auto x) { return x[0]; })) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("lp_norm") {
  const auto g = build_grid(2, {9, 5}, {{0.0, 2.0}, {0.0, 1.5}});
  CHECK(lp_norm(Field::constant(g, -2.0), 3.0) == doctest::Approx(2.0 * std::pow(3.0, 1.0 / 3.0)).epsilon(1e-13));
  CHECK(lp_norm(Field(g), 2.0) == 0.0);
  const auto g1 = unit_grid_1d(129);
  const Field c = Field::from_function(g1, [](auto x) { return std::cos(pi * x[0]); });
  CHECK(std::abs(lp_norm(c, 2.0) - std::sqrt(0.5)) < 1e-3);
  CHECK_THROWS_AS(lp_norm(c, 0.5), std::invalid_argument);
}

TEST_CASE("face_gradient") {
  const auto g = unit_grid_1d(9);
  const FaceField s = face_gradient(Field::from_function(g, [](auto x) { return x[0]; }), 0);
  REQUIRE(s.size() == 10u);
  CHECK(s[0] == 0.0);
  CHECK(s[9] == 0.0);
  for (int k = 1; k < 9; ++k) CHECK(s[k] == doctest::Approx(1.0).epsilon(1e-14));

  const FaceField z = face_gradient(Field::constant(g, 3.0), 0);
  for (double v : z.values()) CHECK(v == 0.0);

  // Two-point difference of x^2 is exact at the face midpoint.
  const FaceField q = face_gradient(Field::from_function(g, [](auto x) { return x[0] * x[0]; }), 0);
  const double h = g->spacing(0);
  for (int k = 1; k < 9; ++k) CHECK(q[k] == doctest::Approx(2.0 * (k - 0.5) * h).epsilon(1e-13));

  CHECK_THROWS_AS(face_gradient(Field(g), 1), std::invalid_argument);
}

TEST_CASE("face fields carry N+1 entries along their axis") {
  const auto g = build_grid(2, {5, 7}, {{0, 1}, {0, 1}});
  CHECK(face_gradient(Field(g), 0).size() == 6u * 7u);
  CHECK(face_gradient(Field(g), 1).size() == 5u * 8u);
}

TEST_CASE("summation by parts on random fields") {
  std::mt19937_64 rng(7);
  for (const auto& g : {unit_grid_1d(17), build_grid(2, {9, 12}, {{0, 1}, {0, 2}}),
                        build_grid(3, {5, 6, 4}, {{0, 1}, {0, 1}, {0, 1}})}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Field f = random_field(g, rng);
      const Field gg = random_field(g, rng);
      double lhs = 0.0;
      double rhs = 0.0;
      for (int a = 0; a < g->dim(); ++a) {
        lhs += inner(gg, divergence(face_gradient(f, a)));
        rhs -= face_inner(face_gradient(f, a), face_gradient(gg, a));
      }
      CHECK(rel_diff(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("integrate is linear and lp_norm is homogeneous") {
  std::mt19937_64 rng(11);
  const auto g = build_grid(2, {11, 9}, {{0, 1}, {0, 3}});
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = random_field(g, rng);
    const Field h = random_field(g, rng);
    const double a = 1.7, b = -0.3;
    Field comb = a * f;
    comb.axpy(b, h);
    CHECK(rel_diff(integrate(comb), a * integrate(f) + b * integrate(h)) < 1e-13);
    for (double r : {1.0, 2.0, 3.5}) CHECK(rel_diff(lp_norm(-2.5 * f, r), 2.5 * lp_norm(f, r)) < 1e-13);
  }
}

TEST_CASE("mixed derivatives vanish on the boundary") {
  const auto g = unit_grid_2d(17);
  const Field f = Field::from_function(g, [](auto x) { return std::cos(pi * x[0]) * std::cos(2 * pi * x[1]); });
  const Field m = mixed_derivative(f, 0, 1);
  for (std::size_t n = 0; n < g->size(); ++n) {
    const auto idx = g->unflatten(n);
    if (idx[0] == 0 || idx[0] == 16 || idx[1] == 0 || idx[1] == 16) CHECK(m[n] == 0.0);
  }
  // interior: D_y D_x f = 2 pi^2 sin(pi x) sin(2 pi y)
  const std::size_t mid = 4 + 4 * 17;
  const double expect = 2 * pi * pi * std::sin(pi * 0.25) * std::sin(2 * pi * 0.25);
  CHECK(std::abs(m[mid] - expect) < 0.05 * expect);
}
