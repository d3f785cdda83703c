#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "plap/grid.hpp"

namespace plap::testing {

inline constexpr double pi = std::numbers::pi;

inline GridPtr unit_grid_1d(int n) { return build_grid(1, {n}, {{0.0, 1.0}}); }
inline GridPtr unit_grid_2d(int n) { return build_grid(2, {n, n}, {{0.0, 1.0}, {0.0, 1.0}}); }

inline Field random_field(const GridPtr& g, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Field f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

/// Random low-order cosine series, smooth at every resolution.
inline Field random_smooth_field(const GridPtr& g, std::mt19937_64& rng, int modes = 4, bool zero_mean = false) {
  std::normal_distribution<double> d(0.0, 1.0);
  const int dim = g->dim();
  Field f(g);
  const int kmax = modes;
  for (int k0 = 0; k0 <= kmax; ++k0)
    for (int k1 = 0; k1 <= (dim > 1 ? kmax : 0); ++k1) {
      if (zero_mean && k0 == 0 && k1 == 0) continue;
      const double a = d(rng) / (1.0 + k0 + k1);
      const Field m = Field::from_function(g, [&](std::span<const double> x) {
        double v = std::cos(k0 * pi * (x[0] - g->bounds(0).low) / (g->bounds(0).high - g->bounds(0).low));
        if (dim > 1) v *= std::cos(k1 * pi * (x[1] - g->bounds(1).low) / (g->bounds(1).high - g->bounds(1).low));
        return v;
      });
      f.axpy(a, m);
    }
  return f;
}

inline double rel_diff(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace plap::testing
