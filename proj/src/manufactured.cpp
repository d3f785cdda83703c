#include "plap/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace plap {

namespace {

using std::numbers::pi;

struct Shape {
  int dim = 1;
  std::array<double, kMaxDim> low{};
  std::array<double, kMaxDim> len{1.0, 1.0, 1.0};

  double xhat(int a, std::span<const double> x) const { return (x[a] - low[a]) / len[a]; }

  double value(std::span<const double> x) const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= std::cos(pi * xhat(a, x));
    return v;
  }

  // sum_i (p-1) |D_i C|^{p-2} D_i D_i C for amplitude-one C, times amp^{p-1}
  double phi(std::span<const double> x, double amp, double p) const {
    double s = 0.0;
    const double c = value(x);
    for (int i = 0; i < dim; ++i) {
      const double k = pi / len[i];
      double di = -k * std::sin(pi * xhat(i, x));
      for (int j = 0; j < dim; ++j)
        if (j != i) di *= std::cos(pi * xhat(j, x));
      const double dii = -k * k * c;
      const double g = std::abs(amp * di);
      const double coef = p == 2.0 ? 1.0 : (g > 0.0 ? (p - 1.0) * std::pow(g, p - 2.0) : 0.0);
      s += coef * amp * dii;
    }
    return s;
  }
};

Shape shape_of(const Grid& g) {
  Shape s;
  s.dim = g.dim();
  for (int a = 0; a < g.dim(); ++a) {
    s.low[a] = g.bounds(a).low;
    s.len[a] = g.bounds(a).high - g.bounds(a).low;
  }
  return s;
}

}  // namespace

std::vector<std::string> manufactured_names() { return {"cos_decay", "cos_oscillation"}; }

Manufactured manufactured(const std::string& name, double p, const GridPtr& grid) {
  if (!grid) throw std::invalid_argument("manufactured: null grid");
  const Shape s = shape_of(*grid);
  Manufactured m;
  m.name = name;
  if (name == "cos_decay") {
    m.u = [s](double t, std::span<const double> x) { return std::exp(-t) * s.value(x); };
    m.u_t = [s](double t, std::span<const double> x) { return -std::exp(-t) * s.value(x); };
    m.h = Source::closed_form([s, p](double t, std::span<const double> x) {
      const double a = std::exp(-t);
      return -a * s.value(x) - s.phi(x, a, p);
    });
  } else if (name == "cos_oscillation") {
    m.u = [s](double t, std::span<const double> x) { return (std::cos(t) + 0.5 * std::sin(t)) * s.value(x); };
    m.u_t = [s](double t, std::span<const double> x) { return (-std::sin(t) + 0.5 * std::cos(t)) * s.value(x); };
    m.h = Source::closed_form([s, p](double t, std::span<const double> x) {
      const double a = std::cos(t) + 0.5 * std::sin(t);
      return -a * s.value(x) - s.phi(x, a, p);
    });
  } else {
    throw std::invalid_argument("unknown manufactured solution '" + name + "'");
  }
  return m;
}

void apply_manufactured(ProblemSpec& spec, const std::string& name) {
  const Manufactured m = manufactured(name, spec.p, spec.grid);
  spec.u0 = Field::from_function(spec.grid, [&](std::span<const double> x) { return m.u(0.0, x); });
  spec.u1 = Field::from_function(spec.grid, [&](std::span<const double> x) { return m.u_t(0.0, x); });
  spec.h = m.h;
}

}  // namespace plap
