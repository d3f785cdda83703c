#include "plap/operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "plap/errors.hpp"

namespace plap {

void OperatorParams::validate() const {
  if (!std::isfinite(p)) throw std::invalid_argument("p must be finite");
  if (p2_diagnostic) {
    if (p < 2.0) throw std::invalid_argument("p must be at least 2 in diagnostic mode");
  } else if (!(p > 2.0)) {
    throw std::invalid_argument("p must exceed 2 (or enable p2_diagnostic)");
  }
  if (!(eps_reg >= 0.0)) throw std::invalid_argument("eps_reg must be non-negative");
  for (bool zero : per_axis_flux_zero)
    if (!zero) throw std::invalid_argument("only the zero normal-flux boundary condition is supported");
}

FluxField FluxField::zeros(const GridPtr& grid) {
  FluxField f;
  for (int a = 0; a < grid->dim(); ++a) f.axes.emplace_back(grid, a);
  return f;
}

FluxField& FluxField::axpy(double s, const FluxField& other) {
  if (other.axes.size() != axes.size()) throw std::invalid_argument("flux fields do not conform");
  for (std::size_t a = 0; a < axes.size(); ++a) axes[a].axpy(s, other.axes[a]);
  return *this;
}

bool FluxField::boundary_is_zero() const {
  for (const auto& f : axes) {
    const Grid& g = f.grid();
    const int axis = f.axis();
    const std::size_t fs = g.face_stride(axis, axis);
    const int n = g.nodes(axis);
    bool ok = true;
    g.for_each_line(axis, [&](std::size_t, std::size_t fb, double) {
      if (f[fb] != 0.0 || f[fb + n * fs] != 0.0) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

double flux_law(double s, double p, double eps) {
  if (p == 2.0) return s;
  if (eps == 0.0) return std::pow(std::abs(s), p - 2.0) * s;
  return std::pow(s * s + eps * eps, 0.5 * (p - 2.0)) * s;
}

double flux_law_derivative(double s, double p, double eps) {
  if (p == 2.0) return 1.0;
  const double r2 = s * s + eps * eps;
  return std::pow(r2, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + eps * eps);
}

namespace {

// Applies `law` to every interior face gradient; boundary faces stay zero.
template <class Law>
FluxField map_faces(const Field& u, Law law) {
  FluxField out;
  out.axes.reserve(static_cast<std::size_t>(u.grid().dim()));
  for (int a = 0; a < u.grid().dim(); ++a) {
    FaceField s = face_gradient(u, a);
    const auto w = u.grid().face_weights(a);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = w[i] > 0.0 ? law(s[i]) : 0.0;
    out.axes.push_back(std::move(s));
  }
  return out;
}

}  // namespace

FluxField plap_flux(const Field& u, const OperatorParams& params) {
  params.validate();
  const double p = params.p;
  const double eps = params.eps_reg;
  return map_faces(u, [p, eps](double s) { return flux_law(s, p, eps); });
}

Field flux_divergence(const FluxField& flux) {
  if (flux.axes.empty()) throw std::invalid_argument("empty flux field");
  Field out = divergence(flux.axes[0]);
  for (std::size_t a = 1; a < flux.axes.size(); ++a) out += divergence(flux.axes[a]);
  return out;
}

Field plap_apply(const Field& u, const OperatorParams& params) { return flux_divergence(plap_flux(u, params)); }

FluxField plap_jacobian_coefficients(const Field& u, const OperatorParams& params) {
  params.validate();
  const double p = params.p;
  const double eps = params.eps_reg;
  const bool singular = eps == 0.0 && p != 2.0;
  return map_faces(u, [=](double s) {
    if (singular && std::abs(s) < kEpsFloor)
      throw DegenerateLinearization("unregularized linearization: face gradient " + std::to_string(s) +
                                    " below floor with p = " + std::to_string(p));
    return flux_law_derivative(s, p, eps);
  });
}

Field plap_jacobian_vec(const Field& u, const Field& v, const OperatorParams& params) {
  FluxField coef = plap_jacobian_coefficients(u, params);
  for (auto& c : coef.axes) {
    const FaceField dv = face_gradient(v, c.axis());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= dv[i];
  }
  return flux_divergence(coef);
}

double plap_dissipation(const Field& u, const OperatorParams& params) {
  params.validate();
  double acc = 0.0;
  for (int a = 0; a < u.grid().dim(); ++a) {
    const FaceField s = face_gradient(u, a);
    const auto w = u.grid().face_weights(a);
    for (std::size_t i = 0; i < s.size(); ++i) acc += w[i] * flux_law(s[i], params.p, params.eps_reg) * s[i];
  }
  return acc;
}

double gradient_lp_pow(const Field& u, double r) {
  double acc = 0.0;
  for (int a = 0; a < u.grid().dim(); ++a) acc += face_lp_norm_pow(face_gradient(u, a), r);
  return acc;
}

}  // namespace plap
