#include "plap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace plap {

GridPtr build_grid(int dim, std::vector<int> nodes_per_axis, std::vector<Bounds> bounds) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dim must be 1, 2 or 3, got " + std::to_string(dim));
  if (static_cast<int>(nodes_per_axis.size()) != dim || static_cast<int>(bounds.size()) != dim)
    throw std::invalid_argument("grid needs one node count and one bound pair per axis");

  std::shared_ptr<Grid> g(new Grid());
  g->dim_ = dim;
  for (int a = 0; a < dim; ++a) {
    if (nodes_per_axis[a] < 3)
      throw std::invalid_argument("axis " + std::to_string(a) + " needs at least 3 nodes, got " +
                                  std::to_string(nodes_per_axis[a]));
    if (!(bounds[a].low < bounds[a].high))
      throw std::invalid_argument("axis " + std::to_string(a) + " has inverted or empty bounds");
    g->nodes_[a] = nodes_per_axis[a];
    g->bounds_[a] = bounds[a];
    g->spacing_[a] = (bounds[a].high - bounds[a].low) / (nodes_per_axis[a] - 1);
  }

  std::size_t s = 1;
  for (int a = 0; a < kMaxDim; ++a) {
    g->stride_[a] = s;
    s *= static_cast<std::size_t>(g->nodes_[a]);
  }
  g->size_ = s;

  g->weights_.resize(s);
  for (std::size_t n = 0; n < s; ++n) {
    const auto idx = g->unflatten(n);
    double w = 1.0;
    for (int a = 0; a < dim; ++a) w *= g->axis_weight(a, idx[a]);
    g->weights_[n] = w;
  }

  for (int axis = 0; axis < dim; ++axis) {
    std::array<std::size_t, kMaxDim> fdims{};
    for (int a = 0; a < kMaxDim; ++a) fdims[a] = static_cast<std::size_t>(g->nodes_[a]) + (a == axis ? 1 : 0);
    std::size_t fs = 1;
    for (int a = 0; a < kMaxDim; ++a) {
      g->face_stride_[axis][a] = fs;
      fs *= fdims[a];
    }
    g->face_size_[axis] = fs;
    auto& fw = g->face_weights_[axis];
    fw.assign(fs, 0.0);
    const double h = g->spacing_[axis];
    const std::size_t fstride = g->face_stride_[axis][axis];
    const int n_axis = g->nodes_[axis];
    g->for_each_line(axis, [&](std::size_t, std::size_t face_base, double line_w) {
      for (int k = 1; k < n_axis; ++k) fw[face_base + k * fstride] = h * line_w;
    });
  }
  return g;
}

double Grid::min_spacing() const {
  double m = spacing_[0];
  for (int a = 1; a < dim_; ++a) m = std::min(m, spacing_[a]);
  return m;
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= bounds_[a].high - bounds_[a].low;
  return v;
}

NodeIndex Grid::unflatten(std::size_t node) const {
  NodeIndex idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = static_cast<int>(node % static_cast<std::size_t>(nodes_[a]));
    node /= static_cast<std::size_t>(nodes_[a]);
  }
  return idx;
}

void Grid::coords(std::size_t node, std::span<double> x) const {
  const auto idx = unflatten(node);
  for (int a = 0; a < dim_; ++a) x[a] = coord(a, idx[a]);
}

double Grid::axis_weight(int axis, int k) const {
  const double h = spacing_[axis];
  return (k == 0 || k == nodes_[axis] - 1) ? 0.5 * h : h;
}

void Grid::for_each_line(int axis, const std::function<void(std::size_t, std::size_t, double)>& fn) const {
  std::array<int, kMaxDim> j{0, 0, 0};
  std::array<int, kMaxDim> extent{1, 1, 1};
  for (int a = 0; a < dim_; ++a)
    if (a != axis) extent[a] = nodes_[a];
  while (true) {
    std::size_t node_base = 0;
    std::size_t face_base = 0;
    double w = 1.0;
    for (int a = 0; a < dim_; ++a) {
      if (a == axis) continue;
      node_base += j[a] * stride_[a];
      face_base += j[a] * face_stride_[axis][a];
      w *= axis_weight(a, j[a]);
    }
    fn(node_base, face_base, w);
    int a = 0;
    for (; a < kMaxDim; ++a) {
      if (++j[a] < extent[a]) break;
      j[a] = 0;
    }
    if (a == kMaxDim) break;
  }
}

bool Grid::same_shape(const Grid& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a)
    if (nodes_[a] != other.nodes_[a] || !(bounds_[a] == other.bounds_[a])) return false;
  return true;
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw std::invalid_argument("field size does not match grid node count");
}

Field Field::constant(GridPtr grid, double value) {
  Field f(std::move(grid));
  std::fill(f.values_.begin(), f.values_.end(), value);
  return f;
}

Field Field::from_function(GridPtr grid, const std::function<double(std::span<const double>)>& fn) {
  Field f(grid);
  std::array<double, kMaxDim> x{};
  for (std::size_t n = 0; n < f.size(); ++n) {
    grid->coords(n, x);
    f.values_[n] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(grid->dim())));
  }
  return f;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {
void check_conforming(const Field& a, const Field& b) {
  if (a.size() != b.size() || !(a.grid_ptr() == b.grid_ptr() || a.grid().same_shape(b.grid())))
    throw std::invalid_argument("fields live on different grids");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
  check_conforming(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_conforming(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  check_conforming(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

FaceField::FaceField(GridPtr grid, int axis) : grid_(std::move(grid)), axis_(axis) {
  if (axis < 0 || axis >= grid_->dim()) throw std::invalid_argument("face axis out of range");
  values_.assign(grid_->face_size(axis), 0.0);
}

FaceField& FaceField::axpy(double s, const FaceField& other) {
  if (other.axis_ != axis_ || other.values_.size() != values_.size())
    throw std::invalid_argument("face fields do not conform");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

// ---------------------------------------------------------------------------

double integrate(const Field& f) {
  const auto w = f.grid().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

double inner(const Field& f, const Field& g) {
  check_conforming(f, g);
  const auto w = f.grid().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * g[i];
  return s;
}

double lp_norm_pow(const Field& f, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("lp_norm needs r >= 1");
  const auto w = f.grid().weights();
  double s = 0.0;
  if (r == 2.0) {
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * f[i];
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), r);
  }
  return s;
}

double lp_norm(const Field& f, double r) {
  const double s = lp_norm_pow(f, r);
  return r == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / r);
}

FaceField face_gradient(const Field& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("face_gradient axis out of range");
  FaceField s(f.grid_ptr(), axis);
  const double inv_h = 1.0 / g.spacing(axis);
  const std::size_t ns = g.stride(axis);
  const std::size_t fs = g.face_stride(axis, axis);
  const int n = g.nodes(axis);
  auto out = s.values();
  g.for_each_line(axis, [&](std::size_t nb, std::size_t fb, double) {
    for (int k = 1; k < n; ++k) out[fb + k * fs] = (f[nb + k * ns] - f[nb + (k - 1) * ns]) * inv_h;
  });
  return s;
}

double face_lp_norm_pow(const FaceField& s, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("face_lp_norm needs r >= 1");
  const auto w = s.grid().face_weights(s.axis());
  double acc = 0.0;
  if (r == 2.0) {
    for (std::size_t i = 0; i < s.size(); ++i) acc += w[i] * s[i] * s[i];
  } else {
    for (std::size_t i = 0; i < s.size(); ++i) acc += w[i] * std::pow(std::abs(s[i]), r);
  }
  return acc;
}

double face_lp_norm(const FaceField& s, double r) { return std::pow(face_lp_norm_pow(s, r), 1.0 / r); }

double face_inner(const FaceField& a, const FaceField& b) {
  if (a.axis() != b.axis() || a.size() != b.size()) throw std::invalid_argument("face fields do not conform");
  const auto w = a.grid().face_weights(a.axis());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

Field divergence(const FaceField& flux) {
  const Grid& g = flux.grid();
  const int axis = flux.axis();
  Field out(flux.grid_ptr());
  const std::size_t ns = g.stride(axis);
  const std::size_t fs = g.face_stride(axis, axis);
  const int n = g.nodes(axis);
  const double h = g.spacing(axis);
  g.for_each_line(axis, [&](std::size_t nb, std::size_t fb, double) {
    for (int k = 0; k < n; ++k) {
      const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
      out[nb + k * ns] = (flux[fb + (k + 1) * fs] - flux[fb + k * fs]) / w;
    }
  });
  return out;
}

Field face_to_node(const FaceField& s) {
  const Grid& g = s.grid();
  const int axis = s.axis();
  Field out(s.grid_ptr());
  const std::size_t ns = g.stride(axis);
  const std::size_t fs = g.face_stride(axis, axis);
  const int n = g.nodes(axis);
  g.for_each_line(axis, [&](std::size_t nb, std::size_t fb, double) {
    out[nb] = s[fb];
    for (int k = 1; k < n - 1; ++k) out[nb + k * ns] = 0.5 * (s[fb + k * fs] + s[fb + (k + 1) * fs]);
    out[nb + (n - 1) * ns] = s[fb + n * fs];
  });
  return out;
}

Field nodal_derivative(const Field& f, int axis) { return face_to_node(face_gradient(f, axis)); }

Field second_derivative(const Field& f, int axis) { return divergence(face_gradient(f, axis)); }

Field mixed_derivative(const Field& f, int i, int j) {
  if (i == j) return second_derivative(f, i);
  return nodal_derivative(nodal_derivative(f, i), j);
}

}  // namespace plap
