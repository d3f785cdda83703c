#pragma once

// Axis-aligned box domains, tensor grids with trapezoid quadrature, nodal
// fields and staggered face fields.
//
// Node layout is axis-0 fastest. Along an axis with N nodes a face field has
// N + 1 entries: face 0 and face N are the boundary faces (located at the
// boundary nodes), face k (1 <= k <= N-1) sits midway between nodes k-1 and k.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace plap {

inline constexpr int kMaxDim = 3;

struct Bounds {
  double low = 0.0;
  double high = 1.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

using NodeIndex = std::array<int, kMaxDim>;

class Grid {
 public:
  int dim() const { return dim_; }
  int nodes(int axis) const { return nodes_[axis]; }
  std::span<const int> nodes_per_axis() const { return {nodes_.data(), static_cast<std::size_t>(dim_)}; }
  Bounds bounds(int axis) const { return bounds_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double min_spacing() const;
  double volume() const;

  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[axis]; }
  NodeIndex unflatten(std::size_t node) const;
  double coord(int axis, int k) const { return bounds_[axis].low + k * spacing_[axis]; }
  void coords(std::size_t node, std::span<double> x) const;

  // 1D trapezoid weight of node k along an axis.
  double axis_weight(int axis, int k) const;
  std::span<const double> weights() const { return weights_; }

  // Face arrays along `axis`: (N_axis + 1) x (transverse nodes).
  std::size_t face_size(int axis) const { return face_size_[axis]; }
  std::size_t face_stride(int axis, int along) const { return face_stride_[axis][along]; }
  std::span<const double> face_weights(int axis) const { return face_weights_[axis]; }

  // Calls fn(node_base, face_base, line_weight) once per grid line parallel
  // to `axis`. node_base + k*stride(axis) walks the nodes of the line,
  // face_base + k*face_stride(axis, axis) walks its faces, and line_weight
  // is the product of transverse trapezoid weights.
  void for_each_line(int axis, const std::function<void(std::size_t, std::size_t, double)>& fn) const;

  bool same_shape(const Grid& other) const;

 private:
  friend std::shared_ptr<const Grid> build_grid(int, std::vector<int>, std::vector<Bounds>);
  Grid() = default;

  int dim_ = 0;
  std::array<int, kMaxDim> nodes_{1, 1, 1};
  std::array<Bounds, kMaxDim> bounds_{};
  std::array<double, kMaxDim> spacing_{1.0, 1.0, 1.0};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t size_ = 0;
  std::vector<double> weights_;
  std::array<std::size_t, kMaxDim> face_size_{};
  std::array<std::array<std::size_t, kMaxDim>, kMaxDim> face_stride_{};
  std::array<std::vector<double>, kMaxDim> face_weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(int dim, std::vector<int> nodes_per_axis, std::vector<Bounds> bounds);

/// Nodal scalar field, one value per grid node.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);

  static Field constant(GridPtr grid, double value);
  static Field from_function(GridPtr grid, const std::function<double(std::span<const double>)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;
  double max_abs() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  // this += s * other
  Field& axpy(double s, const Field& other);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Staggered field along one axis; carrier for face gradients and fluxes.
class FaceField {
 public:
  FaceField() = default;
  FaceField(GridPtr grid, int axis);

  int axis() const { return axis_; }
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  FaceField& axpy(double s, const FaceField& other);

 private:
  GridPtr grid_;
  int axis_ = 0;
  std::vector<double> values_;
};

double integrate(const Field& f);
/// Quadrature inner product of two nodal fields.
double inner(const Field& f, const Field& g);
double lp_norm(const Field& f, double r);
/// Quadrature of |f|^r over the domain (the r-th power of lp_norm).
double lp_norm_pow(const Field& f, double r);

FaceField face_gradient(const Field& f, int axis);
/// Sum over interior faces of |s|^r times the face weight.
double face_lp_norm_pow(const FaceField& s, double r);
double face_lp_norm(const FaceField& s, double r);
double face_inner(const FaceField& a, const FaceField& b);

/// Nodal divergence of a face field along its axis. Boundary nodes use the
/// half control volume; with zero boundary faces the result integrates to 0.
Field divergence(const FaceField& flux);

/// Interior nodes average the two adjacent faces; boundary nodes take the
/// boundary face value.
Field face_to_node(const FaceField& s);

/// Nodal first derivative built by face-gradient composition.
Field nodal_derivative(const Field& f, int axis);

/// D_axis D_axis f via divergence of the face gradient (zero-flux boundary).
Field second_derivative(const Field& f, int axis);

/// D_j D_i f. For i == j this is second_derivative; otherwise the nodal
/// derivative along j of the nodal derivative along i.
Field mixed_derivative(const Field& f, int i, int j);

}  // namespace plap
