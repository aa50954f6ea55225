#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fracdiff/grid.hpp"

namespace fracdiff {

/// d-dimensional array of interior nodal values. Storage is row-major with
/// the last axis contiguous, so pencil transforms on the trailing axis walk
/// unit stride.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& grid);
  TensorField(int dim, std::array<int, 3> shape, std::array<double, 3> h);

  int dim() const { return dim_; }
  const std::array<int, 3>& shape() const { return shape_; }
  const std::array<double, 3>& mesh() const { return h_; }
  std::size_t size() const { return v_.size(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  /// Linear offset of a multi-index over the interior array (0-based per axis).
  std::size_t offset(std::array<int, 3> idx) const;

  bool same_shape(const TensorField& other) const;
  bool all_finite() const;

  TensorField& operator+=(const TensorField& other);
  TensorField& operator-=(const TensorField& other);
  TensorField& operator*=(double c);

 private:
  int dim_ = 0;
  std::array<int, 3> shape_{};
  std::array<double, 3> h_{};
  std::vector<double> v_;
};

/// (W (x)_k R): applies the dense (N_k-1)x(N_k-1) matrix w along one axis,
/// leaving the other axes untouched.
TensorField mode_apply(std::span<const double> w, int w_side, const TensorField& r, int axis);

/// Entrywise product of two identically shaped arrays.
TensorField hadamard(const TensorField& a, const TensorField& r);

/// sqrt(prod_k h_k * sum e^2) over interior nodes.
double discrete_l2_norm(const TensorField& e);

/// Maximum absolute entry.
double discrete_max_norm(const TensorField& e);

}  // namespace fracdiff
