#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace fracdiff {

/// Uniform tensor-product grid on a rectangular box in 1, 2 or 3 dimensions.
/// Only interior nodes carry unknowns; boundary values are pinned to zero by
/// the homogeneous Dirichlet condition and never stored.
struct Grid {
  int dim = 1;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  std::array<int, 3> intervals{};  // N_k, number of mesh intervals per axis
  std::array<double, 3> h{};       // (hi-lo)/N_k, derived

  static Grid make(int dim, std::span<const double> lo, std::span<const double> hi,
                   std::span<const int> intervals);

  /// (0,1)^dim with the same interval count on every axis.
  static Grid unit_box(int dim, int intervals_per_axis);

  int interior(int axis) const { return intervals[axis] - 1; }
  std::size_t interior_size() const;
  std::array<int, 3> interior_shape() const;

  /// Coordinate of node i on an axis, i = 1..N_k-1 for interior nodes.
  double node(int axis, int i) const { return lo[axis] + i * h[axis]; }
};

}  // namespace fracdiff
