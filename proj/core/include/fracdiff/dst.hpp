#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fracdiff/tensor_field.hpp"

namespace fracdiff {

/// The type-I sine matrix P with P_ij = sin(ij*pi/N), i,j = 1..N-1, row-major.
/// P is symmetric and P^{-1} = (2/N) P.
std::vector<double> sine_matrix(int n_intervals);

/// Dense O(N^2) reference transforms, kept as the oracle for the fast path.
std::vector<double> dst_1d_dense(std::span<const double> x);
std::vector<double> idst_1d_dense(std::span<const double> y);

/// Reusable d-dimensional DST-I plan. The forward transform is the plain
/// unnormalized sine sum (the matrix P applied on every axis); the inverse
/// carries the 2/N_k factors. Plans are immutable after creation and safe to
/// share across threads; every call uses its own scratch buffer.
class DstPlan {
 public:
  explicit DstPlan(const Grid& grid);
  DstPlan(int dim, std::array<int, 3> intervals);

  TensorField forward(const TensorField& r) const;
  TensorField inverse(const TensorField& r) const;

  int dim() const;
  const std::array<int, 3>& intervals() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// One-shot 1D transforms (fast path); build a DstPlan when transforming many
/// vectors of the same length.
std::vector<double> dst_1d(std::span<const double> x);
std::vector<double> idst_1d(std::span<const double> y);

}  // namespace fracdiff
