#include "fracdiff/tensor_field.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fracdiff {

Grid Grid::make(int dim, std::span<const double> lo, std::span<const double> hi,
                std::span<const int> intervals) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (static_cast<int>(lo.size()) < dim || static_cast<int>(hi.size()) < dim ||
      static_cast<int>(intervals.size()) < dim)
    throw std::invalid_argument("grid: need bounds and interval counts for every axis");
  Grid g;
  g.dim = dim;
  for (int k = 0; k < dim; ++k) {
    if (!(lo[k] < hi[k])) throw std::invalid_argument("grid: degenerate bounds, need a < b");
    if (intervals[k] < 2) throw std::invalid_argument("grid: need at least 2 intervals per axis");
    g.lo[k] = lo[k];
    g.hi[k] = hi[k];
    g.intervals[k] = intervals[k];
    g.h[k] = (hi[k] - lo[k]) / intervals[k];
  }
  return g;
}

Grid Grid::unit_box(int dim, int intervals_per_axis) {
  std::array<double, 3> lo{0.0, 0.0, 0.0}, hi{1.0, 1.0, 1.0};
  std::array<int, 3> n{intervals_per_axis, intervals_per_axis, intervals_per_axis};
  return make(dim, lo, hi, n);
}

std::size_t Grid::interior_size() const {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(intervals[k] - 1);
  return n;
}

std::array<int, 3> Grid::interior_shape() const {
  std::array<int, 3> s{1, 1, 1};
  for (int k = 0; k < dim; ++k) s[k] = intervals[k] - 1;
  return s;
}

TensorField::TensorField(const Grid& grid)
    : TensorField(grid.dim, grid.interior_shape(), grid.h) {}

TensorField::TensorField(int dim, std::array<int, 3> shape, std::array<double, 3> h)
    : dim_(dim), shape_(shape), h_(h) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("field dimension must be 1, 2 or 3");
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) {
    if (shape[k] < 1) throw std::invalid_argument("field shape must be positive");
    n *= static_cast<std::size_t>(shape[k]);
  }
  for (int k = dim; k < 3; ++k) shape_[k] = 1;
  v_.assign(n, 0.0);
}

std::size_t TensorField::offset(std::array<int, 3> idx) const {
  std::size_t off = 0;
  for (int k = 0; k < dim_; ++k) off = off * shape_[k] + static_cast<std::size_t>(idx[k]);
  return off;
}

bool TensorField::same_shape(const TensorField& other) const {
  return dim_ == other.dim_ && shape_ == other.shape_;
}

bool TensorField::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

TensorField& TensorField::operator+=(const TensorField& other) {
  if (!same_shape(other)) throw std::invalid_argument("field shape mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += other.v_[i];
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& other) {
  if (!same_shape(other)) throw std::invalid_argument("field shape mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= other.v_[i];
  return *this;
}

TensorField& TensorField::operator*=(double c) {
  for (double& x : v_) x *= c;
  return *this;
}

TensorField mode_apply(std::span<const double> w, int w_side, const TensorField& r, int axis) {
  if (axis < 0 || axis >= r.dim()) throw std::invalid_argument("mode_apply: axis out of range");
  const int n = r.shape()[axis];
  if (w_side != n || w.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("mode_apply: matrix side does not match axis length");

  // View the array as (outer, n, inner) with inner contiguous.
  std::size_t inner = 1, outer = 1;
  for (int k = axis + 1; k < r.dim(); ++k) inner *= r.shape()[k];
  for (int k = 0; k < axis; ++k) outer *= r.shape()[k];

  TensorField out(r.dim(), r.shape(), r.mesh());
  const double* src = r.data();
  double* dst = out.data();
  for (std::size_t o = 0; o < outer; ++o) {
    const double* sblk = src + o * n * inner;
    double* dblk = dst + o * n * inner;
    for (int i = 0; i < n; ++i) {
      double* drow = dblk + static_cast<std::size_t>(i) * inner;
      const double* wrow = w.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) {
        const double wij = wrow[j];
        if (wij == 0.0) continue;
        const double* srow = sblk + static_cast<std::size_t>(j) * inner;
        for (std::size_t t = 0; t < inner; ++t) drow[t] += wij * srow[t];
      }
    }
  }
  return out;
}

TensorField hadamard(const TensorField& a, const TensorField& r) {
  if (!a.same_shape(r)) throw std::invalid_argument("hadamard: shape mismatch");
  TensorField out = r;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= a[i];
  return out;
}

double discrete_l2_norm(const TensorField& e) {
  double w = 1.0;
  for (int k = 0; k < e.dim(); ++k) w *= e.mesh()[k];
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * e[i];
  return std::sqrt(w * s);
}

double discrete_max_norm(const TensorField& e) {
  double m = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) m = std::max(m, std::abs(e[i]));
  return m;
}

}  // namespace fracdiff
