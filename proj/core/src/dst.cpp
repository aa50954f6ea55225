#include "fracdiff/dst.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <new>
#include <numbers>
#include <stdexcept>

namespace fracdiff {

namespace {

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  double* p = nullptr;
  explicit FftwBuffer(std::size_t n) {
    p = static_cast<double*>(fftw_malloc(n * sizeof(double)));
    if (!p) throw std::bad_alloc();
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  ~FftwBuffer() { fftw_free(p); }
};

}  // namespace

std::vector<double> sine_matrix(int n_intervals) {
  if (n_intervals < 2) throw std::invalid_argument("sine_matrix: need N >= 2");
  const int m = n_intervals - 1;
  std::vector<double> p(static_cast<std::size_t>(m) * m);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      p[static_cast<std::size_t>(i - 1) * m + (j - 1)] =
          std::sin(i * j * std::numbers::pi / n_intervals);
  return p;
}

std::vector<double> dst_1d_dense(std::span<const double> x) {
  const int m = static_cast<int>(x.size());
  const int n = m + 1;
  std::vector<double> y(m, 0.0);
  for (int i = 1; i <= m; ++i) {
    double acc = 0.0;
    for (int j = 1; j <= m; ++j)
      acc += std::sin(i * j * std::numbers::pi / n) * x[j - 1];
    y[i - 1] = acc;
  }
  return y;
}

std::vector<double> idst_1d_dense(std::span<const double> y) {
  auto x = dst_1d_dense(y);
  const double scale = 2.0 / (y.size() + 1);
  for (double& v : x) v *= scale;
  return x;
}

struct DstPlan::Impl {
  int dim = 0;
  std::array<int, 3> intervals{};
  std::array<int, 3> shape{};  // interior sizes N_k - 1
  std::size_t total = 1;
  double forward_scale = 1.0;  // RODFT00 computes 2P, one factor 1/2 per axis
  double inverse_scale = 1.0;  // P^{-1} = (2/N) P, so 1/N per axis overall
  FftwBuffer buf;              // planning buffer, also the alignment reference
  std::array<fftw_plan, 3> plans{nullptr, nullptr, nullptr};

  Impl(int d, std::array<int, 3> n)
      : dim(d), intervals(n), buf((init_shape(n, d), total)) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (int k = 0; k < dim; ++k) {
      std::ptrdiff_t inner = 1, outer = 1;
      for (int a = k + 1; a < dim; ++a) inner *= shape[a];
      for (int a = 0; a < k; ++a) outer *= shape[a];

      fftw_iodim64 tdim{shape[k], inner, inner};
      fftw_iodim64 loops[2] = {{outer, static_cast<std::ptrdiff_t>(shape[k]) * inner,
                                static_cast<std::ptrdiff_t>(shape[k]) * inner},
                               {inner, 1, 1}};
      fftw_r2r_kind kind = FFTW_RODFT00;
      plans[k] = fftw_plan_guru64_r2r(1, &tdim, 2, loops, buf.p, buf.p, &kind,
                                      FFTW_ESTIMATE);
      if (!plans[k]) throw std::runtime_error("fftw plan creation failed");
    }
  }

  // Fills shape/total/scales before the buffer is allocated.
  int init_shape(std::array<int, 3> n, int d) {
    total = 1;
    forward_scale = 1.0;
    inverse_scale = 1.0;
    for (int k = 0; k < 3; ++k) shape[k] = 1;
    for (int k = 0; k < d; ++k) {
      if (n[k] < 2) throw std::invalid_argument("dst plan: need N >= 2 per axis");
      shape[k] = n[k] - 1;
      total *= static_cast<std::size_t>(shape[k]);
      forward_scale *= 0.5;
      inverse_scale /= n[k];
    }
    return 0;
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (fftw_plan p : plans)
      if (p) fftw_destroy_plan(p);
  }

  TensorField transform(const TensorField& r, double scale) const {
    if (r.dim() != dim) throw std::invalid_argument("dst: field dimension mismatch");
    for (int k = 0; k < dim; ++k)
      if (r.shape()[k] != shape[k]) throw std::invalid_argument("dst: field shape mismatch");
    FftwBuffer scratch(total);
    std::memcpy(scratch.p, r.data(), total * sizeof(double));
    for (int k = 0; k < dim; ++k) fftw_execute_r2r(plans[k], scratch.p, scratch.p);
    TensorField out(dim, r.shape(), r.mesh());
    for (std::size_t i = 0; i < total; ++i) out[i] = scale * scratch.p[i];
    return out;
  }
};

DstPlan::DstPlan(const Grid& grid) : DstPlan(grid.dim, grid.intervals) {}

DstPlan::DstPlan(int dim, std::array<int, 3> intervals)
    : impl_(std::make_shared<const Impl>(dim, intervals)) {}

TensorField DstPlan::forward(const TensorField& r) const {
  return impl_->transform(r, impl_->forward_scale);
}

TensorField DstPlan::inverse(const TensorField& r) const {
  return impl_->transform(r, impl_->inverse_scale);
}

int DstPlan::dim() const { return impl_->dim; }
const std::array<int, 3>& DstPlan::intervals() const { return impl_->intervals; }

std::vector<double> dst_1d(std::span<const double> x) {
  const int n = static_cast<int>(x.size()) + 1;
  DstPlan plan(1, {n, 2, 2});
  TensorField f(1, {n - 1, 1, 1}, {1.0, 1.0, 1.0});
  std::copy(x.begin(), x.end(), f.data());
  return plan.forward(f).values();
}

std::vector<double> idst_1d(std::span<const double> y) {
  const int n = static_cast<int>(y.size()) + 1;
  DstPlan plan(1, {n, 2, 2});
  TensorField f(1, {n - 1, 1, 1}, {1.0, 1.0, 1.0});
  std::copy(y.begin(), y.end(), f.data());
  return plan.inverse(f).values();
}

}  // namespace fracdiff
