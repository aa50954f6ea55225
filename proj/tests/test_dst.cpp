#include <cmath>
#include <future>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracdiff/dst.hpp"

using namespace fracdiff;

namespace {

TensorField random_field(const Grid& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  TensorField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

double max_diff(const TensorField& a, const TensorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("sine matrix is symmetric and P^2 = (N/2) I") {
  const int N = 9;
  const int m = N - 1;
  auto p = sine_matrix(N);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      CHECK(p[i * m + j] == doctest::Approx(p[j * m + i]).epsilon(1e-14));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += p[i * m + k] * p[k * m + j];
      CHECK(acc == doctest::Approx(i == j ? N / 2.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("dense 1D transform pair is an exact inverse") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(12);
  for (double& v : x) v = dist(rng);
  auto y = dst_1d_dense(x);
  auto back = idst_1d_dense(y);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("fast 1D transform matches the dense sine sum") {
  for (int N : {2, 3, 8, 17, 64}) {
    std::mt19937 rng(N);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(N - 1);
    for (double& v : x) v = dist(rng);
    auto fast = dst_1d(x);
    auto dense = dst_1d_dense(x);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(fast[i] == doctest::Approx(dense[i]).epsilon(1e-12));
    auto fast_inv = idst_1d(x);
    auto dense_inv = idst_1d_dense(x);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(fast_inv[i] == doctest::Approx(dense_inv[i]).epsilon(1e-12));
  }
}

TEST_CASE("multidimensional transform matches the dense sine-matrix composition") {
  // forward = P applied along every axis; verified on anisotropic shapes
  std::array<int, 3> intervals{8, 7, 6};
  for (int d = 1; d <= 3; ++d) {
    Grid g = Grid::make(d, std::array<double, 3>{0, 0, 0}, std::array<double, 3>{1, 1, 1},
                        intervals);
    DstPlan plan(g);
    TensorField r = random_field(g, 20 + d);

    TensorField want = r;
    for (int axis = 0; axis < d; ++axis) {
      auto p = sine_matrix(g.intervals[axis]);
      want = mode_apply(p, g.intervals[axis] - 1, want, axis);
    }
    TensorField got = plan.forward(r);
    CHECK(max_diff(got, want) < 1e-12);

    // inverse carries the product of 2/N_k factors
    TensorField back = plan.inverse(got);
    CHECK(max_diff(back, r) < 1e-12);
  }
}

TEST_CASE("roundtrip inverse-then-forward is the identity too") {
  Grid g = Grid::make(3, std::array<double, 3>{0, 0, 0}, std::array<double, 3>{1, 1, 1},
                      std::array<int, 3>{9, 5, 12});
  DstPlan plan(g);
  TensorField r = random_field(g, 31);
  CHECK(max_diff(plan.forward(plan.inverse(r)), r) < 1e-12);
}

TEST_CASE("transform is linear") {
  Grid g = Grid::unit_box(2, 9);
  DstPlan plan(g);
  TensorField a = random_field(g, 40), b = random_field(g, 41);
  TensorField combo = a;
  combo *= 2.0;
  combo += b;
  TensorField fa = plan.forward(a), fb = plan.forward(b);
  fa *= 2.0;
  fa += fb;
  CHECK(max_diff(plan.forward(combo), fa) < 1e-12);
}

TEST_CASE("plan rejects mismatched fields") {
  DstPlan plan(Grid::unit_box(2, 8));
  TensorField wrong_dim(Grid::unit_box(3, 8));
  CHECK_THROWS_AS(plan.forward(wrong_dim), std::invalid_argument);
  TensorField wrong_shape(Grid::unit_box(2, 9));
  CHECK_THROWS_AS(plan.forward(wrong_shape), std::invalid_argument);
}

TEST_CASE("a shared plan gives identical results across threads") {
  Grid g = Grid::unit_box(2, 32);
  DstPlan plan(g);
  std::vector<TensorField> inputs;
  std::vector<TensorField> serial;
  for (int i = 0; i < 8; ++i) {
    inputs.push_back(random_field(g, 50 + i));
    serial.push_back(plan.forward(inputs.back()));
  }
  std::vector<std::future<TensorField>> jobs;
  for (int i = 0; i < 8; ++i)
    jobs.push_back(std::async(std::launch::async, [&, i] { return plan.forward(inputs[i]); }));
  for (int i = 0; i < 8; ++i) {
    TensorField got = jobs[i].get();
    CHECK(max_diff(got, serial[i]) == 0.0);
  }
}

TEST_CASE("plan construction validates interval counts") {
  CHECK_THROWS_AS(DstPlan(2, std::array<int, 3>{4, 1, 1}), std::invalid_argument);
}
