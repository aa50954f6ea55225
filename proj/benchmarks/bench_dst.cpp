#include <benchmark/benchmark.h>

#include <cmath>

#include "fracdiff/dst.hpp"

namespace {

void BM_Dst1d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fracdiff::Grid grid = fracdiff::Grid::unit_box(1, n);
  fracdiff::DstPlan plan(grid);
  fracdiff::TensorField u(grid);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(0.37 * (i + 1));
  for (auto _ : state) {
    fracdiff::TensorField v = plan.forward(u);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Dst1d)->RangeMultiplier(2)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Dst2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fracdiff::Grid grid = fracdiff::Grid::unit_box(2, n);
  fracdiff::DstPlan plan(grid);
  fracdiff::TensorField u(grid);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(0.37 * (i + 1));
  for (auto _ : state) {
    fracdiff::TensorField v = plan.forward(u);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetComplexityN(static_cast<long>(n) * n);
}
BENCHMARK(BM_Dst2d)->RangeMultiplier(2)->Range(1 << 5, 1 << 10)->Complexity();

}  // namespace

BENCHMARK_MAIN();
