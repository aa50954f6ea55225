#include <benchmark/benchmark.h>

#include "fracdiff/problems.hpp"

namespace {

void BM_FastL1Step2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  using namespace fracdiff;
  ProblemSpec p = example_manufactured_evolve(TimeProfile::Linear, 0.8, 0.8);
  const Grid grid = p.grid(n);
  const double dt = 1e-3;
  OperatorSpec op{p.kind, p.rhs, p.s, p.gamma, p.kappa};
  FastL1Stepper stepper(grid, op, p.alpha, dt, p.horizon);
  stepper.set_initial(sample_field(grid, [&](std::array<double, 3> x) { return p.u0(x); }));
  TensorField f = assemble_rhs(grid, p.rhs,
                               [&](std::array<double, 3> x) { return p.f(x, dt); });
  for (auto _ : state) {
    stepper.advance(f);
    benchmark::DoNotOptimize(stepper.current().data());
  }
  state.SetComplexityN(static_cast<long>(n) * n);
}
BENCHMARK(BM_FastL1Step2d)->RangeMultiplier(2)->Range(1 << 5, 1 << 9)->Complexity();

}  // namespace

BENCHMARK_MAIN();
