#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracdiff/problems.hpp"

using namespace fracdiff;

namespace {

// Caputo derivative of t^mu by quadrature: with y = (t - r)^{1-alpha} the
// endpoint singularity disappears and the midpoint rule converges fast.
double caputo_quadrature(double mu, double alpha, double t) {
  const int q = 200000;
  const double ymax = std::pow(t, 1.0 - alpha);
  double acc = 0.0;
  for (int i = 0; i < q; ++i) {
    const double y = (i + 0.5) * ymax / q;
    const double r = t - std::pow(y, 1.0 / (1.0 - alpha));
    acc += mu * std::pow(r, mu - 1.0);
  }
  acc *= ymax / q / (1.0 - alpha);
  return acc / std::tgamma(1.0 - alpha);
}

}  // namespace

TEST_CASE("analytic Caputo power rule matches direct quadrature") {
  for (auto [mu, alpha, t] : {std::array<double, 3>{1.0, 0.4, 0.7},
                              std::array<double, 3>{1.5, 0.8, 1.0},
                              std::array<double, 3>{2.0, 0.6, 0.5}}) {
    CHECK(caputo_power(mu, alpha, t) ==
          doctest::Approx(caputo_quadrature(mu, alpha, t)).epsilon(1e-6));
  }
}

TEST_CASE("constant functions have zero Caputo derivative") {
  CHECK(caputo_power(0.0, 0.5, 1.0) == 0.0);
}

TEST_CASE("smooth steady problem satisfies its own equation") {
  // f equals (d n^2 pi^2 + gamma)^s times the exact solution
  for (int dim : {1, 2, 3}) {
    ProblemSpec p = example_smooth_steady(dim, 2, 0.6, 1.0, Discretization::Cdm4);
    const double lam = dim * 4.0 * std::numbers::pi * std::numbers::pi + 1.0;
    std::array<double, 3> x{0.13, 0.41, 0.77};
    CHECK(p.f(x, 0.0) ==
          doctest::Approx(std::pow(lam, 0.6) * p.exact(x, 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("smooth steady problem converges at the expected order") {
  ProblemSpec p = example_smooth_steady(2, 1, 0.5, 0.0, Discretization::Cdm4);
  double prev = 0.0;
  for (int i = 0; i < 2; ++i) {
    const int n = 8 << i;
    const Grid grid = p.grid(n);
    DstPlan plan(grid);
    OperatorSpec op{p.kind, p.rhs, p.s, p.gamma, p.kappa};
    TensorField b = assemble_rhs(grid, p.rhs,
                                 [&](std::array<double, 3> x) { return p.f(x, 0.0); });
    TensorField u = solve_steady(b, grid, op, plan);
    const double e = field_error(u, p, grid, 0.0, false);
    if (i > 0) CHECK(std::log2(prev / e) == doctest::Approx(4.0).epsilon(0.05));
    prev = e;
  }
}

TEST_CASE("anisotropic boxes keep a uniform mesh size") {
  ProblemSpec p = example_stripe_steady(0.5);
  Grid g = p.grid(100);
  CHECK(g.intervals[0] == 100);
  CHECK(g.intervals[1] == 10);
  CHECK(g.h[0] == doctest::Approx(g.h[1]));
}

TEST_CASE("stripe source stays finite across the sign changes") {
  ProblemSpec p = example_stripe_steady(0.3);
  Grid g = p.grid(200);
  TensorField f = sample_field(g, [&](std::array<double, 3> x) { return p.f(x, 0.0); });
  CHECK(f.all_finite());
  // signed fractional powers: odd symmetry through the zero of the argument
  const double pw = 2.0 * 0.3 / 5.0;
  auto sp = [&](double c) { return c == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(c), pw), c); };
  CHECK(sp(-0.25) == doctest::Approx(-sp(0.25)));
  CHECK(sp(0.0) == 0.0);
}

TEST_CASE("stripe solve produces a bounded field") {
  ProblemSpec p = example_stripe_steady(0.8);
  Grid g = p.grid(200);
  DstPlan plan(g);
  OperatorSpec op{p.kind, p.rhs, p.s, p.gamma, p.kappa};
  TensorField b = assemble_rhs(g, p.rhs, [&](std::array<double, 3> x) { return p.f(x, 0.0); });
  TensorField u = solve_steady(b, g, op, plan);
  CHECK(u.all_finite());
  CHECK(discrete_max_norm(u) > 0.0);
  CHECK(discrete_max_norm(u) < 100.0);
}

TEST_CASE("manufactured evolution starts from zero and matches its own source") {
  ProblemSpec p = example_manufactured_evolve(TimeProfile::Power15, 0.8, 0.6);
  std::array<double, 3> x{0.3, 0.6, 0.0};
  CHECK(p.u0(x) == 0.0);
  CHECK(p.exact(x, 0.0) == 0.0);
  // f = (caputo(g)/lam^s + kappa g) * sine product
  const double lam = 2.0 * std::numbers::pi * std::numbers::pi + 1.0;
  const double t = 0.7;
  const double want = (caputo_power(1.5, 0.6, t) / std::pow(lam, 0.8) +
                       0.1 * std::pow(t, 1.5)) *
                      std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
  CHECK(p.f(x, t) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("evolution driver reaches the manufactured solution") {
  ProblemSpec p = example_manufactured_evolve(TimeProfile::Linear, 1.0, 0.8);
  Grid g = p.grid(16);
  EvolveResult r = run_evolution(p, g, 1.0 / 200, 200);
  CHECK(r.steps == 200);
  const double e = field_error(r.final_field, p, g, 1.0, true);
  CHECK(e < 5e-5);
  CHECK(r.seconds_per_step >= 0.0);
}

TEST_CASE("snapshot requests attach to the nearest step") {
  ProblemSpec p = example_manufactured_evolve(TimeProfile::Linear, 0.5, 0.5);
  Grid g = p.grid(8);
  std::vector<double> times{0.25, 1.0};
  EvolveResult r = run_evolution(p, g, 0.1, 10, times);
  REQUIRE(r.snapshots.size() == 2);
  CHECK(r.snapshots[0].first == doctest::Approx(0.3).epsilon(0.5));
  CHECK(r.snapshots[1].first == doctest::Approx(1.0));
  double m = 0.0;
  for (std::size_t i = 0; i < r.final_field.size(); ++i)
    m = std::max(m, std::abs(r.final_field[i] - r.snapshots[1].second[i]));
  CHECK(m == 0.0);
}

TEST_CASE("error evaluation requires an exact solution") {
  ProblemSpec p = example_singular_steady(Discretization::FemLinear, 0.5);
  Grid g = p.grid(8);
  TensorField u(g);
  CHECK_THROWS_AS(field_error(u, p, g, 0.0, false), std::invalid_argument);
  CHECK_THROWS_AS(run_evolution(p, g, 0.1, 10), std::invalid_argument);
}
