#include "fracdiff/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracdiff {

namespace {

constexpr double pi = std::numbers::pi;

double sine_product(const std::array<double, 3>& x, int dim, int mode_n) {
  double p = 1.0;
  for (int k = 0; k < dim; ++k) p *= std::sin(mode_n * pi * x[k]);
  return p;
}

// Signed fractional power: sign(c) |c|^p, continuous through c = 0.
double signed_pow(double c, double p) {
  if (c == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(c), p), c);
}

}  // namespace

Grid ProblemSpec::grid(int intervals_per_axis) const {
  std::array<int, 3> n{intervals_per_axis, intervals_per_axis, intervals_per_axis};
  if (dim == 2 && hi[0] - lo[0] != hi[1] - lo[1]) {
    // keep the mesh size uniform on anisotropic boxes
    const double h = (hi[0] - lo[0]) / intervals_per_axis;
    n[1] = static_cast<int>(std::lround((hi[1] - lo[1]) / h));
  }
  return Grid::make(dim, lo, hi, n);
}

double caputo_power(double mu, double alpha, double t) {
  if (mu <= 0.0) return 0.0;
  return std::tgamma(mu + 1.0) / std::tgamma(mu + 1.0 - alpha) * std::pow(t, mu - alpha);
}

ProblemSpec example_smooth_steady(int dim, int mode_n, double s, double gamma,
                                  Discretization kind) {
  ProblemSpec p;
  p.name = "smooth-steady";
  p.dim = dim;
  for (int k = 0; k < dim; ++k) {
    p.lo[k] = 0.0;
    p.hi[k] = 1.0;
  }
  p.kind = kind;
  p.rhs = (kind == Discretization::FemLinear) ? RhsMode::LoadLumped : RhsMode::Nodal;
  p.steady = true;
  p.s = s;
  p.gamma = gamma;
  p.kappa = 1.0;
  const double lam = dim * mode_n * mode_n * pi * pi + gamma;
  const double amp = std::pow(lam, -s);
  p.exact = [dim, mode_n, amp](std::array<double, 3> x, double) {
    return amp * sine_product(x, dim, mode_n);
  };
  p.f = [dim, mode_n](std::array<double, 3> x, double) {
    return sine_product(x, dim, mode_n);
  };
  return p;
}

ProblemSpec example_singular_steady(Discretization kind, double s) {
  ProblemSpec p;
  p.name = "singular-steady";
  p.dim = 2;
  p.lo = {0.0, 0.0, 0.0};
  p.hi = {1.0, 1.0, 1.0};
  p.kind = kind;
  p.rhs = (kind == Discretization::FemLinear) ? RhsMode::LoadLumped : RhsMode::Nodal;
  p.steady = true;
  p.s = s;
  p.gamma = 1.0;
  p.kappa = 1.0;
  p.f = [](std::array<double, 3>, double) { return 1.0; };
  return p;
}

ProblemSpec example_stripe_steady(double s) {
  ProblemSpec p;
  p.name = "stripe-steady";
  p.dim = 2;
  p.lo = {-5.0, -0.5, 0.0};
  p.hi = {5.0, 0.5, 0.0};
  p.kind = Discretization::Cdm4;
  p.rhs = RhsMode::Nodal;
  p.steady = true;
  p.s = s;
  p.gamma = 0.0;
  p.kappa = 1.0;
  const double amp = std::pow(2.0, 2.0 * s) * std::tgamma(1.0 + s);
  const double pw = 2.0 * s / 5.0;
  p.f = [amp, pw](std::array<double, 3> x, double) {
    const double ax = -pi / 3.0 * x[0] + pi / 5.0 * x[1];
    const double bx = pi / 5.0 * x[0] - pi / 3.0 * x[1];
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return amp * (signed_pow(std::cos(ax), pw) + signed_pow(std::sin(bx), pw)) *
           (std::cos(-r2) + 1.2 * std::sin(-r2));
  };
  return p;
}

ProblemSpec example_manufactured_evolve(TimeProfile g, double s, double alpha,
                                        Discretization kind) {
  ProblemSpec p;
  p.name = (g == TimeProfile::Linear) ? "evolve-linear" : "evolve-power";
  p.dim = 2;
  p.lo = {0.0, 0.0, 0.0};
  p.hi = {1.0, 1.0, 0.0};
  p.kind = kind;
  p.rhs = (kind == Discretization::FemLinear) ? RhsMode::LoadLumped : RhsMode::Nodal;
  p.steady = false;
  p.s = s;
  p.gamma = 1.0;
  p.kappa = 0.1;
  p.alpha = alpha;
  p.horizon = 1.0;
  const double lam = 2.0 * pi * pi + 1.0;
  const double amp = std::pow(lam, -s);
  const double mu = (g == TimeProfile::Linear) ? 1.0 : 1.5;
  const double kappa = p.kappa;
  p.u0 = [](std::array<double, 3>) { return 0.0; };
  p.exact = [amp, mu](std::array<double, 3> x, double t) {
    return amp * std::pow(t, mu) * sine_product(x, 2, 1);
  };
  // f = D_t^alpha u + kappa (lam)^s u, both proportional to the sine mode
  p.f = [amp, mu, alpha, kappa](std::array<double, 3> x, double t) {
    const double coef = amp * caputo_power(mu, alpha, t) + kappa * std::pow(t, mu);
    return coef * sine_product(x, 2, 1);
  };
  return p;
}

EvolveResult run_evolution(const ProblemSpec& problem, const Grid& grid, double dt,
                           int n_steps, std::span<const double> snapshot_times) {
  if (problem.steady) throw std::invalid_argument("run_evolution: steady problem");
  if (n_steps < 1) throw std::invalid_argument("run_evolution: need at least one step");
  OperatorSpec op{problem.kind, problem.rhs, problem.s, problem.gamma, problem.kappa};
  FastL1Stepper stepper(grid, op, problem.alpha, dt, problem.horizon);
  if (!problem.u0) throw std::invalid_argument("run_evolution: missing initial data");
  stepper.set_initial(sample_field(grid, [&](std::array<double, 3> x) {
    return problem.u0(x);
  }));

  std::vector<int> snap_steps(snapshot_times.size());
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    int n = static_cast<int>(std::lround(snapshot_times[i] / dt));
    snap_steps[i] = std::clamp(n, 1, n_steps);
  }

  EvolveResult result;
  const auto t_start = std::chrono::steady_clock::now();
  for (int n = 1; n <= n_steps; ++n) {
    const double t = n * dt;
    TensorField f = assemble_rhs(grid, problem.rhs,
                                 [&](std::array<double, 3> x) { return problem.f(x, t); });
    const TensorField& u = stepper.advance(f);
    for (std::size_t i = 0; i < snap_steps.size(); ++i)
      if (snap_steps[i] == n) result.snapshots.emplace_back(t, u);
  }
  const auto t_end = std::chrono::steady_clock::now();
  result.final_field = stepper.current();
  result.steps = n_steps;
  result.seconds_per_step =
      std::chrono::duration<double>(t_end - t_start).count() / n_steps;
  return result;
}

double field_error(const TensorField& u, const ProblemSpec& problem, const Grid& grid,
                   double t, bool max_norm) {
  if (!problem.exact) throw std::invalid_argument("field_error: problem has no exact solution");
  TensorField e = sample_field(grid, [&](std::array<double, 3> x) {
    return problem.exact(x, t);
  });
  e -= u;
  return max_norm ? discrete_max_norm(e) : discrete_l2_norm(e);
}

}  // namespace fracdiff
