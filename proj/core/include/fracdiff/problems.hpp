#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fracdiff/fast_l1.hpp"
#include "fracdiff/spectral.hpp"

namespace fracdiff {

using SpaceFn = std::function<double(std::array<double, 3>)>;
using SpaceTimeFn = std::function<double(std::array<double, 3>, double)>;

/// Full description of one diffusion problem: domain, coefficients,
/// discretization choice and data callbacks. Grid resolution is supplied
/// separately so one spec can drive a whole convergence sweep.
struct ProblemSpec {
  std::string name;
  int dim = 1;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  Discretization kind = Discretization::Cdm4;
  RhsMode rhs = RhsMode::Nodal;
  bool steady = true;
  double s = 0.5;
  double gamma = 0.0;
  double kappa = 1.0;
  double alpha = 0.5;  // time-fractional order, ignored for steady problems
  double horizon = 1.0;
  SpaceFn u0;            // initial data (time-dependent problems)
  SpaceTimeFn f;         // source term
  SpaceTimeFn exact;     // optional manufactured solution

  Grid grid(int intervals_per_axis) const;
};

/// Analytic Caputo derivative of t^mu: Gamma(mu+1)/Gamma(mu+1-alpha) t^{mu-alpha}.
double caputo_power(double mu, double alpha, double t);

/// Steady fractional Poisson problem with the single-mode manufactured
/// solution u = prod sin(n pi x_k) / (d n^2 pi^2 + gamma)^s on (0,1)^d.
ProblemSpec example_smooth_steady(int dim, int mode_n, double s, double gamma,
                                  Discretization kind);

/// Steady problem with f = 1, gamma = 1 on (0,1)^2; no closed-form solution,
/// errors are measured by self-convergence.
ProblemSpec example_singular_steady(Discretization kind, double s);

/// Steady problem on the stripe (-5,5)x(-0.5,0.5) with an oscillatory source
/// involving signed fractional powers; used for solution profiles.
ProblemSpec example_stripe_steady(double s);

enum class TimeProfile { Linear, Power15 };  // g(t) = t or t^{3/2}

/// Time-dependent manufactured problem on (0,1)^2 with
/// u = g(t) prod sin(pi x_k) / (2 pi^2 + 1)^s, gamma = 1, kappa_s = 0.1, T = 1.
ProblemSpec example_manufactured_evolve(TimeProfile g, double s, double alpha,
                                        Discretization kind = Discretization::Cdm4);

struct EvolveResult {
  TensorField final_field;
  std::vector<std::pair<double, TensorField>> snapshots;
  int steps = 0;
  double seconds_per_step = 0.0;
};

/// Runs the fast L1 scheme for n_steps of size dt, sampling the source each
/// step. Snapshot requests are matched to the nearest step.
EvolveResult run_evolution(const ProblemSpec& problem, const Grid& grid, double dt,
                           int n_steps, std::span<const double> snapshot_times = {});

/// Error of a field against the problem's exact solution at time t.
double field_error(const TensorField& u, const ProblemSpec& problem, const Grid& grid,
                   double t, bool max_norm);

}  // namespace fracdiff
