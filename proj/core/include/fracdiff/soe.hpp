#pragma once

#include <vector>

namespace fracdiff {

/// Sum-of-exponentials compression of the L1 history kernel
/// t^{-1-alpha}/Gamma(-alpha) ~= sum_j w_j exp(xi_j t) on [dt, T].
/// Nodes are strictly negative and, for alpha in (0,1), so are the weights.
struct SoeQuadrature {
  int q = 0;
  double alpha = 0.0;
  double dt = 0.0;
  double horizon = 0.0;  // T
  double eps0 = 0.0;     // target precision used by the node generator
  std::vector<double> xi;
  std::vector<double> w;
};

/// Trapezoidal-rule quadrature of the Gamma-integral representation on a log
/// axis: xi_j = -exp(y_j), w_j = -(sin(alpha pi)/pi) dy exp((1+alpha) y_j),
/// y_j = y_min + j dy for j = 0..Q-1.
SoeQuadrature soe_build(double alpha, double dt, double horizon, int q = 128,
                        double eps0 = 1e-16);

/// Evaluates the compressed kernel sum_j w_j exp(xi_j t).
double soe_kernel(const SoeQuadrature& soe, double t);

/// One-step recurrence coefficients for the auxiliary history modes:
/// Y_j(t_i) = k1 Y_j(t_{i-1}) + k2 u(t_{i-1}) + k3 u(t_i), z = xi_j dt.
struct KappaCoefficients {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

/// Cancellation-free evaluation: expm1-based for moderate z, a short Taylor
/// series below |z| = 1e-5.
KappaCoefficients kappa_coefficients(double xi, double dt);

}  // namespace fracdiff
