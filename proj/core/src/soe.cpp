#include "fracdiff/soe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracdiff {

SoeQuadrature soe_build(double alpha, double dt, double horizon, int q, double eps0) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("soe_build: alpha must lie in (0,1)");
  if (!(dt > 0.0 && dt < horizon))
    throw std::invalid_argument("soe_build: need 0 < dt < T");
  if (q < 2) throw std::invalid_argument("soe_build: need Q >= 2");

  const double y_min = std::log(eps0) / (1.0 + alpha) - std::log(horizon);
  const double y_max =
      std::log((-std::log(eps0) + (1.0 + alpha) * std::log(dt)) / (0.5 * dt));
  if (!(y_max > y_min))
    throw std::invalid_argument("soe_build: degenerate node interval (y_max <= y_min)");

  const double dy = (y_max - y_min) / (q - 1);
  const double wscale = -std::sin(alpha * std::numbers::pi) / std::numbers::pi * dy;

  SoeQuadrature soe;
  soe.q = q;
  soe.alpha = alpha;
  soe.dt = dt;
  soe.horizon = horizon;
  soe.eps0 = eps0;
  soe.xi.resize(q);
  soe.w.resize(q);
  for (int j = 0; j < q; ++j) {
    const double y = y_min + j * dy;
    soe.xi[j] = -std::exp(y);
    soe.w[j] = wscale * std::exp((1.0 + alpha) * y);
  }
  return soe;
}

double soe_kernel(const SoeQuadrature& soe, double t) {
  double acc = 0.0;
  for (int j = 0; j < soe.q; ++j) acc += soe.w[j] * std::exp(soe.xi[j] * t);
  return acc;
}

KappaCoefficients kappa_coefficients(double xi, double dt) {
  if (!(xi < 0.0)) throw std::invalid_argument("kappa_coefficients: xi must be negative");
  if (!(dt > 0.0)) throw std::invalid_argument("kappa_coefficients: dt must be positive");
  const double z = xi * dt;
  KappaCoefficients k;
  k.k1 = std::exp(z);
  if (std::abs(z) < 1e-5) {
    // raw formulas cancel catastrophically near z = 0
    k.k2 = dt * (0.5 + z * (1.0 / 3.0 + z * (0.125 + z * (1.0 / 30.0 +
                 z * (1.0 / 144.0 + z / 840.0)))));
    k.k3 = dt * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 +
                 z * (1.0 / 720.0 + z / 5040.0)))));
  } else {
    const double em = std::expm1(z);        // e^z - 1
    const double emz = (em - z) / z;        // (e^z - z - 1)/z
    k.k2 = (em - emz) / xi;
    k.k3 = emz / xi;
  }
  return k;
}

}  // namespace fracdiff
