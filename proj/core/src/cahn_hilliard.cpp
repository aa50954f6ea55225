#include "fracdiff/cahn_hilliard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracdiff {

namespace {

// splitmix64: well-mixed 64-bit finalizer, used as a counter-based generator
// so the initial data is reproducible independent of evaluation order.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform_pm(std::uint64_t seed, std::uint64_t counter, double amp) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ counter);
  // 53-bit mantissa draw in [0,1)
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return amp * (2.0 * u - 1.0);
}

}  // namespace

TensorField cahn_hilliard_initial(const Grid& grid, std::uint64_t seed) {
  TensorField u(grid);
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = uniform_pm(seed, static_cast<std::uint64_t>(i), 0.05);
  return u;
}

CahnHilliardResult cahn_hilliard_run(const CahnHilliardSpec& spec, int n_steps,
                                     std::span<const double> snapshot_times) {
  if (n_steps < 1) throw std::invalid_argument("cahn_hilliard_run: need at least one step");
  if (spec.eps <= 0.0) throw std::invalid_argument("cahn_hilliard_run: eps must be positive");
  const Grid grid = Grid::unit_box(spec.dim, spec.intervals);
  const DstPlan plan(grid);

  // Mode symbols of (-Delta)^beta and (-Delta)^{beta+s}, gamma = 0.
  const SpectralSymbol lam_b = build_H(grid, spec.kind, spec.beta, 0.0);
  const SpectralSymbol lam_bs = build_H(grid, spec.kind, spec.beta + spec.s, 0.0);
  const double eps2s = std::pow(spec.eps, 2.0 * spec.s);
  const double horizon = n_steps * spec.dt;
  const SoeQuadrature soe = soe_build(spec.alpha, spec.dt, std::max(horizon, 2.0 * spec.dt));
  const double tau = std::pow(spec.dt, spec.alpha) * std::tgamma(2.0 - spec.alpha);

  std::vector<KappaCoefficients> kap(soe.q);
  std::vector<double> wexp(soe.q);
  for (int j = 0; j < soe.q; ++j) {
    kap[j] = kappa_coefficients(soe.xi[j], spec.dt);
    wexp[j] = soe.w[j] * std::exp(soe.xi[j] * spec.dt);
  }

  TensorField denom(grid);
  for (std::size_t i = 0; i < denom.size(); ++i)
    denom[i] = 1.0 / (1.0 + tau * (eps2s * lam_bs.values[i] + spec.stab * lam_b.values[i]));

  const TensorField u0 = cahn_hilliard_initial(grid, spec.seed);
  TensorField uprev = u0;
  std::vector<TensorField> hist(soe.q, TensorField(grid));

  std::vector<int> snap_steps(snapshot_times.size());
  for (std::size_t i = 0; i < snapshot_times.size(); ++i)
    snap_steps[i] = std::clamp(static_cast<int>(std::lround(snapshot_times[i] / spec.dt)),
                               1, n_steps);

  CahnHilliardResult result;
  result.max_abs = discrete_max_norm(u0);
  TensorField g(grid), force(grid);
  for (int n = 1; n <= n_steps; ++n) {
    const double c0 = (1.0 - spec.alpha) * std::pow(static_cast<double>(n), -spec.alpha);
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = spec.alpha * uprev[i] + c0 * u0[i];
    if (n > 1) {
      for (int j = 0; j < soe.q; ++j) {
        const double c = tau * wexp[j];
        const TensorField& y = hist[j];
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= c * y[i];
      }
    }
    for (std::size_t i = 0; i < force.size(); ++i) {
      const double v = uprev[i];
      force[i] = v * v * v - v - spec.stab * v;
    }
    TensorField ghat = plan.inverse(g);
    TensorField fhat = plan.inverse(force);
    for (std::size_t i = 0; i < ghat.size(); ++i)
      ghat[i] = denom[i] * (ghat[i] - tau * lam_b.values[i] * fhat[i]);
    TensorField u = plan.forward(ghat);

    const double m = discrete_max_norm(u);
    if (!u.all_finite() || m > 10.0)
      throw std::runtime_error("cahn-hilliard: field blow-up at step " + std::to_string(n) +
                               " (||u||_inf = " + std::to_string(m) + ")");
    result.max_abs = std::max(result.max_abs, m);

    for (int j = 0; j < soe.q; ++j) {
      TensorField& y = hist[j];
      const double k1 = kap[j].k1, k2 = kap[j].k2, k3 = kap[j].k3;
      for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = k1 * y[i] + k2 * uprev[i] + k3 * u[i];
    }
    uprev = std::move(u);
    for (std::size_t i = 0; i < snap_steps.size(); ++i)
      if (snap_steps[i] == n) result.snapshots.emplace_back(n * spec.dt, uprev);
  }
  result.final_field = std::move(uprev);
  result.steps = n_steps;
  return result;
}

}  // namespace fracdiff
