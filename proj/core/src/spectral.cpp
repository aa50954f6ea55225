#include "fracdiff/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracdiff {

namespace {

struct StencilCoefficients {
  double a, b, c, d;  // stiffness diagonal/off-diagonal, mass diagonal/off-diagonal
};

StencilCoefficients stencil(Discretization kind, double h) {
  switch (kind) {
    case Discretization::FemLinear:
      return {2.0 / h, -1.0 / h, 4.0 * h / 6.0, h / 6.0};
    case Discretization::Cdm4:
      return {2.0 / (h * h), -1.0 / (h * h), 10.0 / 12.0, 1.0 / 12.0};
    case Discretization::Fd2:
      return {2.0 / (h * h), -1.0 / (h * h), 1.0, 0.0};
  }
  throw std::invalid_argument("unknown discretization");
}

// Walks the full interior index set, handing each entry's per-axis indices to
// the callback.
template <typename Fn>
void for_each_entry(const std::array<int, 3>& shape, int dim, Fn&& fn) {
  std::array<int, 3> idx{0, 0, 0};
  const std::size_t total = static_cast<std::size_t>(shape[0]) *
                            (dim > 1 ? shape[1] : 1) * (dim > 2 ? shape[2] : 1);
  std::size_t flat = 0;
  for (;;) {
    fn(flat, idx);
    if (++flat == total) break;
    for (int k = dim - 1; k >= 0; --k) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
}

}  // namespace

AxisEigenvalues stiffness_mass_eigenvalues(Discretization kind, int n_intervals, double h) {
  if (n_intervals < 2) throw std::invalid_argument("eigenvalues: need N >= 2");
  const auto sc = stencil(kind, h);
  AxisEigenvalues e;
  e.stiffness.resize(n_intervals - 1);
  e.mass.resize(n_intervals - 1);
  for (int i = 1; i < n_intervals; ++i) {
    const double c = std::cos(i * std::numbers::pi / n_intervals);
    e.stiffness[i - 1] = sc.a - 2.0 * std::abs(sc.b) * c;
    e.mass[i - 1] = sc.c + 2.0 * std::abs(sc.d) * c;
  }
  return e;
}

std::vector<double> mode_eigenvalues(Discretization kind, const Grid& grid, double gamma,
                                     int axis) {
  if (gamma < 0.0) throw std::invalid_argument("mode_eigenvalues: gamma must be >= 0");
  if (axis < 0 || axis >= grid.dim) throw std::invalid_argument("mode_eigenvalues: bad axis");
  const auto e = stiffness_mass_eigenvalues(kind, grid.intervals[axis], grid.h[axis]);
  std::vector<double> lam(e.stiffness.size());
  const double shift = gamma / grid.dim;
  for (std::size_t i = 0; i < lam.size(); ++i)
    lam[i] = e.stiffness[i] / e.mass[i] + shift;
  return lam;
}

SpectralSymbol build_H(const Grid& grid, Discretization kind, double s, double gamma) {
  if (s <= 0.0) throw std::invalid_argument("build_H: s must be positive");
  if (gamma < 0.0) throw std::invalid_argument("build_H: gamma must be >= 0");
  std::array<std::vector<double>, 3> lam;
  for (int k = 0; k < grid.dim; ++k) lam[k] = mode_eigenvalues(kind, grid, gamma, k);

  SpectralSymbol sym;
  sym.values = TensorField(grid);
  sym.kind = kind;
  sym.s = s;
  sym.gamma = gamma;
  for_each_entry(sym.values.shape(), grid.dim, [&](std::size_t flat, const std::array<int, 3>& idx) {
    double sum = 0.0;
    for (int k = 0; k < grid.dim; ++k) sum += lam[k][idx[k]];
    if (!(sum > 0.0)) throw std::runtime_error("build_H: non-positive mode sum");
    sym.values[flat] = std::exp(s * std::log(sum));
  });
  return sym;
}

SpectralSymbol build_V(const Grid& grid, Discretization kind, RhsMode rhs) {
  SpectralSymbol sym;
  sym.values = TensorField(grid);
  sym.kind = kind;
  sym.s = 1.0;
  sym.gamma = 0.0;
  if (rhs == RhsMode::Nodal) {
    for (std::size_t i = 0; i < sym.values.size(); ++i) sym.values[i] = 1.0;
    return sym;
  }
  if (kind != Discretization::FemLinear)
    throw std::invalid_argument("build_V: load-vector modes are only meaningful for FEM");

  // Both load modes apply K = M^{-1}; the quadrature difference lives in
  // assemble_rhs, which produces the load vector itself.
  std::array<std::vector<double>, 3> recip;
  for (int k = 0; k < grid.dim; ++k) {
    const auto e = stiffness_mass_eigenvalues(kind, grid.intervals[k], grid.h[k]);
    recip[k].resize(e.mass.size());
    for (std::size_t i = 0; i < e.mass.size(); ++i) recip[k][i] = 1.0 / e.mass[i];
  }
  for_each_entry(sym.values.shape(), grid.dim, [&](std::size_t flat, const std::array<int, 3>& idx) {
    double prod = 1.0;
    for (int k = 0; k < grid.dim; ++k) prod *= recip[k][idx[k]];
    sym.values[flat] = prod;
  });
  return sym;
}

TensorField apply_fractional_op(const TensorField& u, const SpectralSymbol& h,
                                const DstPlan& plan) {
  if (!u.same_shape(h.values)) throw std::invalid_argument("apply_fractional_op: shape mismatch");
  return plan.forward(hadamard(h.values, plan.inverse(u)));
}

TensorField solve_steady(const TensorField& f, const Grid& grid, const OperatorSpec& op,
                         const DstPlan& plan) {
  if (op.kappa <= 0.0) throw std::invalid_argument("solve_steady: kappa must be positive");
  const SpectralSymbol h = build_H(grid, op.kind, op.s, op.gamma);
  const SpectralSymbol v = build_V(grid, op.kind, op.rhs);
  TensorField spec = plan.inverse(f);
  for (std::size_t i = 0; i < spec.size(); ++i)
    spec[i] *= v.values[i] / (op.kappa * h.values[i]);
  return plan.forward(spec);
}

TensorField sample_field(const Grid& grid,
                         const std::function<double(std::array<double, 3>)>& fn) {
  TensorField out(grid);
  const auto shape = out.shape();
  std::array<int, 3> idx{0, 0, 0};
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int k = 0; k < grid.dim; ++k) x[k] = grid.node(k, idx[k] + 1);
    out[flat] = fn(x);
    for (int k = grid.dim - 1; k >= 0; --k) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

TensorField assemble_rhs(const Grid& grid, RhsMode rhs,
                         const std::function<double(std::array<double, 3>)>& fn) {
  if (rhs != RhsMode::LoadGauss) {
    TensorField out = sample_field(grid, fn);
    if (rhs == RhsMode::LoadLumped) {
      double w = 1.0;
      for (int k = 0; k < grid.dim; ++k) w *= grid.h[k];
      out *= w;
    }
    return out;
  }

  // (f, prod_k phi_{i_k}): tensor 2-point Gauss rule on each of the 2^d
  // elements touching the node.
  constexpr double gp = 0.5773502691896257;  // 1/sqrt(3) on [-1,1]
  TensorField out(grid);
  const auto shape = out.shape();
  std::array<int, 3> idx{0, 0, 0};
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    double acc = 0.0;
    const int ncells = 1 << grid.dim;
    const int npts = 1 << grid.dim;
    for (int cell = 0; cell < ncells; ++cell) {
      for (int pt = 0; pt < npts; ++pt) {
        double weight = 1.0;
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int k = 0; k < grid.dim; ++k) {
          const double hk = grid.h[k];
          const double xi = grid.node(k, idx[k] + 1);
          const int side = (cell >> k) & 1;         // element left/right of the node
          const int gauss = (pt >> k) & 1;          // which gauss point
          const double t = (gauss == 0 ? -gp : gp); // on [-1,1]
          const double xg = side == 0 ? xi - hk / 2.0 + t * hk / 2.0
                                      : xi + hk / 2.0 + t * hk / 2.0;
          // hat function centered at xi, support [xi-h, xi+h]
          const double phi = 1.0 - std::abs(xg - xi) / hk;
          weight *= (hk / 2.0) * phi;  // gauss weight 1 on [-1,1], jacobian h/2
          x[k] = xg;
        }
        acc += weight * fn(x);
      }
    }
    out[flat] = acc;
    for (int k = grid.dim - 1; k >= 0; --k) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace fracdiff
