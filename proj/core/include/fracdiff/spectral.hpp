#pragma once

#include <functional>
#include <vector>

#include "fracdiff/dst.hpp"
#include "fracdiff/tensor_field.hpp"

namespace fracdiff {

enum class Discretization {
  FemLinear,  // linear finite elements: tridiagonal stiffness and mass
  Cdm4,       // fourth-order compact differences
  Fd2,        // second-order central differences (Cdm4 stiffness, identity mass)
};

/// How the right hand side enters the discrete system.
enum class RhsMode {
  Nodal,       // b_i = f(x_i), K = I
  LoadLumped,  // b_i = (prod h_k) f(x_i), K = M^{-1}  (FEM, lumped quadrature)
  LoadGauss,   // b_i = (f, prod phi_i) by 2-pt Gauss per element, K = M^{-1} (FEM)
};

struct AxisEigenvalues {
  std::vector<double> stiffness;  // lambda_i^{(s_k)} = a - 2|b| cos(i pi/N)
  std::vector<double> mass;       // lambda_i^{(m_k)} = c + 2|d| cos(i pi/N)
};

/// Closed-form eigenvalues of the tridiagonal stiffness/mass pair on one axis.
AxisEigenvalues stiffness_mass_eigenvalues(Discretization kind, int n_intervals, double h);

/// Per-axis mode eigenvalues lambda_i^{(k)} = lambda^{(s)}/lambda^{(m)} + gamma/dim.
std::vector<double> mode_eigenvalues(Discretization kind, const Grid& grid, double gamma,
                                     int axis);

/// d-dimensional multiplier array together with the parameters it was built for.
struct SpectralSymbol {
  TensorField values;
  Discretization kind = Discretization::FemLinear;
  double s = 1.0;
  double gamma = 0.0;
};

/// H_d: entry (i_1..i_d) = (sum_k lambda_{i_k}^{(k)})^s.
SpectralSymbol build_H(const Grid& grid, Discretization kind, double s, double gamma);

/// V_d: all ones for nodal data, products of mass-eigenvalue reciprocals for
/// the load-vector modes. Load modes are FEM-only.
SpectralSymbol build_V(const Grid& grid, Discretization kind, RhsMode rhs);

/// Matrix-free action of (M^{-1}S + gamma I)^s on a field.
TensorField apply_fractional_op(const TensorField& u, const SpectralSymbol& h,
                                const DstPlan& plan);

struct OperatorSpec {
  Discretization kind = Discretization::Cdm4;
  RhsMode rhs = RhsMode::Nodal;
  double s = 1.0;
  double gamma = 0.0;
  double kappa = 1.0;  // diffusion coefficient kappa_s
};

/// Direct solver for kappa_s (-Delta + gamma I)^s u = f: one inverse and one
/// forward transform around a diagonal solve.
TensorField solve_steady(const TensorField& f, const Grid& grid, const OperatorSpec& op,
                         const DstPlan& plan);

/// Samples a space-time callback at the interior nodes.
TensorField sample_field(const Grid& grid,
                         const std::function<double(std::array<double, 3>)>& fn);

/// Assembles the right hand side field for a given mode. Nodal and lumped
/// modes sample at nodes; the Gauss mode integrates f against the tensor hat
/// basis with 2-point Gauss quadrature per axis per element.
TensorField assemble_rhs(const Grid& grid, RhsMode rhs,
                         const std::function<double(std::array<double, 3>)>& fn);

}  // namespace fracdiff
