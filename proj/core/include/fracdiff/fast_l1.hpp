#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "fracdiff/soe.hpp"
#include "fracdiff/spectral.hpp"

namespace fracdiff {

/// Fast L1 time stepper for
///   d_t^alpha u + kappa_s (-Delta + gamma I)^s u = f
/// with sum-of-exponentials history compression. Memory is O(Q * grid size)
/// and does not grow with the number of steps: the state carries only u^0,
/// u^{n-1} and the Q auxiliary history fields Y_j.
class FastL1Stepper {
 public:
  FastL1Stepper(const Grid& grid, const OperatorSpec& op, double alpha, double dt,
                double horizon);

  /// Resets to step 0 with the given initial field; all Y_j start at zero.
  void set_initial(const TensorField& u0);

  int step_index() const { return n_; }
  double dt() const { return dt_; }
  double alpha() const { return alpha_; }
  double tau() const { return tau_; }  // dt^alpha Gamma(2-alpha)
  const Grid& grid() const { return grid_; }
  const OperatorSpec& op() const { return op_; }
  const SoeQuadrature& soe() const { return soe_; }
  const DstPlan& plan() const { return plan_; }
  const TensorField& current() const { return uprev_; }
  const TensorField& initial() const { return u0_; }
  const std::vector<TensorField>& history() const { return hist_; }

  /// Memory field g^n = alpha u^{n-1} + (1-alpha) n^{-alpha} u^0
  ///                    - tau sum_j w_j e^{xi_j dt} Y_j(t_{n-1}).
  /// The history sum is dropped for n <= 1.
  TensorField assemble_g(int n) const;

  /// Advances one step with source samples f(., t_n); returns the new field.
  const TensorField& advance(const TensorField& f_n);

  /// Bytes held in field storage; constant across steps.
  std::size_t memory_bytes() const;

  /// Self-describing binary checkpoint, sufficient for bitwise-deterministic
  /// resume.
  void save(std::ostream& out) const;
  static FastL1Stepper load(std::istream& in);

 private:
  void history_update(const TensorField& u_prev, const TensorField& u_new);

  Grid grid_;
  OperatorSpec op_;
  double alpha_ = 0.0, dt_ = 0.0, horizon_ = 0.0, tau_ = 0.0;
  DstPlan plan_;
  SpectralSymbol h_, v_;
  TensorField l_;  // 1/(1 + tau kappa_s H_d)
  SoeQuadrature soe_;
  std::vector<KappaCoefficients> kap_;
  std::vector<double> wexp_;  // w_j e^{xi_j dt}
  int n_ = 0;
  TensorField u0_, uprev_;
  std::vector<TensorField> hist_;
};

/// Plain L1 quadrature of the Caputo derivative at t_n, given the full sample
/// history u^0..u^n. The fast scheme must agree with this up to the SOE
/// precision; it serves as the independent oracle.
double direct_l1_reference(std::span<const double> u_history, double alpha, double dt);

}  // namespace fracdiff
