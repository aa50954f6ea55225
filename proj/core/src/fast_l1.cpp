#include "fracdiff/fast_l1.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fracdiff {

namespace {

constexpr char kMagic[8] = {'F', 'L', '1', 'C', 'K', 'P', 'T', '1'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated stream");
  return v;
}

void put_field(std::ostream& out, const TensorField& f) {
  out.write(reinterpret_cast<const char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
}

void get_field(std::istream& in, TensorField& f) {
  in.read(reinterpret_cast<char*>(f.data()),
          static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint: truncated field data");
}

}  // namespace

FastL1Stepper::FastL1Stepper(const Grid& grid, const OperatorSpec& op, double alpha,
                             double dt, double horizon)
    : grid_(grid),
      op_(op),
      alpha_(alpha),
      dt_(dt),
      horizon_(horizon),
      tau_(std::pow(dt, alpha) * std::tgamma(2.0 - alpha)),
      plan_(grid),
      h_(build_H(grid, op.kind, op.s, op.gamma)),
      v_(build_V(grid, op.kind, op.rhs)),
      l_(grid),
      soe_(soe_build(alpha, dt, horizon)),
      u0_(grid),
      uprev_(grid) {
  for (std::size_t i = 0; i < l_.size(); ++i)
    l_[i] = 1.0 / (1.0 + tau_ * op_.kappa * h_.values[i]);
  kap_.resize(soe_.q);
  wexp_.resize(soe_.q);
  for (int j = 0; j < soe_.q; ++j) {
    kap_[j] = kappa_coefficients(soe_.xi[j], dt_);
    wexp_[j] = soe_.w[j] * std::exp(soe_.xi[j] * dt_);
  }
  hist_.assign(soe_.q, TensorField(grid));
}

void FastL1Stepper::set_initial(const TensorField& u0) {
  if (!u0.same_shape(u0_)) throw std::invalid_argument("set_initial: shape mismatch");
  u0_ = u0;
  uprev_ = u0;
  for (auto& y : hist_) y = TensorField(grid_);
  n_ = 0;
}

TensorField FastL1Stepper::assemble_g(int n) const {
  if (n < 1) throw std::invalid_argument("assemble_g: n must be >= 1");
  TensorField g(grid_);
  const double c0 = (1.0 - alpha_) * std::pow(static_cast<double>(n), -alpha_);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = alpha_ * uprev_[i] + c0 * u0_[i];
  if (n > 1) {
    for (int j = 0; j < soe_.q; ++j) {
      const double c = tau_ * wexp_[j];
      const TensorField& y = hist_[j];
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= c * y[i];
    }
  }
  return g;
}

const TensorField& FastL1Stepper::advance(const TensorField& f_n) {
  if (!f_n.same_shape(uprev_)) throw std::invalid_argument("advance: source shape mismatch");
  const int n = n_ + 1;
  TensorField ghat = plan_.inverse(assemble_g(n));
  TensorField fhat = plan_.inverse(f_n);
  for (std::size_t i = 0; i < ghat.size(); ++i)
    ghat[i] = l_[i] * (ghat[i] + tau_ * v_.values[i] * fhat[i]);
  TensorField u = plan_.forward(ghat);
  if (!u.all_finite()) throw std::runtime_error("fast-l1: non-finite field after step");
  history_update(uprev_, u);
  uprev_ = std::move(u);
  n_ = n;
  return uprev_;
}

void FastL1Stepper::history_update(const TensorField& u_prev, const TensorField& u_new) {
  for (int j = 0; j < soe_.q; ++j) {
    TensorField& y = hist_[j];
    const double k1 = kap_[j].k1, k2 = kap_[j].k2, k3 = kap_[j].k3;
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = k1 * y[i] + k2 * u_prev[i] + k3 * u_new[i];
  }
}

std::size_t FastL1Stepper::memory_bytes() const {
  std::size_t n = u0_.size() + uprev_.size();
  for (const auto& y : hist_) n += y.size();
  return n * sizeof(double);
}

void FastL1Stepper::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put(out, grid_.dim);
  for (int k = 0; k < 3; ++k) put(out, grid_.lo[k]);
  for (int k = 0; k < 3; ++k) put(out, grid_.hi[k]);
  for (int k = 0; k < 3; ++k) put(out, grid_.intervals[k]);
  put(out, static_cast<int>(op_.kind));
  put(out, static_cast<int>(op_.rhs));
  put(out, op_.s);
  put(out, op_.gamma);
  put(out, op_.kappa);
  put(out, alpha_);
  put(out, dt_);
  put(out, horizon_);
  put(out, n_);
  put(out, soe_.q);
  for (double x : soe_.xi) put(out, x);
  for (double x : soe_.w) put(out, x);
  put_field(out, u0_);
  put_field(out, uprev_);
  for (const auto& y : hist_) put_field(out, y);
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

FastL1Stepper FastL1Stepper::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  const int dim = get<int>(in);
  std::array<double, 3> lo{}, hi{};
  std::array<int, 3> n{};
  for (int k = 0; k < 3; ++k) lo[k] = get<double>(in);
  for (int k = 0; k < 3; ++k) hi[k] = get<double>(in);
  for (int k = 0; k < 3; ++k) n[k] = get<int>(in);
  Grid grid = Grid::make(dim, lo, hi, n);
  OperatorSpec op;
  op.kind = static_cast<Discretization>(get<int>(in));
  op.rhs = static_cast<RhsMode>(get<int>(in));
  op.s = get<double>(in);
  op.gamma = get<double>(in);
  op.kappa = get<double>(in);
  const double alpha = get<double>(in);
  const double dt = get<double>(in);
  const double horizon = get<double>(in);
  const int step = get<int>(in);
  const int q = get<int>(in);

  FastL1Stepper st(grid, op, alpha, dt, horizon);
  if (q != st.soe_.q) throw std::runtime_error("checkpoint: quadrature size mismatch");
  for (int j = 0; j < q; ++j) st.soe_.xi[j] = get<double>(in);
  for (int j = 0; j < q; ++j) st.soe_.w[j] = get<double>(in);
  for (int j = 0; j < q; ++j) {
    st.kap_[j] = kappa_coefficients(st.soe_.xi[j], dt);
    st.wexp_[j] = st.soe_.w[j] * std::exp(st.soe_.xi[j] * dt);
  }
  st.n_ = step;
  get_field(in, st.u0_);
  get_field(in, st.uprev_);
  for (auto& y : st.hist_) get_field(in, y);
  return st;
}

double direct_l1_reference(std::span<const double> u_history, double alpha, double dt) {
  if (u_history.size() < 2)
    throw std::invalid_argument("direct_l1_reference: need at least two samples");
  const int n = static_cast<int>(u_history.size()) - 1;
  const double scale = std::pow(dt, -alpha) / std::tgamma(2.0 - alpha);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double b = std::pow(k + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(k), 1.0 - alpha);
    acc += b * (u_history[n - k] - u_history[n - k - 1]);
  }
  return scale * acc;
}

}  // namespace fracdiff
