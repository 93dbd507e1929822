#include "wiretap/objective.hpp"

#include <stdexcept>

namespace wiretap {

namespace {

// Cholesky of a symmetric matrix that must be positive definite.
Eigen::LLT<Matrix> factor_pd(const Matrix& a, const char* what) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) throw DomainError(std::string(what) + " is not positive definite");
  return llt;
}

double logdet(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// ln|I + B R B^T| for PSD R. Falls back to LU when rounding makes the
// argument slightly indefinite.
double logdet_gain(const Matrix& b, const Matrix& r) {
  const Matrix s = Matrix::Identity(b.rows(), b.rows()) + symmetrize(b * r * b.transpose());
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() == Eigen::Success) return logdet(llt);
  Eigen::PartialPivLU<Matrix> lu(s);
  return std::log(std::abs(lu.determinant()));
}

void require_shapes(const ChannelPair& ch, const Matrix& r, const Matrix& k21) {
  if (r.rows() != ch.m() || r.cols() != ch.m()) throw std::invalid_argument("objective: R must be m x m");
  if (k21.rows() != ch.n2() || k21.cols() != ch.n1())
    throw std::invalid_argument("objective: K21 must be n2 x n1");
}

}  // namespace

double secrecy_rate(const ChannelPair& ch, const Matrix& r) {
  if (r.rows() != ch.m() || r.cols() != ch.m()) throw std::invalid_argument("secrecy_rate: R must be m x m");
  return 0.5 * (logdet_gain(ch.h1(), r) - logdet_gain(ch.h2(), r));
}

double minimax_objective(const ChannelPair& ch, const Matrix& r, const Matrix& k21) {
  require_shapes(ch, r, k21);
  const Matrix k = assemble_noise_covariance(k21);
  const auto llt_k = factor_pd(k, "K");
  const Matrix q = symmetrize(ch.h() * r * ch.h().transpose());
  Eigen::LLT<Matrix> llt_kq(k + q);
  double logdet_kq = 0.0;
  if (llt_kq.info() == Eigen::Success) {
    logdet_kq = logdet(llt_kq);
  } else {
    logdet_kq = std::log(std::abs(Eigen::PartialPivLU<Matrix>(k + q).determinant()));
  }
  return 0.5 * (logdet_kq - logdet(llt_k) - logdet_gain(ch.h2(), r));
}

InteriorPoint::InteriorPoint(const ChannelPair& ch, const Matrix& r, const Matrix& k21) {
  require_shapes(ch, r, k21);
  const Index m = ch.m();
  const Index n = ch.n();
  const auto llt_r = factor_pd(r, "R");
  k = assemble_noise_covariance(k21);
  const auto llt_k = factor_pd(k, "K");
  const Matrix q = symmetrize(ch.h() * r * ch.h().transpose());
  const auto llt_kq = factor_pd(k + q, "K + Q");
  const auto llt_s1 =
      factor_pd(Matrix::Identity(ch.n1(), ch.n1()) + ch.h1() * r * ch.h1().transpose(), "I + H1 R H1^T");
  const auto llt_s2 =
      factor_pd(Matrix::Identity(ch.n2(), ch.n2()) + ch.h2() * r * ch.h2().transpose(), "I + H2 R H2^T");

  r_inv = symmetrize(llt_r.solve(Matrix::Identity(m, m)));
  k_inv = symmetrize(llt_k.solve(Matrix::Identity(n, n)));
  kq_inv = symmetrize(llt_kq.solve(Matrix::Identity(n, n)));
  z1 = symmetrize(ch.h().transpose() * kq_inv * ch.h());
  z2 = symmetrize(ch.h2().transpose() * llt_s2.solve(ch.h2()));
  logdet_r = logdet(llt_r);
  logdet_k = logdet(llt_k);
  logdet_kq = logdet(llt_kq);
  logdet_s1 = logdet(llt_s1);
  logdet_s2 = logdet(llt_s2);
}

BarrierObjective::BarrierObjective(ChannelPair channel, double t, double power)
    : channel_(std::move(channel)),
      t_(t),
      power_(power),
      dup_m_(channel_.m()),
      dup_n_(channel_.n1(), channel_.n2()) {
  if (!(t_ > 0.0)) throw std::invalid_argument("barrier objective: t must be positive");
  if (!(power_ > 0.0)) throw std::invalid_argument("barrier objective: power must be positive");
}

BarrierObjective BarrierObjective::with_t(double t) const {
  BarrierObjective copy = *this;
  if (!(t > 0.0)) throw std::invalid_argument("barrier objective: t must be positive");
  copy.t_ = t;
  return copy;
}

double barrier_value(const BarrierObjective& obj, const Matrix& r, const Matrix& k21) {
  const InteriorPoint p(obj.channel(), r, k21);
  const double f = p.logdet_kq - p.logdet_k - p.logdet_s2;
  return f + (p.logdet_r - p.logdet_k) / obj.t();
}

Matrix grad_r(const InteriorPoint& p, double t) { return p.z1 - p.z2 + p.r_inv / t; }

Matrix grad_k(const InteriorPoint& p, double t) { return p.kq_inv - (1.0 + 1.0 / t) * p.k_inv; }

DerivativeBundle derivatives(const BarrierObjective& obj, const Matrix& r, const Matrix& k21, bool with_hessians) {
  const ChannelPair& ch = obj.channel();
  const InteriorPoint p(ch, r, k21);
  const double t = obj.t();
  const Matrix& dm = obj.dup_m().matrix();
  const Matrix& dn = obj.dup_n().matrix();

  DerivativeBundle out;
  out.value_f = p.logdet_kq - p.logdet_k - p.logdet_s2;
  out.value_ft = out.value_f + (p.logdet_r - p.logdet_k) / t;
  out.value_C = p.logdet_s1 - p.logdet_s2;
  out.grad_x = dm.transpose() * vec(grad_r(p, t));
  out.grad_y = dn.transpose() * vec(grad_k(p, t));
  if (!with_hessians) return out;

  const Matrix curv_r = kron(p.z1, p.z1) - kron(p.z2, p.z2) + kron(p.r_inv, p.r_inv) / t;
  out.hess_xx = symmetrize(-dm.transpose() * curv_r * dm);

  const Matrix curv_k = (1.0 + 1.0 / t) * kron(p.k_inv, p.k_inv) - kron(p.kq_inv, p.kq_inv);
  out.hess_yy = symmetrize(dn.transpose() * curv_k * dn);

  const Matrix a = ch.h().transpose() * p.kq_inv;  // m x n
  out.hess_xy = -dm.transpose() * kron(a, a) * dn;
  return out;
}

DegradedDerivatives degraded_derivatives(const ChannelPair& ch, const DuplicationMatrix& dup, const Matrix& r,
                                         double t, bool with_hessian) {
  if (r.rows() != ch.m() || r.cols() != ch.m()) throw std::invalid_argument("degraded objective: R must be m x m");
  if (!(t > 0.0)) throw std::invalid_argument("degraded objective: t must be positive");
  const Index m = ch.m();
  const auto llt_r = factor_pd(r, "R");
  const auto llt_s1 =
      factor_pd(Matrix::Identity(ch.n1(), ch.n1()) + ch.h1() * r * ch.h1().transpose(), "I + H1 R H1^T");
  const auto llt_s2 =
      factor_pd(Matrix::Identity(ch.n2(), ch.n2()) + ch.h2() * r * ch.h2().transpose(), "I + H2 R H2^T");
  const Matrix r_inv = symmetrize(llt_r.solve(Matrix::Identity(m, m)));
  const Matrix z1 = symmetrize(ch.h1().transpose() * llt_s1.solve(ch.h1()));
  const Matrix z2 = symmetrize(ch.h2().transpose() * llt_s2.solve(ch.h2()));
  const Matrix& d = dup.matrix();

  DegradedDerivatives out;
  out.value_C = logdet(llt_s1) - logdet(llt_s2);
  out.value_ft = out.value_C + logdet(llt_r) / t;
  out.grad_x = d.transpose() * vec(z1 - z2 + r_inv / t);
  if (with_hessian) {
    const Matrix curv = kron(z1, z1) - kron(z2, z2) + kron(r_inv, r_inv) / t;
    out.hess_xx = symmetrize(-d.transpose() * curv * d);
  }
  return out;
}

}  // namespace wiretap
