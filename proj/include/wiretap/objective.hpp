#pragma once

// Secrecy rate C(R), the minimax upper bound f(R, K) and the barrier-augmented
// objective f_t(R, K) = f(R, K) + ln|R| / t - ln|K| / t, with exact gradients
// and Hessians in the reduced variables x = vech(R), y = vec(K21).
//
// Scale convention: secrecy_rate() and minimax_objective() return rates in
// nats (with the 1/2 factor). Everything the Newton solver touches
// (barrier_value, DerivativeBundle) is unhalved, i.e. twice the rate.

#include "wiretap/channel.hpp"
#include "wiretap/matcalc.hpp"

namespace wiretap {

/// C(R) = 1/2 (ln|I + W1 R| - ln|I + W2 R|) in nats; may be negative.
double secrecy_rate(const ChannelPair& ch, const Matrix& r);

/// f(R, K) = 1/2 ln(|I + K^{-1} H R H^T| / |I + W2 R|) in nats.
/// Throws DomainError if K is not positive definite.
double minimax_objective(const ChannelPair& ch, const Matrix& r, const Matrix& k21);

struct DerivativeBundle {
  Vector grad_x;   // D_m^T vec(grad_R f_t)
  Vector grad_y;   // D~_n^T vec(grad_K f_t)
  Matrix hess_xx;  // negative definite
  Matrix hess_yy;  // positive definite
  Matrix hess_xy;  // m(m+1)/2 x n1 n2
  // Unhalved values: f, f_t and C each carry no 1/2 factor.
  double value_f = 0.0;
  double value_ft = 0.0;
  double value_C = 0.0;
};

/// Matrix-level pieces shared by gradients, Hessians and certificates at one
/// interior point. Throws DomainError unless R > 0 and K > 0.
struct InteriorPoint {
  InteriorPoint(const ChannelPair& ch, const Matrix& r, const Matrix& k21);

  Matrix r_inv;
  Matrix k;
  Matrix k_inv;
  Matrix kq_inv;  // (K + Q)^{-1}, Q = H R H^T
  Matrix z1;      // (I + W R)^{-1} W = H^T (K + Q)^{-1} H
  Matrix z2;      // (I + W2 R)^{-1} W2
  double logdet_r = 0.0;
  double logdet_k = 0.0;
  double logdet_kq = 0.0;
  double logdet_s1 = 0.0;  // ln|I + H1 R H1^T|
  double logdet_s2 = 0.0;  // ln|I + H2 R H2^T|
};

/// f_t for a fixed channel, barrier parameter and power budget. Carries the
/// duplication matrices for its dimensions.
class BarrierObjective {
 public:
  BarrierObjective(ChannelPair channel, double t, double power);

  const ChannelPair& channel() const { return channel_; }
  double t() const { return t_; }
  double power() const { return power_; }
  const DuplicationMatrix& dup_m() const { return dup_m_; }
  const ReducedDuplicationMatrix& dup_n() const { return dup_n_; }

  /// Same channel and dimensions, new barrier parameter.
  BarrierObjective with_t(double t) const;

  Index num_x() const { return vech_size(channel_.m()); }
  Index num_y() const { return channel_.n1() * channel_.n2(); }

 private:
  ChannelPair channel_;
  double t_;
  double power_;
  DuplicationMatrix dup_m_;
  ReducedDuplicationMatrix dup_n_;
};

/// Unhalved f_t(R, K) = ln|K + Q| - ln|K| - ln|I + W2 R| + ln|R|/t - ln|K|/t.
/// Throws DomainError outside R > 0, K > 0.
double barrier_value(const BarrierObjective& obj, const Matrix& r, const Matrix& k21);

/// Gradients and (optionally) Hessians of the unhalved f_t.
DerivativeBundle derivatives(const BarrierObjective& obj, const Matrix& r, const Matrix& k21,
                             bool with_hessians = true);

/// grad_R f_t = Z1 - Z2 + R^{-1}/t.
Matrix grad_r(const InteriorPoint& p, double t);
/// grad_K f_t = (K + Q)^{-1} - (1 + 1/t) K^{-1}.
Matrix grad_k(const InteriorPoint& p, double t);

/// Objective of the degraded-channel problem: unhalved C(R) + ln|R| / t over x only.
struct DegradedDerivatives {
  Vector grad_x;
  Matrix hess_xx;
  double value_C = 0.0;   // unhalved
  double value_ft = 0.0;  // unhalved
};

DegradedDerivatives degraded_derivatives(const ChannelPair& ch, const DuplicationMatrix& dup, const Matrix& r,
                                         double t, bool with_hessian = true);

}  // namespace wiretap
