#pragma once

#include "wiretap/errors.hpp"
#include "wiretap/matcalc.hpp"

#include <string_view>

namespace wiretap {

/// Legitimate (H1, n1 x m) and eavesdropper (H2, n2 x m) channel matrices
/// together with their Gram matrices and the stacked matrix [H1; H2].
/// Validated once at construction; immutable afterwards.
class ChannelPair {
 public:
  ChannelPair(Matrix h1, Matrix h2);

  const Matrix& h1() const { return h1_; }
  const Matrix& h2() const { return h2_; }
  const Matrix& w1() const { return w1_; }
  const Matrix& w2() const { return w2_; }
  /// Stacked [H1; H2], (n1 + n2) x m.
  const Matrix& h() const { return h_; }

  Index m() const { return h1_.cols(); }
  Index n1() const { return h1_.rows(); }
  Index n2() const { return h2_.rows(); }
  Index n() const { return h_.rows(); }

 private:
  Matrix h1_, h2_, w1_, w2_, h_;
};

enum class Degradedness { Degraded, ReverselyDegraded, Indefinite };

std::string_view to_string(Degradedness d);

struct DegradednessReport {
  Degradedness kind;
  Vector eigenvalues;  // of W1 - W2, ascending
  double tolerance;
};

/// Degraded iff min eig(W1 - W2) >= -tol, reversely degraded iff
/// max eig <= tol, tol = 1e-9 (1 + |W1|_2 + |W2|_2). Degraded wins ties
/// (H1 == H2 is degraded).
DegradednessReport classify_degraded(const ChannelPair& ch);

/// Noise covariance K = [[I, K21^T], [K21, I]] with K21 of shape n2 x n1.
/// Feasible iff |K21|_2 < 1, which is equivalent to K > 0.
class NoiseCovariance {
 public:
  /// Throws DomainError if |K21|_2 >= 1.
  explicit NoiseCovariance(Matrix k21);

  static NoiseCovariance identity(Index n1, Index n2);

  const Matrix& k21() const { return k21_; }
  Matrix assembled() const;
  double spectral_norm() const;

 private:
  Matrix k21_;
};

Matrix assemble_noise_covariance(const Matrix& k21);

/// Transmit covariance R >= 0 with its power budget. Throws
/// std::invalid_argument when R has a negative eigenvalue below -1e-12 |R|
/// or when trace(R) exceeds the budget by more than 1e-9 (1 + P).
class TransmitCovariance {
 public:
  TransmitCovariance(SymMat r, double power);

  const SymMat& r() const { return r_; }
  double power() const { return power_; }

 private:
  SymMat r_;
  double power_;
};

/// W = H^T K^{-1} H. Throws DomainError if K is not positive definite.
Matrix effective_gram(const ChannelPair& ch, const Matrix& k21);

/// Primal iterate (R, K21) and the equality-constraint multiplier. The
/// multiplier follows the residual convention r = grad f_t + lambda * a,
/// so at a maximum it is the negative of the power price.
struct SaddleState {
  Matrix r;
  Matrix k21;
  double lambda = 0.0;
};

/// R0 = (P/m) I, K21 = 0, lambda = 0.
SaddleState initial_point(const ChannelPair& ch, double power);

}  // namespace wiretap
