#include "wiretap/channel.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>
#include <string>

namespace wiretap {

namespace {

double spectral_norm_of(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

ChannelPair::ChannelPair(Matrix h1, Matrix h2) : h1_(std::move(h1)), h2_(std::move(h2)) {
  if (h1_.size() == 0 || h2_.size() == 0) throw std::invalid_argument("channel: empty channel matrix");
  if (h1_.cols() != h2_.cols()) {
    throw std::invalid_argument("channel: column mismatch (H1 has " + std::to_string(h1_.cols()) +
                                " columns, H2 has " + std::to_string(h2_.cols()) + ")");
  }
  if (!h1_.allFinite() || !h2_.allFinite()) throw std::invalid_argument("channel: non-finite entry");
  w1_ = symmetrize(h1_.transpose() * h1_);
  w2_ = symmetrize(h2_.transpose() * h2_);
  h_.resize(h1_.rows() + h2_.rows(), h1_.cols());
  h_ << h1_, h2_;
}

std::string_view to_string(Degradedness d) {
  switch (d) {
    case Degradedness::Degraded:
      return "degraded";
    case Degradedness::ReverselyDegraded:
      return "reversely_degraded";
    case Degradedness::Indefinite:
      return "indefinite";
  }
  return "unknown";
}

DegradednessReport classify_degraded(const ChannelPair& ch) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(ch.w1() - ch.w2()), Eigen::EigenvaluesOnly);
  const Vector eig = es.eigenvalues();
  const double tol = 1e-9 * (1.0 + spectral_norm_of(ch.w1()) + spectral_norm_of(ch.w2()));
  Degradedness kind = Degradedness::Indefinite;
  if (eig.minCoeff() >= -tol)
    kind = Degradedness::Degraded;
  else if (eig.maxCoeff() <= tol)
    kind = Degradedness::ReverselyDegraded;
  return {kind, eig, tol};
}

Matrix assemble_noise_covariance(const Matrix& k21) {
  const Index n2 = k21.rows();
  const Index n1 = k21.cols();
  Matrix k = Matrix::Identity(n1 + n2, n1 + n2);
  k.bottomLeftCorner(n2, n1) = k21;
  k.topRightCorner(n1, n2) = k21.transpose();
  return k;
}

NoiseCovariance::NoiseCovariance(Matrix k21) : k21_(std::move(k21)) {
  if (!k21_.allFinite()) throw std::invalid_argument("noise covariance: non-finite entry");
  if (spectral_norm() >= 1.0) throw DomainError("noise covariance: |K21|_2 >= 1, K is not positive definite");
}

NoiseCovariance NoiseCovariance::identity(Index n1, Index n2) {
  return NoiseCovariance(Matrix::Zero(n2, n1));
}

Matrix NoiseCovariance::assembled() const { return assemble_noise_covariance(k21_); }

double NoiseCovariance::spectral_norm() const { return spectral_norm_of(k21_); }

TransmitCovariance::TransmitCovariance(SymMat r, double power) : r_(std::move(r)), power_(power) {
  if (!(power_ > 0.0)) throw std::invalid_argument("transmit covariance: power must be positive");
  if (r_.dim() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(r_.matrix(), Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-12 * scale)
      throw std::invalid_argument("transmit covariance: R is not positive semidefinite");
  }
  if (r_.matrix().trace() > power_ + 1e-9 * (1.0 + power_))
    throw std::invalid_argument("transmit covariance: trace exceeds power budget");
}

Matrix effective_gram(const ChannelPair& ch, const Matrix& k21) {
  if (k21.rows() != ch.n2() || k21.cols() != ch.n1()) throw std::invalid_argument("effective_gram: K21 shape");
  Eigen::LLT<Matrix> llt(assemble_noise_covariance(k21));
  if (llt.info() != Eigen::Success) throw DomainError("effective_gram: K is not positive definite");
  return symmetrize(ch.h().transpose() * llt.solve(ch.h()));
}

SaddleState initial_point(const ChannelPair& ch, double power) {
  if (!(power > 0.0)) throw std::invalid_argument("initial_point: power must be positive");
  const Index m = ch.m();
  return {(power / double(m)) * Matrix::Identity(m, m), Matrix::Zero(ch.n2(), ch.n1()), 0.0};
}

}  // namespace wiretap
