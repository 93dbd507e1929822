#pragma once

// Shared fixtures and independent reference computations for the tests.
// Everything here is written directly against Eigen so that it does not
// reuse the code paths under test.

#include "wiretap/channel.hpp"
#include "wiretap/matcalc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace testing_support {

using wiretap::Index;
using wiretap::Matrix;
using wiretap::Vector;

inline Matrix worked_h1() {
  Matrix h(2, 2);
  h << 0.77, -0.30, -0.32, -0.64;
  return h;
}

inline Matrix worked_h2() {
  Matrix h(2, 2);
  h << 0.54, -0.11, -0.93, -1.71;
  return h;
}

inline wiretap::ChannelPair worked_channel() { return wiretap::ChannelPair(worked_h1(), worked_h2()); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  Matrix gaussian(Index rows, Index cols) {
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) a(i, j) = normal();
    return a;
  }

  /// Positive definite, trace = power, eigenvalues bounded away from 0.
  Matrix interior_r(Index m, double power) {
    const Matrix a = gaussian(m, m);
    Matrix r = a * a.transpose() + 0.2 * Matrix::Identity(m, m);
    return power * r / r.trace();
  }

  /// PSD with trace = power and random rank in [1, m].
  Matrix feasible_r(Index m, double power) {
    const Index rank = 1 + static_cast<Index>(uniform(0.0, double(m)));
    const Matrix a = gaussian(m, std::min(rank, m));
    Matrix r = a * a.transpose();
    return power * r / r.trace();
  }

  /// Spectral norm drawn uniformly in [0, max_norm).
  Matrix k21(Index n2, Index n1, double max_norm = 0.9) {
    Matrix b = gaussian(n2, n1);
    const double s = Eigen::JacobiSVD<Matrix>(b).singularValues()(0);
    return (uniform(0.0, max_norm) / s) * b;
  }

  wiretap::ChannelPair channel(Index m, Index n1, Index n2) {
    return wiretap::ChannelPair(gaussian(n1, m), gaussian(n2, m));
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double logdet_spd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

/// 1/2 ln(|I + H1 R H1'| / |I + H2 R H2'|).
inline double rate_oracle(const Matrix& h1, const Matrix& h2, const Matrix& r) {
  const Matrix s1 = Matrix::Identity(h1.rows(), h1.rows()) + h1 * r * h1.transpose();
  const Matrix s2 = Matrix::Identity(h2.rows(), h2.rows()) + h2 * r * h2.transpose();
  return 0.5 * (std::log(s1.determinant()) - std::log(s2.determinant()));
}

/// 1/2 ln(|K + H R H'| / |K|) - 1/2 ln|I + H2 R H2'|.
inline double upper_oracle(const Matrix& h1, const Matrix& h2, const Matrix& r, const Matrix& k21) {
  const Index n1 = h1.rows();
  const Index n2 = h2.rows();
  Matrix k = Matrix::Identity(n1 + n2, n1 + n2);
  k.bottomLeftCorner(n2, n1) = k21;
  k.topRightCorner(n1, n2) = k21.transpose();
  Matrix h(n1 + n2, h1.cols());
  h << h1, h2;
  const Matrix s2 = Matrix::Identity(n2, n2) + h2 * r * h2.transpose();
  return 0.5 * (std::log((k + h * r * h.transpose()).determinant()) - std::log(k.determinant()) -
                std::log(s2.determinant()));
}

/// Scalar channel: max over a uniform grid of 0 <= p <= P.
inline double scalar_grid_oracle(double h1, double h2, double power, int points) {
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double p = power * i / points;
    best = std::max(best, 0.5 * std::log((1.0 + h1 * h1 * p) / (1.0 + h2 * h2 * p)));
  }
  return best;
}

/// Two transmit antennas, single-antenna receivers: full-power beamforming
/// R = P u u', u = (cos a, sin a), maximized over `angles` angles in [0, pi).
inline double miso_grid_oracle(const Matrix& h1, const Matrix& h2, double power, long angles) {
  double best = 0.0;
  for (long i = 0; i < angles; ++i) {
    const double a = std::numbers::pi * double(i) / double(angles);
    const double c = std::cos(a);
    const double s = std::sin(a);
    const double g1 = h1(0, 0) * c + h1(0, 1) * s;
    const double g2 = h2(0, 0) * c + h2(0, 1) * s;
    best = std::max(best, 0.5 * std::log((1.0 + power * g1 * g1) / (1.0 + power * g2 * g2)));
  }
  return best;
}

/// MISO closed form: 1/2 ln of the largest generalized eigenvalue of
/// (I + P h1 h1', I + P h2 h2'), floored at zero.
inline double miso_closed_form(const Matrix& h1, const Matrix& h2, double power) {
  const Index m = h1.cols();
  const Matrix a = Matrix::Identity(m, m) + power * h1.transpose() * h1;
  const Matrix b = Matrix::Identity(m, m) + power * h2.transpose() * h2;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(a, b);
  return std::max(0.0, 0.5 * std::log(ges.eigenvalues().maxCoeff()));
}

/// Point-to-point capacity 1/2 sum ln(1 + g_i p_i) with water-filling over the
/// eigenvalues g_i of W, by bisection on the water level.
inline double water_filling(const Matrix& w, double power) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  const Vector g = es.eigenvalues();
  double lo = 0.0;
  double hi = power + 1.0 / std::max(g.maxCoeff(), 1e-300);
  auto used = [&g](double level) {
    double s = 0.0;
    for (Index i = 0; i < g.size(); ++i)
      if (g(i) > 0) s += std::max(0.0, level - 1.0 / g(i));
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (used(mid) < power ? lo : hi) = mid;
  }
  const double level = 0.5 * (lo + hi);
  double c = 0.0;
  for (Index i = 0; i < g.size(); ++i)
    if (g(i) > 0) c += 0.5 * std::log(1.0 + g(i) * std::max(0.0, level - 1.0 / g(i)));
  return c;
}

/// Parallel channel with diagonal gains and per-antenna caps: grid over
/// diagonal R = diag(p1, p2), 0 <= p_i <= caps_i.
inline double parallel_grid_oracle(const Vector& a, const Vector& b, const Vector& caps, int points) {
  double best = -1e300;
  for (int i = 0; i <= points; ++i)
    for (int j = 0; j <= points; ++j) {
      const double p1 = caps(0) * i / points;
      const double p2 = caps(1) * j / points;
      const double v = 0.5 * (std::log((1 + a(0) * a(0) * p1) / (1 + b(0) * b(0) * p1)) +
                              std::log((1 + a(1) * a(1) * p2) / (1 + b(1) * b(1) * p2)));
      best = std::max(best, v);
    }
  return best;
}

/// Central differences of a scalar function of a vector.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

/// Central differences of a vector function; column j is d g / d x_j.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& g, const Vector& x, double h) {
  const Vector g0 = g(x);
  Matrix j(g0.size(), x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    j.col(i) = (g(xp) - g(xm)) / (2 * h);
  }
  return j;
}

inline double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

/// Degraded channel: H1 = [H2; L'] so that W1 = W2 + L L'.
inline wiretap::ChannelPair degraded_channel(Rng& rng, Index m, Index n2, Index extra) {
  const Matrix h2 = rng.gaussian(n2, m);
  const Matrix l = rng.gaussian(m, extra);
  Matrix h1(n2 + extra, m);
  h1 << h2, l.transpose();
  return wiretap::ChannelPair(h1, h2);
}

}  // namespace testing_support

namespace testing_support {

/// General two-antenna transmitter: full-power rank-one covariances
/// R = P u u' over a grid of directions, rate from the determinant formula.
inline double rank_one_grid_oracle(const Matrix& h1, const Matrix& h2, double power, long angles) {
  double best = 0.0;
  for (long i = 0; i < angles; ++i) {
    const double a = std::numbers::pi * double(i) / double(angles);
    Vector u(2);
    u << std::cos(a), std::sin(a);
    const Matrix r = power * u * u.transpose();
    best = std::max(best, rate_oracle(h1, h2, r));
  }
  return best;
}

}  // namespace testing_support
