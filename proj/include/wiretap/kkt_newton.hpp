#pragma once

// Residual-form primal-dual Newton method for equality-constrained saddle
// problems. The packed variable w = [z; lambda] stacks the primal variables
// and (when present) the multiplier of the equality constraint. The residual
//   r(w) = [grad f_t(z) + A^T lambda; A z - b]
// is driven to zero with Newton steps T dw = -r and a backtracking line
// search on |r|.

#include "wiretap/channel.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/objective.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wiretap {

struct KktSystem {
  Vector residual;
  Matrix matrix;
};

/// Objective values reported alongside each Newton iteration, in nats.
struct TraceValues {
  double f = 0.0;  // upper bound f(R, K)
  double c = 0.0;  // secrecy rate C(R)
};

/// A barrier subproblem at fixed t, seen by the Newton solver through the
/// packed vector w.
class NewtonProblem {
 public:
  virtual ~NewtonProblem() = default;

  virtual Index dimension() const = 0;
  /// Residual at w, or nullopt when w lies outside the barrier domain.
  virtual std::optional<Vector> residual(const Vector& w) const = 0;
  /// Residual and KKT matrix. Throws DomainError outside the barrier domain.
  virtual KktSystem assemble(const Vector& w) const = 0;
  virtual TraceValues values(const Vector& w) const = 0;
};

/// Packing of SaddleState for the total-power minimax problem:
/// w = [vech(R); vec(K21); lambda].
Vector pack(const SaddleState& s);
SaddleState unpack(const Vector& w, Index m, Index n1, Index n2);

/// Total-power minimax barrier subproblem (variables x, y and one multiplier
/// for tr R = P).
class MinimaxProblem final : public NewtonProblem {
 public:
  explicit MinimaxProblem(BarrierObjective obj) : obj_(std::move(obj)) {}

  const BarrierObjective& objective() const { return obj_; }

  Index dimension() const override { return obj_.num_x() + obj_.num_y() + 1; }
  std::optional<Vector> residual(const Vector& w) const override;
  KktSystem assemble(const Vector& w) const override;
  TraceValues values(const Vector& w) const override;

 private:
  BarrierObjective obj_;
};

/// Degraded-channel subproblem: maximize unhalved C(R) + ln|R| / t subject to
/// tr R = P. Packed as w = [vech(R); lambda].
class DegradedProblem final : public NewtonProblem {
 public:
  DegradedProblem(ChannelPair channel, double t, double power);

  Index dimension() const override { return vech_size(channel_.m()) + 1; }
  std::optional<Vector> residual(const Vector& w) const override;
  KktSystem assemble(const Vector& w) const override;
  TraceValues values(const Vector& w) const override;

 private:
  ChannelPair channel_;
  double t_;
  double power_;
  DuplicationMatrix dup_;
};

/// Residual and KKT matrix of the total-power minimax problem at `state`.
KktSystem assemble(const BarrierObjective& obj, const SaddleState& state);

struct NewtonOptions {
  double alpha = 0.3;
  double beta = 0.5;
  double eps = 1e-10;
  int max_iter = 200;
  double min_step = 1e-12;
  /// Reciprocal condition number (after equilibration) below which the KKT
  /// matrix is declared singular.
  double min_rcond = 1e-14;
};

/// Solves T dw = -r by LU with partial pivoting on the symmetrically
/// equilibrated matrix. Throws SingularKktError when the factorization is
/// singular or its reciprocal condition estimate is below min_rcond.
Vector newton_step(const KktSystem& sys, double min_rcond = 1e-14);

/// |T dw + r| / (|T| |dw| + |r|) in the infinity norm.
double backward_error(const KktSystem& sys, const Vector& dw);

/// Largest s in {1, beta, beta^2, ...} with |r(w + s dw)| <= (1 - alpha s)|r(w)|
/// and w + s dw inside the barrier domain. Must not be called with r(w) = 0.
/// Throws LineSearchFailure when s drops below min_step.
double line_search(const NewtonProblem& problem, const Vector& w, double residual_norm, const Vector& dw,
                   double alpha, double beta, double min_step = 1e-12);

double line_search(const BarrierObjective& obj, const SaddleState& state, const Vector& dw, double alpha,
                   double beta);

struct IterationRecord {
  int iter = 0;  // 1-based within one solve
  double residual_norm = 0.0;
  double step_size = 0.0;
  TraceValues values;
};

struct NewtonReport {
  int iterations = 0;
  double initial_residual_norm = 0.0;
  double final_residual_norm = 0.0;
  std::vector<double> step_sizes;
  std::vector<double> residual_history;  // initial residual first
  std::vector<IterationRecord> records;
  bool converged = false;
  std::string failure;  // empty on convergence
};

struct NewtonResult {
  Vector w;
  NewtonReport report;
};

/// Newton iterations from an interior w0 until |r| <= eps or max_iter.
/// Line-search failure or iteration exhaustion yields a non-converged report;
/// a singular KKT matrix propagates as SingularKktError.
NewtonResult newton_solve(const NewtonProblem& problem, Vector w0, const NewtonOptions& opts);

struct SaddleNewtonResult {
  SaddleState state;
  NewtonReport report;
};

SaddleNewtonResult newton_solve(const BarrierObjective& obj, const SaddleState& state, const NewtonOptions& opts);

}  // namespace wiretap
