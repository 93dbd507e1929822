#pragma once

// Outer barrier loop: warm-started Newton solves over t = t0, mu t0, ...,
// stopped by the gap bound or t_max, plus KKT certificate extraction.

#include "wiretap/channel.hpp"
#include "wiretap/kkt_newton.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace wiretap {

struct SolverConfig {
  double alpha = 0.3;
  double beta = 0.5;
  double t0 = 100.0;
  double mu = 10.0;
  double t_max = 1e5;
  double eps_gap = 1e-4;
  double eps_newton = 1e-10;
  int max_newton_iter = 200;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
  NewtonOptions newton_options() const;
};

/// One row per accepted Newton step. f and C are in nats.
struct TraceRow {
  double t = 0.0;
  int iter = 0;  // 1-based within the barrier stage
  double residual = 0.0;
  double f = 0.0;
  double c = 0.0;
  double step_size = 0.0;
};

struct StageSummary {
  double t = 0.0;
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  bool converged = false;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  std::vector<StageSummary> stages;

  int total_newton_steps() const;
};

struct SaddleSolution {
  Matrix r_star;
  Matrix k21_star;      // zero for the degraded path
  double lambda_star = 0.0;  // power price, >= 0 at a maximum
  double power = 0.0;
  double capacity_upper = 0.0;       // f(R*, K*) in nats
  double capacity_achievable = 0.0;  // C(R*) clamped at 0, nats
  double gap_bound = 0.0;
  double t_final = 0.0;
  bool converged = false;
  std::string method;  // "minimax", "degraded", "per_antenna", "reversely_degraded"
  ConvergenceTrace trace;
  std::vector<std::string> diagnostics;
};

/// Inner Newton failure. Carries everything computed up to the failure.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SaddleSolution partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const SaddleSolution& partial() const { return partial_; }

 private:
  SaddleSolution partial_;
};

/// max(m, n1 + n2) / t.
double gap_bound(Index m, Index n1, Index n2, double t);
/// m / t, the bound for the degraded-channel problem.
double degraded_gap_bound(Index m, double t);

/// Result of running the barrier schedule on an abstract subproblem family.
struct ScheduleResult {
  Vector w;
  double t_final = 0.0;
  ConvergenceTrace trace;
  bool converged = false;
  std::string failure;
};

using ProblemFactory = std::function<std::unique_ptr<NewtonProblem>(double t)>;

/// Algorithm: solve at t, warm start at mu t, until gap(t) <= eps_gap or the
/// next t would exceed t_max. Stops at the first non-converged stage.
ScheduleResult run_barrier_schedule(const ProblemFactory& make_problem, Vector w0, const SolverConfig& cfg,
                                    const std::function<double(double)>& gap);

/// Solves the total-power minimax problem. A reversely degraded channel
/// short-circuits to R = 0, Cs = 0. Throws SolverError on inner failure.
SaddleSolution solve_minimax(const ChannelPair& ch, double power, const SolverConfig& cfg = {});

/// Direct barrier maximization of C(R) for degraded channels (W1 >= W2).
/// Throws std::invalid_argument if the channel is not degraded.
SaddleSolution solve_degraded(const ChannelPair& ch, double power, const SolverConfig& cfg = {});

/// Dispatch on the degradedness class: degraded -> solve_degraded,
/// reversely degraded -> zero capacity, otherwise solve_minimax.
SaddleSolution solve_auto(const ChannelPair& ch, double power, const SolverConfig& cfg = {});

struct KktCertificate {
  double lambda = 0.0;  // power price
  Matrix m2_approx;     // R^{-1} / t
  double stationarity_residual_r = 0.0;
  double stationarity_residual_k = 0.0;
  double complementarity_r = 0.0;  // tr(M2 R) = m / t
  Matrix lambda1;  // diagonal blocks of the K-side multiplier
  Matrix lambda2;
  bool m1_certified = false;  // the K >= 0 multiplier is folded into grad_K f_t
};

/// KKT quantities of the unbarriered problem recovered from a barrier
/// solution at t = sol.t_final.
KktCertificate extract_certificate(const SaddleSolution& sol, const BarrierObjective& obj);

/// Appends a diagnostic when C(R*) trails f(R*, K*) by more than the gap
/// bound; the saddle R* can be non-unique or lag at finite t.
void note_achievable_lag(SaddleSolution& sol);

/// Appends a diagnostic when t_max ended the schedule before the gap bound
/// reached eps_gap.
void note_gap_target(SaddleSolution& sol, const SolverConfig& cfg);

/// Sets eigenvalues of R below floor * power to zero.
Matrix round_small_eigenvalues(const Matrix& r, double power, double floor = 1e-9);

}  // namespace wiretap
