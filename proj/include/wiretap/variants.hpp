#pragma once

// Per-antenna power caps and the dual problem (minimum power for a target
// secrecy rate).

#include "wiretap/barrier_solver.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace wiretap {

/// Per-antenna caps r_ii <= P_i with an optional total cap tr R <= P_total.
struct PerAntennaBudget {
  Vector caps;
  std::optional<double> total;

  /// Throws std::invalid_argument on non-positive caps or a size mismatch.
  void validate(Index m) const;
  /// True when the total cap is present but not below sum(P_i).
  bool total_is_vacuous() const;
};

/// Barrier subproblem with m extra terms ln(P_i - r_ii)/t (and ln(P_total -
/// tr R)/t when the total cap binds) and no equality constraint.
/// Packed as w = [vech(R); vec(K21)].
class PerAntennaProblem final : public NewtonProblem {
 public:
  PerAntennaProblem(BarrierObjective obj, PerAntennaBudget budget);

  Index dimension() const override { return obj_.num_x() + obj_.num_y(); }
  std::optional<Vector> residual(const Vector& w) const override;
  KktSystem assemble(const Vector& w) const override;
  TraceValues values(const Vector& w) const override;

  /// Number of barrier terms on top of ln|R| and ln|K|.
  Index extra_barrier_terms() const;

 private:
  struct Slack {
    Vector per_antenna;
    std::optional<double> total;
  };
  Slack slack(const Matrix& r) const;  // throws DomainError when any slack <= 0
  void add_cap_terms(const Slack& s, Vector& grad_x, Matrix* hess_xx) const;

  BarrierObjective obj_;
  PerAntennaBudget budget_;
};

/// Start point R0 = diag(P_i / 2), scaled down when needed so tr R0 is at
/// most half the total cap; K21 = 0.
Matrix per_antenna_start(const PerAntennaBudget& budget);

/// (m + extra barrier terms + n1 + n2) / t. Heuristic.
double per_antenna_gap_bound(Index m, Index n1, Index n2, Index extra_terms, double t);

SaddleSolution solve_per_antenna(const ChannelPair& ch, const PerAntennaBudget& budget, const SolverConfig& cfg = {});

struct DualTarget {
  double rate = 0.0;      // required secrecy rate Rs, nats
  double p_hi = 0.0;      // initial bracket; <= 0 means search upward from 1
  double tol_rate = 1e-8;
};

struct DualResult {
  double p_star = 0.0;
  SaddleSolution solution;
  /// Every (P, Cs(P)) evaluated, in evaluation order.
  std::vector<std::pair<double, double>> evaluations;
};

/// Bisection on P over the achievable secrecy rate of solve_auto. Throws
/// std::invalid_argument("target rate unattainable within bracket") when
/// Cs(P_hi) < Rs, or when doubling from 1 reaches 2^40.
DualResult solve_dual(const ChannelPair& ch, const DualTarget& target, const SolverConfig& cfg = {});

}  // namespace wiretap
