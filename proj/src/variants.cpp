#include "wiretap/variants.hpp"

#include <cmath>
#include <sstream>

namespace wiretap {

void PerAntennaBudget::validate(Index m) const {
  if (caps.size() != m) {
    throw std::invalid_argument("per-antenna budget: expected " + std::to_string(m) + " caps, got " +
                                std::to_string(caps.size()));
  }
  if (!caps.allFinite() || (caps.array() <= 0.0).any())
    throw std::invalid_argument("per-antenna budget: every cap must be positive and finite");
  if (total && !(*total > 0.0 && std::isfinite(*total)))
    throw std::invalid_argument("per-antenna budget: total cap must be positive and finite");
}

bool PerAntennaBudget::total_is_vacuous() const { return total && *total >= caps.sum(); }

namespace {

PerAntennaBudget effective_budget(PerAntennaBudget b) {
  if (b.total_is_vacuous()) b.total.reset();
  return b;
}

}  // namespace

PerAntennaProblem::PerAntennaProblem(BarrierObjective obj, PerAntennaBudget budget)
    : obj_(std::move(obj)), budget_(effective_budget(std::move(budget))) {
  budget_.validate(obj_.channel().m());
}

Index PerAntennaProblem::extra_barrier_terms() const { return budget_.caps.size() + (budget_.total ? 1 : 0); }

PerAntennaProblem::Slack PerAntennaProblem::slack(const Matrix& r) const {
  Slack s;
  s.per_antenna = budget_.caps - r.diagonal();
  if ((s.per_antenna.array() <= 0.0).any()) throw DomainError("per-antenna cap violated");
  if (budget_.total) {
    s.total = *budget_.total - r.trace();
    if (!(*s.total > 0.0)) throw DomainError("total power cap violated");
  }
  return s;
}

void PerAntennaProblem::add_cap_terms(const Slack& s, Vector& grad_x, Matrix* hess_xx) const {
  const Index m = obj_.channel().m();
  const double inv_t = 1.0 / obj_.t();
  for (Index i = 0; i < m; ++i) {
    const Index k = vech_index(i, i, m);
    grad_x(k) -= inv_t / s.per_antenna(i);
    if (hess_xx) (*hess_xx)(k, k) -= inv_t / (s.per_antenna(i) * s.per_antenna(i));
  }
  if (s.total) {
    const Vector a = vech(Matrix::Identity(m, m));
    grad_x -= (inv_t / *s.total) * a;
    if (hess_xx) *hess_xx -= (inv_t / (*s.total * *s.total)) * a * a.transpose();
  }
}

namespace {

std::pair<Matrix, Matrix> split(const BarrierObjective& obj, const Vector& w) {
  const ChannelPair& ch = obj.channel();
  const Index nx = obj.num_x();
  return {unvech(w.head(nx)), unvec(w.segment(nx, obj.num_y()), ch.n2(), ch.n1())};
}

}  // namespace

std::optional<Vector> PerAntennaProblem::residual(const Vector& w) const {
  const auto [r, k21] = split(obj_, w);
  try {
    const Slack s = slack(r);
    DerivativeBundle d = derivatives(obj_, r, k21, false);
    add_cap_terms(s, d.grad_x, nullptr);
    Vector res(dimension());
    res << d.grad_x, d.grad_y;
    return res;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

KktSystem PerAntennaProblem::assemble(const Vector& w) const {
  const auto [r, k21] = split(obj_, w);
  const Slack s = slack(r);
  DerivativeBundle d = derivatives(obj_, r, k21, true);
  add_cap_terms(s, d.grad_x, &d.hess_xx);
  const Index nx = obj_.num_x();
  const Index ny = obj_.num_y();
  KktSystem sys;
  sys.residual.resize(nx + ny);
  sys.residual << d.grad_x, d.grad_y;
  sys.matrix.resize(nx + ny, nx + ny);
  sys.matrix << d.hess_xx, d.hess_xy, d.hess_xy.transpose(), d.hess_yy;
  return sys;
}

TraceValues PerAntennaProblem::values(const Vector& w) const {
  const auto [r, k21] = split(obj_, w);
  return {minimax_objective(obj_.channel(), r, k21), secrecy_rate(obj_.channel(), r)};
}

Matrix per_antenna_start(const PerAntennaBudget& budget) {
  double scale = 1.0;
  if (budget.total && !budget.total_is_vacuous()) scale = std::min(1.0, *budget.total / budget.caps.sum());
  return Matrix((0.5 * scale * budget.caps).asDiagonal());
}

double per_antenna_gap_bound(Index m, Index n1, Index n2, Index extra_terms, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("gap_bound: t must be positive");
  return double(m + extra_terms + n1 + n2) / t;
}

SaddleSolution solve_per_antenna(const ChannelPair& ch, const PerAntennaBudget& budget, const SolverConfig& cfg) {
  cfg.validate();
  budget.validate(ch.m());
  const double budget_power = budget.total_is_vacuous() || !budget.total ? budget.caps.sum() : *budget.total;

  SaddleSolution sol;
  sol.power = budget_power;
  sol.method = "per_antenna";
  if (budget.total_is_vacuous())
    sol.diagnostics.push_back("total power cap is not below the sum of per-antenna caps and was ignored");

  if (classify_degraded(ch).kind == Degradedness::ReverselyDegraded) {
    sol.r_star = Matrix::Zero(ch.m(), ch.m());
    sol.k21_star = Matrix::Zero(ch.n2(), ch.n1());
    sol.converged = true;
    sol.method = "reversely_degraded";
    sol.diagnostics.push_back("reversely degraded channel: zero secrecy capacity, transmitter stays silent");
    return sol;
  }

  const BarrierObjective base(ch, cfg.t0, budget_power);
  const PerAntennaProblem probe(base, budget);
  const Index extra = probe.extra_barrier_terms();
  const ProblemFactory factory = [&base, &budget](double t) {
    return std::make_unique<PerAntennaProblem>(base.with_t(t), budget);
  };
  const auto gap = [&ch, extra](double t) { return per_antenna_gap_bound(ch.m(), ch.n1(), ch.n2(), extra, t); };

  const Matrix r0 = per_antenna_start(budget);
  Vector w0(base.num_x() + base.num_y());
  w0 << vech(r0), Vector::Zero(base.num_y());
  ScheduleResult sched = run_barrier_schedule(factory, std::move(w0), cfg, gap);

  sol.r_star = unvech(sched.w.head(base.num_x()));
  sol.k21_star = unvec(sched.w.segment(base.num_x(), base.num_y()), ch.n2(), ch.n1());
  sol.capacity_upper = minimax_objective(ch, sol.r_star, sol.k21_star);
  sol.capacity_achievable = std::max(0.0, secrecy_rate(ch, sol.r_star));
  sol.t_final = sched.t_final;
  sol.gap_bound = gap(sched.t_final);
  sol.converged = sched.converged;
  sol.trace = std::move(sched.trace);
  sol.diagnostics.push_back("per-antenna gap bound (m + extra barrier terms + n1 + n2)/t is heuristic");
  if (!sched.converged) throw SolverError(sched.failure, std::move(sol));
  note_gap_target(sol, cfg);
  note_achievable_lag(sol);
  return sol;
}

DualResult solve_dual(const ChannelPair& ch, const DualTarget& target, const SolverConfig& cfg) {
  if (!(target.rate > 0.0) || !std::isfinite(target.rate))
    throw std::invalid_argument("dual: target rate must be positive");
  if (!(target.tol_rate > 0.0)) throw std::invalid_argument("dual: rate tolerance must be positive");

  DualResult out;
  auto evaluate = [&](double p) {
    SaddleSolution s = solve_auto(ch, p, cfg);
    out.evaluations.emplace_back(p, s.capacity_achievable);
    return s;
  };

  double hi = target.p_hi > 0.0 ? target.p_hi : 1.0;
  SaddleSolution hi_sol = evaluate(hi);
  if (target.p_hi > 0.0) {
    if (hi_sol.capacity_achievable < target.rate) throw std::invalid_argument("target rate unattainable within bracket");
  } else {
    constexpr double kMaxPower = 1099511627776.0;  // 2^40
    while (hi_sol.capacity_achievable < target.rate) {
      if (hi >= kMaxPower) throw std::invalid_argument("target rate unattainable within bracket");
      hi *= 2.0;
      hi_sol = evaluate(hi);
    }
  }

  double lo = 0.0;  // Cs(0) = 0 < Rs
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
    if (std::abs(hi_sol.capacity_achievable - target.rate) <= target.tol_rate) break;
    const double mid = 0.5 * (lo + hi);
    SaddleSolution mid_sol = evaluate(mid);
    if (mid_sol.capacity_achievable >= target.rate) {
      hi = mid;
      hi_sol = std::move(mid_sol);
    } else if (target.rate - mid_sol.capacity_achievable <= target.tol_rate) {
      hi = mid;
      hi_sol = std::move(mid_sol);
      break;
    } else {
      lo = mid;
    }
  }
  out.p_star = hi;
  out.solution = std::move(hi_sol);
  return out;
}

}  // namespace wiretap
