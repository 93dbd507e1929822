#include "wiretap/barrier_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wiretap {

void SolverConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("solver config: alpha must lie in (0, 1/2)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("solver config: beta must lie in (0, 1)");
  if (!(t0 > 0.0)) throw std::invalid_argument("solver config: t0 must be positive");
  if (!(mu > 1.0)) throw std::invalid_argument("solver config: mu must exceed 1");
  if (!(t_max >= t0)) throw std::invalid_argument("solver config: t_max must be >= t0");
  if (!(eps_gap > 0.0)) throw std::invalid_argument("solver config: eps_gap must be positive");
  if (!(eps_newton > 0.0)) throw std::invalid_argument("solver config: eps_newton must be positive");
  if (max_newton_iter < 1) throw std::invalid_argument("solver config: max_newton_iter must be >= 1");
}

NewtonOptions SolverConfig::newton_options() const {
  NewtonOptions o;
  o.alpha = alpha;
  o.beta = beta;
  o.eps = eps_newton;
  o.max_iter = max_newton_iter;
  return o;
}

int ConvergenceTrace::total_newton_steps() const {
  int total = 0;
  for (const auto& s : stages) total += s.iterations;
  return total;
}

double gap_bound(Index m, Index n1, Index n2, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("gap_bound: t must be positive");
  return double(std::max(m, n1 + n2)) / t;
}

double degraded_gap_bound(Index m, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("gap_bound: t must be positive");
  return double(m) / t;
}

ScheduleResult run_barrier_schedule(const ProblemFactory& make_problem, Vector w0, const SolverConfig& cfg,
                                    const std::function<double(double)>& gap) {
  cfg.validate();
  const NewtonOptions opts = cfg.newton_options();
  ScheduleResult out;
  out.w = std::move(w0);
  double t = cfg.t0;
  while (true) {
    const auto problem = make_problem(t);
    NewtonResult res = newton_solve(*problem, out.w, opts);
    const NewtonReport& rep = res.report;
    out.w = std::move(res.w);
    out.t_final = t;
    for (const auto& rec : rep.records)
      out.trace.rows.push_back({t, rec.iter, rec.residual_norm, rec.values.f, rec.values.c, rec.step_size});
    out.trace.stages.push_back({t, rep.iterations, rep.initial_residual_norm, rep.final_residual_norm, rep.converged});
    if (!rep.converged) {
      std::ostringstream msg;
      msg << "Newton solve did not converge at t = " << t << ": " << rep.failure;
      out.failure = msg.str();
      return out;
    }
    if (gap(t) <= cfg.eps_gap || t * cfg.mu > cfg.t_max * (1.0 + 1e-12)) break;
    t *= cfg.mu;
  }
  out.converged = true;
  return out;
}

namespace {

SaddleSolution zero_capacity_solution(const ChannelPair& ch, double power) {
  SaddleSolution sol;
  sol.r_star = Matrix::Zero(ch.m(), ch.m());
  sol.k21_star = Matrix::Zero(ch.n2(), ch.n1());
  sol.power = power;
  sol.converged = true;
  sol.method = "reversely_degraded";
  sol.diagnostics.push_back("reversely degraded channel: zero secrecy capacity, transmitter stays silent");
  return sol;
}

void add_rank_diagnostic(const ChannelPair& ch, SaddleSolution& sol) {
  const DegradednessReport cls = classify_degraded(ch);
  const auto positive = (cls.eigenvalues.array() > cls.tolerance).count();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(sol.r_star), Eigen::EigenvaluesOnly);
  const auto rank = (es.eigenvalues().array() > 1e-6 * sol.power).count();
  if (rank > positive) {
    std::ostringstream msg;
    msg << "rank of R* (" << rank << " eigenvalues above 1e-6 P) exceeds the number of positive eigenvalues of "
        << "W1 - W2 (" << positive << "); t_final may be too small";
    sol.diagnostics.push_back(msg.str());
  }
}

void require_power(double power) {
  if (!(power > 0.0) || !std::isfinite(power)) throw std::invalid_argument("solver: power must be positive and finite");
}

}  // namespace

SaddleSolution solve_minimax(const ChannelPair& ch, double power, const SolverConfig& cfg) {
  require_power(power);
  cfg.validate();
  if (classify_degraded(ch).kind == Degradedness::ReverselyDegraded) return zero_capacity_solution(ch, power);

  const BarrierObjective base(ch, cfg.t0, power);
  const ProblemFactory factory = [&base](double t) { return std::make_unique<MinimaxProblem>(base.with_t(t)); };
  const auto gap = [&ch](double t) { return gap_bound(ch.m(), ch.n1(), ch.n2(), t); };
  ScheduleResult sched = run_barrier_schedule(factory, pack(initial_point(ch, power)), cfg, gap);

  const SaddleState s = unpack(sched.w, ch.m(), ch.n1(), ch.n2());
  SaddleSolution sol;
  sol.r_star = symmetrize(s.r);
  sol.k21_star = s.k21;
  sol.lambda_star = -s.lambda;
  sol.power = power;
  sol.capacity_upper = minimax_objective(ch, sol.r_star, sol.k21_star);
  sol.capacity_achievable = std::max(0.0, secrecy_rate(ch, sol.r_star));
  sol.t_final = sched.t_final;
  sol.gap_bound = gap_bound(ch.m(), ch.n1(), ch.n2(), sched.t_final);
  sol.converged = sched.converged;
  sol.method = "minimax";
  sol.trace = std::move(sched.trace);
  if (!sched.converged) throw SolverError(sched.failure, std::move(sol));
  add_rank_diagnostic(ch, sol);
  note_gap_target(sol, cfg);
  note_achievable_lag(sol);
  return sol;
}

SaddleSolution solve_degraded(const ChannelPair& ch, double power, const SolverConfig& cfg) {
  require_power(power);
  cfg.validate();
  if (classify_degraded(ch).kind != Degradedness::Degraded)
    throw std::invalid_argument("solve_degraded: channel is not degraded (W1 - W2 has a negative eigenvalue)");

  const Index m = ch.m();
  Vector w0(vech_size(m) + 1);
  w0 << vech((power / double(m)) * Matrix::Identity(m, m)), 0.0;
  const ProblemFactory factory = [&ch, power](double t) { return std::make_unique<DegradedProblem>(ch, t, power); };
  const auto gap = [m](double t) { return degraded_gap_bound(m, t); };
  ScheduleResult sched = run_barrier_schedule(factory, std::move(w0), cfg, gap);

  SaddleSolution sol;
  sol.r_star = unvech(sched.w.head(vech_size(m)));
  sol.k21_star = Matrix::Zero(ch.n2(), ch.n1());
  sol.lambda_star = -sched.w(vech_size(m));
  sol.power = power;
  sol.capacity_upper = secrecy_rate(ch, sol.r_star);
  sol.capacity_achievable = std::max(0.0, sol.capacity_upper);
  sol.t_final = sched.t_final;
  sol.gap_bound = degraded_gap_bound(m, sched.t_final);
  sol.converged = sched.converged;
  sol.method = "degraded";
  sol.trace = std::move(sched.trace);
  if (!sched.converged) throw SolverError(sched.failure, std::move(sol));
  add_rank_diagnostic(ch, sol);
  note_gap_target(sol, cfg);
  return sol;
}

SaddleSolution solve_auto(const ChannelPair& ch, double power, const SolverConfig& cfg) {
  switch (classify_degraded(ch).kind) {
    case Degradedness::Degraded:
      return solve_degraded(ch, power, cfg);
    case Degradedness::ReverselyDegraded:
      require_power(power);
      return zero_capacity_solution(ch, power);
    case Degradedness::Indefinite:
      break;
  }
  return solve_minimax(ch, power, cfg);
}

KktCertificate extract_certificate(const SaddleSolution& sol, const BarrierObjective& obj) {
  const ChannelPair& ch = obj.channel();
  const InteriorPoint p(ch, sol.r_star, sol.k21_star);
  const double t = obj.t();
  const Index m = ch.m();
  const Index n1 = ch.n1();
  const Index n2 = ch.n2();

  KktCertificate cert;
  cert.lambda = sol.lambda_star;
  cert.m2_approx = p.r_inv / t;
  cert.complementarity_r = (cert.m2_approx * sol.r_star).trace();
  cert.stationarity_residual_r =
      (p.z1 - p.z2 + cert.m2_approx - cert.lambda * Matrix::Identity(m, m)).norm();
  // grad_K f_t = -Lambda at a K-stationary point: the diagonal blocks are the
  // multiplier, the off-diagonal blocks must vanish.
  const Matrix gk = grad_k(p, t);
  cert.lambda1 = -gk.topLeftCorner(n1, n1);
  cert.lambda2 = -gk.bottomRightCorner(n2, n2);
  cert.stationarity_residual_k = std::sqrt(2.0) * gk.bottomLeftCorner(n2, n1).norm();
  cert.m1_certified = false;
  return cert;
}

void note_achievable_lag(SaddleSolution& sol) {
  const double lag = sol.capacity_upper - sol.capacity_achievable;
  if (lag > sol.gap_bound) {
    std::ostringstream msg;
    msg << "achievable rate C(R*) trails f(R*, K*) by " << lag << " nats, more than the gap bound "
        << sol.gap_bound << "; raise t_max for a tighter R*";
    sol.diagnostics.push_back(msg.str());
  }
}

void note_gap_target(SaddleSolution& sol, const SolverConfig& cfg) {
  if (sol.gap_bound > cfg.eps_gap) {
    std::ostringstream msg;
    msg << "t_max = " << cfg.t_max << " reached with gap bound " << sol.gap_bound << " above eps_gap = "
        << cfg.eps_gap;
    sol.diagnostics.push_back(msg.str());
  }
}

Matrix round_small_eigenvalues(const Matrix& r, double power, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(r));
  Vector ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) < floor * power) ev(i) = 0.0;
  return symmetrize(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace wiretap
