#include "wiretap/kkt_newton.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace wiretap {

Vector pack(const SaddleState& s) {
  const Vector x = vech(s.r);
  const Vector y = vec(s.k21);
  Vector w(x.size() + y.size() + 1);
  w << x, y, s.lambda;
  return w;
}

SaddleState unpack(const Vector& w, Index m, Index n1, Index n2) {
  const Index nx = vech_size(m);
  const Index ny = n1 * n2;
  if (w.size() != nx + ny + 1) throw std::invalid_argument("unpack: packed vector has the wrong length");
  return {unvech(w.head(nx)), unvec(w.segment(nx, ny), n2, n1), w(nx + ny)};
}

namespace {

SaddleState unpack_for(const BarrierObjective& obj, const Vector& w) {
  const ChannelPair& ch = obj.channel();
  return unpack(w, ch.m(), ch.n1(), ch.n2());
}

Vector minimax_residual(const BarrierObjective& obj, const SaddleState& s, const DerivativeBundle& d) {
  const Index nx = obj.num_x();
  const Index ny = obj.num_y();
  const Vector a = vech(Matrix::Identity(obj.channel().m(), obj.channel().m()));
  Vector r(nx + ny + 1);
  r.head(nx) = d.grad_x + s.lambda * a;
  r.segment(nx, ny) = d.grad_y;
  r(nx + ny) = s.r.trace() - obj.power();
  return r;
}

}  // namespace

std::optional<Vector> MinimaxProblem::residual(const Vector& w) const {
  const SaddleState s = unpack_for(obj_, w);
  try {
    return minimax_residual(obj_, s, derivatives(obj_, s.r, s.k21, false));
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

KktSystem MinimaxProblem::assemble(const Vector& w) const { return wiretap::assemble(obj_, unpack_for(obj_, w)); }

TraceValues MinimaxProblem::values(const Vector& w) const {
  const SaddleState s = unpack_for(obj_, w);
  return {minimax_objective(obj_.channel(), s.r, s.k21), secrecy_rate(obj_.channel(), s.r)};
}

KktSystem assemble(const BarrierObjective& obj, const SaddleState& state) {
  const DerivativeBundle d = derivatives(obj, state.r, state.k21, true);
  const Index nx = obj.num_x();
  const Index ny = obj.num_y();
  const Index n = nx + ny + 1;
  const Vector a = vech(Matrix::Identity(obj.channel().m(), obj.channel().m()));

  KktSystem sys;
  sys.residual = minimax_residual(obj, state, d);
  sys.matrix = Matrix::Zero(n, n);
  sys.matrix.topLeftCorner(nx, nx) = d.hess_xx;
  sys.matrix.block(0, nx, nx, ny) = d.hess_xy;
  sys.matrix.block(nx, 0, ny, nx) = d.hess_xy.transpose();
  sys.matrix.block(nx, nx, ny, ny) = d.hess_yy;
  sys.matrix.block(0, nx + ny, nx, 1) = a;
  sys.matrix.block(nx + ny, 0, 1, nx) = a.transpose();
  return sys;
}

DegradedProblem::DegradedProblem(ChannelPair channel, double t, double power)
    : channel_(std::move(channel)), t_(t), power_(power), dup_(channel_.m()) {
  if (!(t_ > 0.0) || !(power_ > 0.0)) throw std::invalid_argument("degraded problem: t and power must be positive");
}

std::optional<Vector> DegradedProblem::residual(const Vector& w) const {
  const Index nx = vech_size(channel_.m());
  const Matrix r = unvech(w.head(nx));
  try {
    const DegradedDerivatives d = degraded_derivatives(channel_, dup_, r, t_, false);
    Vector res(nx + 1);
    res.head(nx) = d.grad_x + w(nx) * vech(Matrix::Identity(channel_.m(), channel_.m()));
    res(nx) = r.trace() - power_;
    return res;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

KktSystem DegradedProblem::assemble(const Vector& w) const {
  const Index nx = vech_size(channel_.m());
  const Matrix r = unvech(w.head(nx));
  const DegradedDerivatives d = degraded_derivatives(channel_, dup_, r, t_, true);
  const Vector a = vech(Matrix::Identity(channel_.m(), channel_.m()));
  KktSystem sys;
  sys.residual.resize(nx + 1);
  sys.residual.head(nx) = d.grad_x + w(nx) * a;
  sys.residual(nx) = r.trace() - power_;
  sys.matrix = Matrix::Zero(nx + 1, nx + 1);
  sys.matrix.topLeftCorner(nx, nx) = d.hess_xx;
  sys.matrix.block(0, nx, nx, 1) = a;
  sys.matrix.block(nx, 0, 1, nx) = a.transpose();
  return sys;
}

TraceValues DegradedProblem::values(const Vector& w) const {
  const double c = secrecy_rate(channel_, unvech(w.head(vech_size(channel_.m()))));
  return {c, c};
}

double backward_error(const KktSystem& sys, const Vector& dw) {
  const double num = (sys.matrix * dw + sys.residual).lpNorm<Eigen::Infinity>();
  const double tnorm = sys.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  const double den = tnorm * dw.lpNorm<Eigen::Infinity>() + sys.residual.lpNorm<Eigen::Infinity>();
  return den > 0.0 ? num / den : 0.0;
}

Vector newton_step(const KktSystem& sys, double min_rcond) {
  const Index n = sys.matrix.rows();
  if (sys.matrix.cols() != n || sys.residual.size() != n) throw std::invalid_argument("newton_step: shape mismatch");
  if (!sys.matrix.allFinite() || !sys.residual.allFinite()) throw SingularKktError("newton_step: non-finite KKT data");

  // Symmetric equilibration keeps the rcond estimate meaningful when the
  // barrier terms blow up some rows.
  Vector scale(n);
  for (Index i = 0; i < n; ++i) {
    const double rmax = sys.matrix.row(i).cwiseAbs().maxCoeff();
    scale(i) = rmax > 0.0 ? 1.0 / std::sqrt(rmax) : 1.0;
  }
  const Matrix scaled = scale.asDiagonal() * sys.matrix * scale.asDiagonal();
  Eigen::PartialPivLU<Matrix> lu(scaled);
  const double rcond = lu.rcond();
  if (!(rcond >= min_rcond)) {
    std::ostringstream msg;
    msg << "newton_step: KKT matrix is singular or ill-conditioned (rcond = " << rcond << ", size " << n << ")";
    throw SingularKktError(msg.str());
  }
  Vector dw = scale.asDiagonal() * lu.solve(-(scale.asDiagonal() * sys.residual));
  // One round of iterative refinement on the original system.
  const Vector defect = sys.matrix * dw + sys.residual;
  dw -= scale.asDiagonal() * lu.solve(scale.asDiagonal() * defect);
  return dw;
}

double line_search(const NewtonProblem& problem, const Vector& w, double residual_norm, const Vector& dw,
                   double alpha, double beta, double min_step) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("line_search: alpha must lie in (0, 1/2)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("line_search: beta must lie in (0, 1)");
  double s = 1.0;
  while (s >= min_step) {
    const auto r = problem.residual(w + s * dw);
    if (r && r->allFinite() && r->norm() <= (1.0 - alpha * s) * residual_norm) return s;
    s *= beta;
  }
  std::ostringstream msg;
  msg << "line search stalled: step below " << min_step << " at |r| = " << residual_norm;
  throw LineSearchFailure(msg.str(), s / beta, residual_norm);
}

double line_search(const BarrierObjective& obj, const SaddleState& state, const Vector& dw, double alpha,
                   double beta) {
  const MinimaxProblem problem(obj);
  const Vector w = pack(state);
  const auto r = problem.residual(w);
  if (!r) throw DomainError("line_search: starting point is outside the barrier domain");
  return line_search(problem, w, r->norm(), dw, alpha, beta);
}

NewtonResult newton_solve(const NewtonProblem& problem, Vector w0, const NewtonOptions& opts) {
  NewtonResult out{std::move(w0), {}};
  NewtonReport& rep = out.report;
  KktSystem sys = problem.assemble(out.w);
  double norm = sys.residual.norm();
  rep.initial_residual_norm = norm;
  rep.residual_history.push_back(norm);

  while (true) {
    if (norm <= opts.eps) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= opts.max_iter) {
      rep.failure = "iteration limit reached";
      break;
    }
    const Vector dw = newton_step(sys, opts.min_rcond);
    double s = 0.0;
    try {
      s = line_search(problem, out.w, norm, dw, opts.alpha, opts.beta, opts.min_step);
    } catch (const LineSearchFailure& e) {
      rep.failure = e.what();
      break;
    }
    out.w += s * dw;
    sys = problem.assemble(out.w);
    norm = sys.residual.norm();
    ++rep.iterations;
    rep.step_sizes.push_back(s);
    rep.residual_history.push_back(norm);
    rep.records.push_back({rep.iterations, norm, s, problem.values(out.w)});
  }
  rep.final_residual_norm = norm;
  return out;
}

SaddleNewtonResult newton_solve(const BarrierObjective& obj, const SaddleState& state, const NewtonOptions& opts) {
  const MinimaxProblem problem(obj);
  NewtonResult res = newton_solve(problem, pack(state), opts);
  return {unpack_for(obj, res.w), std::move(res.report)};
}

}  // namespace wiretap
