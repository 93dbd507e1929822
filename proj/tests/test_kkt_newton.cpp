#include "doctest.h"

#include "support.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/kkt_newton.hpp"

using namespace wiretap;
using testing_support::Rng;

namespace {

Vector interior_w(Rng& rng, const BarrierObjective& obj) {
  const ChannelPair& ch = obj.channel();
  return pack({rng.interior_r(ch.m(), obj.power()), rng.k21(ch.n2(), ch.n1()), rng.normal()});
}

}  // namespace

TEST_CASE("pack and unpack are inverse") {
  Rng rng(41);
  const SaddleState s{rng.interior_r(3, 2.0), rng.k21(2, 4), -0.7};
  const Vector w = pack(s);
  CHECK(w.size() == 6 + 8 + 1);
  const SaddleState back = unpack(w, 3, 4, 2);
  CHECK((back.r - s.r).norm() < 1e-15);
  CHECK(back.k21 == s.k21);
  CHECK(back.lambda == s.lambda);
}

TEST_CASE("residual stacks stationarity and the power constraint") {
  Rng rng(42);
  const BarrierObjective obj(rng.channel(2, 2, 1), 100.0, 3.0);
  const SaddleState s{rng.interior_r(2, 2.5), rng.k21(1, 2), 0.4};
  const KktSystem sys = assemble(obj, s);
  const DerivativeBundle d = derivatives(obj, s.r, s.k21, false);
  Vector a = vech(Matrix::Identity(2, 2));
  CHECK((sys.residual.head(3) - (d.grad_x + 0.4 * a)).norm() < 1e-12);
  CHECK((sys.residual.segment(3, 2) - d.grad_y).norm() < 1e-12);
  CHECK(sys.residual(5) == doctest::Approx(2.5 - 3.0));
}

TEST_CASE("KKT matrix is the Jacobian of the residual") {
  Rng rng(43);
  for (int k = 0; k < 5; ++k) {
    const MinimaxProblem prob(BarrierObjective(rng.channel(3, 2, 2), 50.0, 4.0));
    const Vector w = interior_w(rng, prob.objective());
    auto res = [&prob](const Vector& v) { return *prob.residual(v); };
    const KktSystem sys = prob.assemble(w);
    CHECK(testing_support::rel_err(sys.matrix, testing_support::fd_jacobian(res, w, 1e-6)) < 1e-5);
    CHECK((sys.residual - *prob.residual(w)).norm() < 1e-12);
  }
}

TEST_CASE("degraded subproblem Jacobian matches finite differences") {
  Rng rng(44);
  const DegradedProblem prob(testing_support::degraded_channel(rng, 3, 2, 2), 40.0, 5.0);
  Vector w(7);
  w << vech(rng.interior_r(3, 4.0)), 0.3;
  auto res = [&prob](const Vector& v) { return *prob.residual(v); };
  CHECK(testing_support::rel_err(prob.assemble(w).matrix, testing_support::fd_jacobian(res, w, 1e-6)) < 1e-5);
}

TEST_CASE("residual is empty outside the barrier domain") {
  const MinimaxProblem prob(BarrierObjective(testing_support::worked_channel(), 10.0, 10.0));
  Vector w = pack({-Matrix::Identity(2, 2), Matrix::Zero(2, 2), 0.0});
  CHECK_FALSE(prob.residual(w).has_value());
  CHECK_THROWS_AS(prob.assemble(w), DomainError);
}

TEST_CASE("newton step solves the linear system accurately") {
  Rng rng(45);
  const MinimaxProblem prob(BarrierObjective(rng.channel(4, 3, 3), 1e4, 10.0));
  const KktSystem sys = prob.assemble(interior_w(rng, prob.objective()));
  const Vector dw = newton_step(sys);
  CHECK((sys.matrix * dw + sys.residual).norm() <= 1e-9 * (1.0 + sys.residual.norm()));
  CHECK(backward_error(sys, dw) < 1e-13);
}

TEST_CASE("singular KKT matrices are rejected") {
  KktSystem sys{Vector::Ones(3), Matrix::Zero(3, 3)};
  CHECK_THROWS_AS(newton_step(sys), SingularKktError);
  sys = KktSystem{Vector::Ones(2), Matrix(2, 2)};
  sys.matrix << 1.0, 2.0, 2.0, 4.0 + 4e-15;
  CHECK_THROWS_AS(newton_step(sys), SingularKktError);
}

TEST_CASE("line search accepts only sufficient decrease") {
  Rng rng(46);
  const MinimaxProblem prob(BarrierObjective(testing_support::worked_channel(), 1e3, 10.0));
  const Vector w = pack(initial_point(prob.objective().channel(), 10.0));
  const KktSystem sys = prob.assemble(w);
  const Vector dw = newton_step(sys);
  const double norm = sys.residual.norm();
  const double s = line_search(prob, w, norm, dw, 0.3, 0.5);
  CHECK(s > 0.0);
  CHECK(s <= 1.0);
  CHECK(prob.residual(w + s * dw)->norm() <= (1.0 - 0.3 * s) * norm);
  const double s_state = line_search(prob.objective(), initial_point(prob.objective().channel(), 10.0), dw, 0.3, 0.5);
  CHECK(s_state == s);
  CHECK_THROWS_AS(line_search(prob, w, norm, -dw, 0.3, 0.5), LineSearchFailure);
}

TEST_CASE("Newton converges on the worked channel at fixed t") {
  const BarrierObjective obj(testing_support::worked_channel(), 1e3, 10.0);
  const SaddleNewtonResult res = newton_solve(obj, initial_point(obj.channel(), 10.0), NewtonOptions{});
  CHECK(res.report.converged);
  CHECK(res.report.iterations <= 25);
  CHECK(res.report.final_residual_norm <= 1e-10);
  CHECK(res.state.r.trace() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(res.report.residual_history.size() == std::size_t(res.report.iterations) + 1);
  for (int k = 0; k < res.report.iterations; ++k) {
    const double s = res.report.step_sizes[std::size_t(k)];
    CHECK(res.report.residual_history[std::size_t(k) + 1] <= (1 - 0.3 * s) * res.report.residual_history[std::size_t(k)]);
  }
  CHECK(res.report.step_sizes.back() == 1.0);
  CHECK(res.report.failure.empty());
}

TEST_CASE("iteration cap yields a non-converged report") {
  const MinimaxProblem prob(BarrierObjective(testing_support::worked_channel(), 1e3, 10.0));
  NewtonOptions opts;
  opts.max_iter = 2;
  const NewtonResult res = newton_solve(prob, pack(initial_point(prob.objective().channel(), 10.0)), opts);
  CHECK_FALSE(res.report.converged);
  CHECK(res.report.iterations == 2);
  CHECK_FALSE(res.report.failure.empty());
}
