#include "doctest.h"

#include "support.hpp"
#include "wiretap/io.hpp"

#include <numbers>
#include <sstream>

using namespace wiretap;

namespace {

const char* kWorked = R"({"H1": [[0.77, -0.30], [-0.32, -0.64]],
                          "H2": [[0.54, -0.11], [-0.93, -1.71]], "power": 10})";

}  // namespace

TEST_CASE("problem file with defaults") {
  const ProblemFile p = parse_problem_text(kWorked);
  CHECK(p.h1 == testing_support::worked_h1());
  CHECK(p.h2 == testing_support::worked_h2());
  CHECK(p.power == 10.0);
  CHECK(p.mode == SolveMode::Auto);
  CHECK(p.solver == SolverOverrides{});
  CHECK_FALSE(p.per_antenna);
}

TEST_CASE("problem file with every field round-trips") {
  const char* text = R"({"H1": [[1, 0.5], [0.25, 2]], "H2": [[0.1, 0.2]], "power": [1.5, 2.5],
                         "total_power": 3, "mode": "per_antenna", "m": 2, "n1": 2, "n2": 1,
                         "solver": {"alpha": 0.2, "t_max": 1e6, "max_newton_iter": 50}})";
  const ProblemFile p = parse_problem_text(text);
  REQUIRE(p.per_antenna);
  CHECK((*p.per_antenna)(1) == 2.5);
  CHECK(p.total_power == 3.0);
  CHECK(p.solver.alpha == 0.2);
  CHECK(p.solver.max_newton_iter == 50);
  CHECK_FALSE(p.solver.beta);
  CHECK(p.solver.apply(SolverConfig{}).t_max == 1e6);
  CHECK(p.solver.apply(SolverConfig{}).beta == 0.5);
  const ProblemFile back = parse_problem(nlohmann::json::parse(to_json(p).dump()));
  CHECK(back == p);
  CHECK_FALSE(to_json(p)["solver"].contains("beta"));

  ProblemFile dual = parse_problem_text(
      R"({"H1": [[0.3141592653589793]], "H2": [[0.1]], "power": 1, "mode": "dual", "target_rate": 0.1})");
  CHECK(parse_problem(nlohmann::json::parse(to_json(dual).dump())) == dual);
}

TEST_CASE("problem file errors name the offending field") {
  auto error_of = [](const std::string& text) -> std::string {
    try {
      parse_problem_text(text);
    } catch (const InputError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2, 3]], "power": 1})").find("column mismatch") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": 0})").find("power") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": -3})").find("positive") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]]})").find("power: missing") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2], [3]], "H2": [[1, 2]], "power": 1})").find("H1[1]") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, "x"]], "H2": [[1, 2]], "power": 1})").find("H1[0][1]") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 1e999]], "H2": [[1, 2]], "power": 1})").find("overflow") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": 1, "n1": 2})").find("n1") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": 1, "colour": 2})").find("colour") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": 1, "solver": {"gamma": 1}})")
            .find("solver.gamma") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": 1, "mode": "fast"})").find("mode") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": [1]})").find("per-antenna") != std::string::npos);
  CHECK(error_of(R"({"H1": [[1, 2]], "H2": [[1, 2]], "power": 1, "total_power": 2})").find("total_power") !=
        std::string::npos);
  CHECK(error_of("{\"H1\": [[1, 2]],\n \"H2\": ").find("malformed JSON") != std::string::npos);
  CHECK(error_of("[1, 2]").find("object") != std::string::npos);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), InputError);
}

TEST_CASE("mode names") {
  for (SolveMode m : {SolveMode::Auto, SolveMode::Minimax, SolveMode::Degraded, SolveMode::PerAntenna, SolveMode::Dual})
    CHECK(parse_mode(to_string(m)) == m);
  CHECK_THROWS_AS(parse_mode("Auto"), InputError);
}

TEST_CASE("overrides merge field by field") {
  SolverOverrides a;
  a.alpha = 0.1;
  a.mu = 4.0;
  SolverOverrides b;
  b.mu = 8.0;
  b.eps_gap = 1e-6;
  a.merge(b);
  CHECK(a.alpha == 0.1);
  CHECK(a.mu == 8.0);
  CHECK(a.eps_gap == 1e-6);
}

TEST_CASE("result file round-trips losslessly") {
  const ChannelPair ch = testing_support::worked_channel();
  const SaddleSolution sol = solve_minimax(ch, 10.0);
  ResultFile r = make_result(ch, sol, SolverConfig{}, 0.0123456789012345);
  r.p_star = 1.0 / 3.0;
  r.error = "none";
  CHECK(std::abs(r.capacity_bits - r.capacity_nats / std::numbers::ln2) <= 1e-12);
  CHECK(r.eig_w1_minus_w2.size() == 2);
  CHECK(r.classification == "indefinite");
  CHECK(r.total_newton_steps == sol.trace.total_newton_steps());
  REQUIRE(r.trace);
  CHECK(r.trace->size() == std::size_t(r.total_newton_steps));

  const ResultFile back = parse_result(nlohmann::json::parse(to_json(r).dump()));
  CHECK(back == r);
  ResultFile no_trace = r;
  no_trace.trace.reset();
  CHECK_FALSE(parse_result(nlohmann::json::parse(to_json(no_trace).dump())).trace);
  CHECK_THROWS_AS(parse_result(nlohmann::json::parse(R"({"capacity_nats": 1})")), InputError);
}

TEST_CASE("trace CSV has a header and one full-precision row per step") {
  std::vector<TraceRow> rows = {{100.0, 1, 0.5, 0.25, -0.125, 1.0}, {100.0, 2, 1.0 / 3.0, 0.3, 0.2, 0.5}};
  const std::string csv = trace_to_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,iter,residual,f,C,step_size");
  std::getline(in, line);
  CHECK(line == "1.00000000000000000e+02,1,5.00000000000000000e-01,2.50000000000000000e-01,"
                "-1.25000000000000000e-01,1.00000000000000000e+00");
  std::getline(in, line);
  CHECK(std::stod(line.substr(line.find(',', line.find(',') + 1) + 1)) == 1.0 / 3.0);
  CHECK_FALSE(std::getline(in, line));
}
