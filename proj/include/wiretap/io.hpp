#pragma once

// Problem and result files. Both are JSON documents; matrices are arrays of
// rows. Numbers are written with round-trip precision.
//
// Problem file:
//   {
//     "H1": [[0.77, -0.30], [-0.32, -0.64]],
//     "H2": [[0.54, -0.11], [-0.93, -1.71]],
//     "power": 10,                  // or [P_1, ..., P_m] for per-antenna caps
//     "total_power": 12,            // optional, with per-antenna caps only
//     "mode": "auto",               // auto | minimax | degraded | per_antenna | dual
//     "solver": {"alpha": 0.3, "beta": 0.5, "t0": 100, "mu": 10, "t_max": 1e5,
//                "eps_gap": 1e-4, "eps_newton": 1e-10, "max_newton_iter": 200},
//     "target_rate": 0.3,           // dual mode, nats
//     "m": 2, "n1": 2, "n2": 2      // optional declared dimensions
//   }

#include "wiretap/barrier_solver.hpp"
#include "wiretap/channel.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wiretap {

/// Malformed or inconsistent input; the message names the offending field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolveMode { Auto, Minimax, Degraded, PerAntenna, Dual };

std::string_view to_string(SolveMode mode);
SolveMode parse_mode(std::string_view text);  // throws InputError

struct SolverOverrides {
  std::optional<double> alpha, beta, t0, mu, t_max, eps_gap, eps_newton;
  std::optional<int> max_newton_iter;

  SolverConfig apply(SolverConfig base) const;
  /// Fields present in `other` replace ours.
  void merge(const SolverOverrides& other);
  bool operator==(const SolverOverrides&) const = default;
};

struct ProblemFile {
  Matrix h1;
  Matrix h2;
  std::optional<Index> m, n1, n2;
  std::optional<double> power;       // total power budget
  std::optional<Vector> per_antenna;  // per-antenna caps
  std::optional<double> total_power;  // total cap alongside per-antenna caps
  SolveMode mode = SolveMode::Auto;
  SolverOverrides solver;
  std::optional<double> target_rate;
};

ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem(const std::string& path);
nlohmann::json to_json(const ProblemFile& p);

bool operator==(const ProblemFile& a, const ProblemFile& b);

struct ResultFile {
  double capacity_nats = 0.0;        // achievable C(R*), clamped at 0
  double capacity_bits = 0.0;
  double capacity_upper_nats = 0.0;  // f(R*, K*)
  double gap_bound = 0.0;
  double t_final = 0.0;
  Matrix r_star;
  Matrix k21_star;
  double lambda = 0.0;
  Vector eig_r;
  Vector eig_w1_minus_w2;
  std::string classification;
  std::string method;
  bool converged = false;
  int total_newton_steps = 0;
  std::vector<StageSummary> stages;
  std::optional<std::vector<TraceRow>> trace;
  std::vector<std::string> diagnostics;
  std::optional<double> p_star;
  std::optional<std::string> error;
  double wall_time = 0.0;
  SolverConfig config;
};

ResultFile make_result(const ChannelPair& ch, const SaddleSolution& sol, const SolverConfig& cfg, double wall_time);

nlohmann::json to_json(const ResultFile& r);
ResultFile parse_result(const nlohmann::json& doc);  // throws InputError
ResultFile load_result(const std::string& path);

bool operator==(const ResultFile& a, const ResultFile& b);

/// CSV with header "t,iter,residual,f,C,step_size", one row per Newton step,
/// numbers in %.17e.
std::string trace_to_csv(const std::vector<TraceRow>& rows);

}  // namespace wiretap
