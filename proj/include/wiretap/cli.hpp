#pragma once

// Subcommand drivers. Each returns the process exit code:
//   0  success (solver converged),
//   1  input error (unreadable or malformed file, bad flag values),
//   2  solver did not converge (a partial result is still written).
// Results go to `out` (or to --output); human diagnostics go to `err`.

#include "wiretap/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wiretap {

struct SolveFlags {
  SolverOverrides overrides;       // command-line settings, applied over the file's
  std::optional<SolveMode> mode;   // replaces the file's mode
  std::string output;              // empty: write to `out`
  bool include_trace = true;
};

int cmd_solve(const std::string& input_path, const SolveFlags& flags, std::ostream& out, std::ostream& err);

/// Minimum power reaching `rate` nats. The file's scalar power is ignored.
int cmd_dual(const std::string& input_path, double rate, const SolveFlags& flags, std::ostream& out,
             std::ostream& err);

struct BatchOptions {
  Index m = 4;
  Index n1 = 3;
  Index n2 = 3;
  int count = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
  double target_residual = 1e-10;
  double power = 10.0;
  SolverOverrides overrides;
  std::string output;  // empty: write to `out`
};

struct ChannelOutcome {
  int index = 0;
  bool converged = false;
  int total_newton_steps = 0;
  std::vector<int> stage_iterations;
  double capacity_upper = 0.0;
  double capacity_achievable = 0.0;
  double t_final = 0.0;
  std::string method;
  std::string error;  // empty on success
};

struct HistogramBucket {
  int lo = 0;  // inclusive
  int hi = 0;  // inclusive
  int count = 0;
};

struct BatchSummary {
  BatchOptions options;
  SolverConfig config;
  std::vector<ChannelOutcome> channels;  // ordered by channel index
  std::vector<HistogramBucket> histogram;  // total Newton steps, width 5
  double median_steps = 0.0;
  int min_steps = 0;
  int max_steps = 0;
  int failures = 0;
  int stages = 0;
  int max_stage_iterations = 0;
};

/// Channels are drawn up front from one NormalGenerator(seed): for each
/// channel, H1 (n1 x m) then H2 (n2 x m), row by row. Solved with solve_auto
/// on `jobs` worker threads. Throws std::invalid_argument on bad options.
BatchSummary run_batch(const BatchOptions& opts);

/// Deterministic for fixed options: contains no timing information.
nlohmann::json to_json(const BatchSummary& s);

/// Exit 0 when every channel converged, 2 when some failed, 1 on bad options.
int cmd_batch(const BatchOptions& opts, std::ostream& out, std::ostream& err);

/// Writes the trace of a result file as CSV. Only "csv" is supported.
int cmd_trace_export(const std::string& result_path, const std::string& format, const std::string& output,
                     std::ostream& out, std::ostream& err);

}  // namespace wiretap
