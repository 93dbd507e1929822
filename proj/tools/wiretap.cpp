// wiretap: secrecy capacity of Gaussian MIMO wiretap channels.

#include "wiretap/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

void add_solver_flags(CLI::App* app, wiretap::SolverOverrides& o) {
  auto opt = [app](const char* name, auto& field, const char* help) {
    app->add_option_function<std::decay_t<decltype(*field)>>(name, [&field](const auto& v) { field = v; }, help);
  };
  opt("--alpha", o.alpha, "line-search sufficient-decrease constant in (0, 1/2)");
  opt("--beta", o.beta, "line-search backtracking factor in (0, 1)");
  opt("--t0", o.t0, "initial barrier parameter");
  opt("--mu", o.mu, "barrier growth factor");
  opt("--t-max", o.t_max, "largest barrier parameter");
  opt("--eps-gap", o.eps_gap, "stop once the duality gap bound falls below this (nats)");
  opt("--eps-newton", o.eps_newton, "residual norm that ends a Newton stage");
  opt("--max-newton-iter", o.max_newton_iter, "Newton iteration cap per stage");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy capacity of Gaussian MIMO wiretap channels"};
  app.require_subcommand(1);

  wiretap::SolveFlags solve_flags;
  std::string solve_input;
  std::string mode_text;
  bool no_trace = false;
  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", solve_input, "problem file (JSON)")->required();
  solve->add_option("--mode", mode_text, "auto | minimax | degraded | per_antenna | dual");
  solve->add_option("-o,--output", solve_flags.output, "result file (default: stdout)");
  solve->add_flag("--no-trace", no_trace, "omit the per-iteration trace");
  add_solver_flags(solve, solve_flags.overrides);

  wiretap::SolveFlags dual_flags;
  std::string dual_input;
  double rate = 0.0;
  bool dual_no_trace = false;
  auto* dual = app.add_subcommand("dual", "minimum power reaching a secrecy rate");
  dual->add_option("file", dual_input, "problem file (JSON)")->required();
  dual->add_option("--rate", rate, "target secrecy rate in nats")->required();
  dual->add_option("-o,--output", dual_flags.output, "result file (default: stdout)");
  dual->add_flag("--no-trace", dual_no_trace, "omit the per-iteration trace");
  add_solver_flags(dual, dual_flags.overrides);

  wiretap::BatchOptions batch_opts;
  auto* batch = app.add_subcommand("batch", "solve seeded random channels and summarize Newton step counts");
  batch->add_option("--m", batch_opts.m, "transmit antennas")->capture_default_str();
  batch->add_option("--n1", batch_opts.n1, "receiver antennas")->capture_default_str();
  batch->add_option("--n2", batch_opts.n2, "eavesdropper antennas")->capture_default_str();
  batch->add_option("--count", batch_opts.count, "number of channels")->capture_default_str();
  batch->add_option("--seed", batch_opts.seed, "generator seed")->capture_default_str();
  batch->add_option("--jobs", batch_opts.jobs, "worker threads")->capture_default_str();
  batch->add_option("--target-residual", batch_opts.target_residual, "Newton residual target")->capture_default_str();
  batch->add_option("--power", batch_opts.power, "total power")->capture_default_str();
  batch->add_option("-o,--output", batch_opts.output, "summary file (default: stdout)");
  add_solver_flags(batch, batch_opts.overrides);

  std::string trace_input;
  std::string trace_format = "csv";
  std::string trace_output;
  auto* trace = app.add_subcommand("trace-export", "export the Newton trace of a result file");
  trace->add_option("result", trace_input, "result file (JSON)")->required();
  trace->add_option("--format", trace_format, "output format (csv)")->capture_default_str();
  trace->add_option("-o,--output", trace_output, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*solve) {
    if (!mode_text.empty()) {
      try {
        solve_flags.mode = wiretap::parse_mode(mode_text);
      } catch (const wiretap::InputError& e) {
        std::cerr << "error: --" << e.what() << "\n";
        return 1;
      }
    }
    solve_flags.include_trace = !no_trace;
    return wiretap::cmd_solve(solve_input, solve_flags, std::cout, std::cerr);
  }
  if (*dual) {
    dual_flags.include_trace = !dual_no_trace;
    return wiretap::cmd_dual(dual_input, rate, dual_flags, std::cout, std::cerr);
  }
  if (*batch) return wiretap::cmd_batch(batch_opts, std::cout, std::cerr);
  return wiretap::cmd_trace_export(trace_input, trace_format, trace_output, std::cout, std::cerr);
}
