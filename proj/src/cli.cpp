#include "wiretap/cli.hpp"

#include "wiretap/errors.hpp"
#include "wiretap/rng.hpp"
#include "wiretap/variants.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

namespace wiretap {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool emit(const std::string& text, const std::string& path, std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(path);
  if (!f || !(f << text)) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

int emit_result(ResultFile r, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  if (!flags.include_trace) r.trace.reset();
  return emit(to_json(r).dump(2) + "\n", flags.output, out, err) ? 0 : 1;
}

struct Prepared {
  ProblemFile problem;
  ChannelPair channel;
  SolverConfig config;
};

Prepared prepare(const std::string& input_path, const SolveFlags& flags) {
  ProblemFile p = load_problem(input_path);
  if (flags.mode) p.mode = *flags.mode;
  SolverOverrides o = p.solver;
  o.merge(flags.overrides);
  SolverConfig cfg = o.apply(SolverConfig{});
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("solver settings: ") + e.what());
  }
  ChannelPair ch(p.h1, p.h2);
  return {std::move(p), std::move(ch), cfg};
}

SaddleSolution dispatch(const Prepared& in) {
  const ProblemFile& p = in.problem;
  if (p.per_antenna) {
    if (p.mode != SolveMode::Auto && p.mode != SolveMode::PerAntenna)
      throw InputError("mode: per-antenna caps need mode auto or per_antenna");
    return solve_per_antenna(in.channel, PerAntennaBudget{*p.per_antenna, p.total_power}, in.config);
  }
  if (p.mode == SolveMode::PerAntenna) throw InputError("power: per_antenna mode needs an array of caps");
  switch (p.mode) {
    case SolveMode::Minimax:
      return solve_minimax(in.channel, *p.power, in.config);
    case SolveMode::Degraded:
      if (classify_degraded(in.channel).kind != Degradedness::Degraded)
        throw InputError("mode: degraded requested but W1 - W2 is not positive semidefinite");
      return solve_degraded(in.channel, *p.power, in.config);
    default:
      return solve_auto(in.channel, *p.power, in.config);
  }
}

int run_dual(const Prepared& in, double rate, const SolveFlags& flags, Clock::time_point start, std::ostream& out,
             std::ostream& err) {
  if (in.problem.per_antenna) {
    err << "error: power: the dual problem needs a scalar power budget\n";
    return 1;
  }
  DualResult d;
  try {
    d = solve_dual(in.channel, DualTarget{rate, 0.0, 1e-8}, in.config);
  } catch (const SolverError& e) {
    err << "error: solver did not converge: " << e.what() << "\n";
    ResultFile r = make_result(in.channel, e.partial(), in.config, seconds_since(start));
    r.error = e.what();
    emit_result(std::move(r), flags, out, err);
    return 2;
  }
  ResultFile r = make_result(in.channel, d.solution, in.config, seconds_since(start));
  r.p_star = d.p_star;
  const int code = emit_result(std::move(r), flags, out, err);
  return code != 0 ? code : (d.solution.converged ? 0 : 2);
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const SingularKktError& e) {
    err << "error: solver failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int cmd_solve(const std::string& input_path, const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto start = Clock::now();
    const Prepared in = prepare(input_path, flags);
    if (in.problem.mode == SolveMode::Dual) {
      if (!in.problem.target_rate) throw InputError("target_rate: dual mode needs a target rate");
      return run_dual(in, *in.problem.target_rate, flags, start, out, err);
    }
    try {
      const SaddleSolution sol = dispatch(in);
      const int code = emit_result(make_result(in.channel, sol, in.config, seconds_since(start)), flags, out, err);
      return code != 0 ? code : (sol.converged ? 0 : 2);
    } catch (const SolverError& e) {
      err << "error: solver did not converge: " << e.what() << "\n";
      ResultFile r = make_result(in.channel, e.partial(), in.config, seconds_since(start));
      r.error = e.what();
      emit_result(std::move(r), flags, out, err);
      return 2;
    }
  });
}

int cmd_dual(const std::string& input_path, double rate, const SolveFlags& flags, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto start = Clock::now();
    if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("--rate: must be positive");
    const Prepared in = prepare(input_path, flags);
    return run_dual(in, rate, flags, start, out, err);
  });
}

BatchSummary run_batch(const BatchOptions& opts) {
  if (opts.m < 1 || opts.n1 < 1 || opts.n2 < 1) throw std::invalid_argument("batch: dimensions must be positive");
  if (opts.count < 1) throw std::invalid_argument("batch: count must be at least 1");
  if (opts.jobs < 1) throw std::invalid_argument("batch: jobs must be at least 1");
  if (!(opts.target_residual > 0.0)) throw std::invalid_argument("batch: target residual must be positive");
  if (!(opts.power > 0.0) || !std::isfinite(opts.power)) throw std::invalid_argument("batch: power must be positive");

  BatchSummary s;
  s.options = opts;
  s.config = opts.overrides.apply(SolverConfig{});
  s.config.eps_newton = opts.target_residual;
  s.config.validate();

  NormalGenerator gen(opts.seed);
  std::vector<std::pair<Matrix, Matrix>> channels;
  channels.reserve(static_cast<std::size_t>(opts.count));
  for (int i = 0; i < opts.count; ++i) {
    Matrix h1 = gen.matrix(opts.n1, opts.m);
    Matrix h2 = gen.matrix(opts.n2, opts.m);
    channels.emplace_back(std::move(h1), std::move(h2));
  }

  s.channels.resize(channels.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < channels.size(); i = next++) {
      ChannelOutcome& o = s.channels[i];
      o.index = static_cast<int>(i);
      auto record = [&o](const SaddleSolution& sol) {
        o.converged = sol.converged;
        o.total_newton_steps = sol.trace.total_newton_steps();
        for (const auto& st : sol.trace.stages) o.stage_iterations.push_back(st.iterations);
        o.capacity_upper = sol.capacity_upper;
        o.capacity_achievable = sol.capacity_achievable;
        o.t_final = sol.t_final;
        o.method = sol.method;
      };
      try {
        const ChannelPair ch(channels[i].first, channels[i].second);
        record(solve_auto(ch, opts.power, s.config));
      } catch (const SolverError& e) {
        record(e.partial());
        o.converged = false;
        o.error = e.what();
      } catch (const std::exception& e) {
        o.converged = false;
        o.error = e.what();
      }
    }
  };
  const int threads = std::min<int>(opts.jobs, opts.count);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<int> steps;
  for (const auto& o : s.channels) {
    if (!o.converged) {
      ++s.failures;
      continue;
    }
    steps.push_back(o.total_newton_steps);
    for (int it : o.stage_iterations) {
      ++s.stages;
      s.max_stage_iterations = std::max(s.max_stage_iterations, it);
    }
  }
  if (!steps.empty()) {
    std::sort(steps.begin(), steps.end());
    const std::size_t n = steps.size();
    s.min_steps = steps.front();
    s.max_steps = steps.back();
    s.median_steps = n % 2 ? steps[n / 2] : 0.5 * (steps[n / 2 - 1] + steps[n / 2]);
    for (int lo = 0; lo <= s.max_steps; lo += 5) {
      HistogramBucket b{lo, lo + 4, 0};
      b.count = static_cast<int>(std::count_if(steps.begin(), steps.end(), [&b](int v) { return v >= b.lo && v <= b.hi; }));
      s.histogram.push_back(b);
    }
  }
  return s;
}

nlohmann::json to_json(const BatchSummary& s) {
  using nlohmann::json;
  json channels = json::array();
  for (const auto& o : s.channels) {
    json c{{"index", o.index},
           {"converged", o.converged},
           {"total_newton_steps", o.total_newton_steps},
           {"stage_iterations", o.stage_iterations},
           {"capacity_upper_nats", o.capacity_upper},
           {"capacity_nats", o.capacity_achievable},
           {"t_final", o.t_final},
           {"method", o.method}};
    if (!o.error.empty()) c["error"] = o.error;
    channels.push_back(std::move(c));
  }
  json hist = json::array();
  for (const auto& b : s.histogram) hist.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
  const SolverConfig& c = s.config;
  return json{{"m", s.options.m},
              {"n1", s.options.n1},
              {"n2", s.options.n2},
              {"count", s.options.count},
              {"seed", s.options.seed},
              {"power", s.options.power},
              {"target_residual", s.options.target_residual},
              {"generator", "mt19937_64 + Box-Muller, H1 then H2 per channel, row-major"},
              {"config",
               {{"alpha", c.alpha}, {"beta", c.beta}, {"t0", c.t0}, {"mu", c.mu}, {"t_max", c.t_max},
                {"eps_gap", c.eps_gap}, {"eps_newton", c.eps_newton}, {"max_newton_iter", c.max_newton_iter}}},
              {"channels", std::move(channels)},
              {"histogram", std::move(hist)},
              {"median_steps", s.median_steps},
              {"min_steps", s.min_steps},
              {"max_steps", s.max_steps},
              {"failures", s.failures},
              {"stages", s.stages},
              {"max_stage_iterations", s.max_stage_iterations}};
}

int cmd_batch(const BatchOptions& opts, std::ostream& out, std::ostream& err) {
  BatchSummary s;
  try {
    s = run_batch(opts);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& o : s.channels)
    if (!o.error.empty()) err << "channel " << o.index << ": " << o.error << "\n";
  if (!emit(to_json(s).dump(2) + "\n", opts.output, out, err)) return 1;
  return s.failures == 0 ? 0 : 2;
}

int cmd_trace_export(const std::string& result_path, const std::string& format, const std::string& output,
                     std::ostream& out, std::ostream& err) {
  if (format != "csv") {
    err << "error: --format: unsupported format '" << format << "' (only csv)\n";
    return 1;
  }
  ResultFile r;
  try {
    r = load_result(result_path);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!r.trace) {
    err << "error: " << result_path << ": result has no trace\n";
    return 1;
  }
  return emit(trace_to_csv(*r.trace), output, out, err) ? 0 : 1;
}

}  // namespace wiretap
