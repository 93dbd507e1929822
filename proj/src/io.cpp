#include "wiretap/io.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace wiretap {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw InputError(field.empty() ? what : field + ": " + what);
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

double get_positive(const json& v, const std::string& field) {
  const double x = get_number(v, field);
  if (!(x > 0.0)) fail(field, "must be positive");
  return x;
}

Index get_dimension(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(field, "expected a positive integer");
  return static_cast<Index>(v.get<long long>());
}

Matrix get_matrix(const json& v, const std::string& field, bool allow_empty = false) {
  if (!v.is_array()) fail(field, "expected an array of rows");
  if (v.empty()) {
    if (allow_empty) return Matrix(0, 0);
    fail(field, "matrix has no rows");
  }
  const auto rows = static_cast<Index>(v.size());
  Index cols = -1;
  Matrix out;
  for (Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(rf, "expected an array of numbers");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      if (cols == 0) fail(rf, "row is empty");
      out.resize(rows, cols);
    } else if (static_cast<Index>(row.size()) != cols) {
      fail(rf, "row length " + std::to_string(row.size()) + " differs from row 0 length " + std::to_string(cols));
    }
    for (Index j = 0; j < cols; ++j)
      out(i, j) = get_number(row[static_cast<std::size_t>(j)], rf + "[" + std::to_string(j) + "]");
  }
  return out;
}

Vector get_vector(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array of numbers");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(Index(i)) = get_number(v[i], field + "[" + std::to_string(i) + "]");
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

bool same(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

template <class T>
bool same_opt(const std::optional<T>& a, const std::optional<T>& b) {
  if (a.has_value() != b.has_value()) return false;
  if constexpr (std::is_same_v<T, Vector>) {
    return !a || same(*a, *b);
  } else {
    return !a || *a == *b;
  }
}

json overrides_json(const SolverOverrides& o) {
  json s = json::object();
  if (o.alpha) s["alpha"] = *o.alpha;
  if (o.beta) s["beta"] = *o.beta;
  if (o.t0) s["t0"] = *o.t0;
  if (o.mu) s["mu"] = *o.mu;
  if (o.t_max) s["t_max"] = *o.t_max;
  if (o.eps_gap) s["eps_gap"] = *o.eps_gap;
  if (o.eps_newton) s["eps_newton"] = *o.eps_newton;
  if (o.max_newton_iter) s["max_newton_iter"] = *o.max_newton_iter;
  return s;
}

SolverOverrides parse_overrides(const json& s) {
  if (!s.is_object()) fail("solver", "expected an object");
  SolverOverrides o;
  for (const auto& [key, value] : s.items()) {
    const std::string field = "solver." + key;
    if (key == "alpha") o.alpha = get_positive(value, field);
    else if (key == "beta") o.beta = get_positive(value, field);
    else if (key == "t0") o.t0 = get_positive(value, field);
    else if (key == "mu") o.mu = get_positive(value, field);
    else if (key == "t_max") o.t_max = get_positive(value, field);
    else if (key == "eps_gap") o.eps_gap = get_positive(value, field);
    else if (key == "eps_newton") o.eps_newton = get_positive(value, field);
    else if (key == "max_newton_iter") o.max_newton_iter = static_cast<int>(get_dimension(value, field));
    else fail(field, "unknown solver setting");
  }
  return o;
}

json config_json(const SolverConfig& c) {
  return json{{"alpha", c.alpha}, {"beta", c.beta},           {"t0", c.t0},
              {"mu", c.mu},       {"t_max", c.t_max},         {"eps_gap", c.eps_gap},
              {"eps_newton", c.eps_newton}, {"max_newton_iter", c.max_newton_iter}};
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) fail(key, "missing field");
  return doc.at(key);
}

}  // namespace

std::string_view to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::Auto:
      return "auto";
    case SolveMode::Minimax:
      return "minimax";
    case SolveMode::Degraded:
      return "degraded";
    case SolveMode::PerAntenna:
      return "per_antenna";
    case SolveMode::Dual:
      return "dual";
  }
  return "auto";
}

SolveMode parse_mode(std::string_view text) {
  for (SolveMode m : {SolveMode::Auto, SolveMode::Minimax, SolveMode::Degraded, SolveMode::PerAntenna, SolveMode::Dual})
    if (to_string(m) == text) return m;
  fail("mode", "unknown mode '" + std::string(text) + "' (expected auto|minimax|degraded|per_antenna|dual)");
}

SolverConfig SolverOverrides::apply(SolverConfig c) const {
  if (alpha) c.alpha = *alpha;
  if (beta) c.beta = *beta;
  if (t0) c.t0 = *t0;
  if (mu) c.mu = *mu;
  if (t_max) c.t_max = *t_max;
  if (eps_gap) c.eps_gap = *eps_gap;
  if (eps_newton) c.eps_newton = *eps_newton;
  if (max_newton_iter) c.max_newton_iter = *max_newton_iter;
  return c;
}

void SolverOverrides::merge(const SolverOverrides& o) {
  if (o.alpha) alpha = o.alpha;
  if (o.beta) beta = o.beta;
  if (o.t0) t0 = o.t0;
  if (o.mu) mu = o.mu;
  if (o.t_max) t_max = o.t_max;
  if (o.eps_gap) eps_gap = o.eps_gap;
  if (o.eps_newton) eps_newton = o.eps_newton;
  if (o.max_newton_iter) max_newton_iter = o.max_newton_iter;
}

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) fail("", "problem file must be a JSON object");
  static const std::vector<std::string> known = {"H1", "H2", "power", "total_power", "mode", "solver",
                                                 "target_rate", "m", "n1", "n2"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown field");

  ProblemFile p;
  p.h1 = get_matrix(require(doc, "H1"), "H1");
  p.h2 = get_matrix(require(doc, "H2"), "H2");
  if (p.h1.cols() != p.h2.cols()) {
    fail("H2", "column mismatch: H1 has " + std::to_string(p.h1.cols()) + " columns, H2 has " +
                   std::to_string(p.h2.cols()));
  }
  if (doc.contains("m")) p.m = get_dimension(doc["m"], "m");
  if (doc.contains("n1")) p.n1 = get_dimension(doc["n1"], "n1");
  if (doc.contains("n2")) p.n2 = get_dimension(doc["n2"], "n2");
  if (p.m && *p.m != p.h1.cols()) fail("m", "declared m does not match the column count of H1 and H2");
  if (p.n1 && *p.n1 != p.h1.rows()) fail("n1", "declared n1 does not match the row count of H1");
  if (p.n2 && *p.n2 != p.h2.rows()) fail("n2", "declared n2 does not match the row count of H2");

  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) fail("mode", "expected a string");
    p.mode = parse_mode(doc["mode"].get<std::string>());
  }

  const json& power = require(doc, "power");
  if (power.is_array()) {
    p.per_antenna = get_vector(power, "power");
    if (p.per_antenna->size() != p.h1.cols())
      fail("power", "per-antenna caps must have one entry per transmit antenna (" + std::to_string(p.h1.cols()) + ")");
    for (Index i = 0; i < p.per_antenna->size(); ++i)
      if (!((*p.per_antenna)(i) > 0.0)) fail("power[" + std::to_string(i) + "]", "must be positive");
  } else {
    p.power = get_positive(power, "power");
  }
  if (doc.contains("total_power")) {
    if (!p.per_antenna) fail("total_power", "only valid together with per-antenna caps");
    p.total_power = get_positive(doc["total_power"], "total_power");
  }
  if (p.mode == SolveMode::PerAntenna && !p.per_antenna) fail("power", "per_antenna mode needs an array of caps");
  if (p.per_antenna && p.mode != SolveMode::Auto && p.mode != SolveMode::PerAntenna)
    fail("power", "per-antenna caps are only supported in auto and per_antenna modes");

  if (doc.contains("solver")) p.solver = parse_overrides(doc["solver"]);
  if (doc.contains("target_rate")) p.target_rate = get_positive(doc["target_rate"], "target_rate");
  if (p.mode == SolveMode::Dual && !p.power) fail("power", "dual mode needs a scalar power (initial bracket)");
  return p;
}

ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ProblemFile load_problem(const std::string& path) { return parse_problem_text(read_file(path)); }

json to_json(const ProblemFile& p) {
  json doc;
  doc["H1"] = matrix_json(p.h1);
  doc["H2"] = matrix_json(p.h2);
  if (p.m) doc["m"] = *p.m;
  if (p.n1) doc["n1"] = *p.n1;
  if (p.n2) doc["n2"] = *p.n2;
  if (p.per_antenna)
    doc["power"] = vector_json(*p.per_antenna);
  else if (p.power)
    doc["power"] = *p.power;
  if (p.total_power) doc["total_power"] = *p.total_power;
  doc["mode"] = std::string(to_string(p.mode));
  const json solver = overrides_json(p.solver);
  if (!solver.empty()) doc["solver"] = solver;
  if (p.target_rate) doc["target_rate"] = *p.target_rate;
  return doc;
}

bool operator==(const ProblemFile& a, const ProblemFile& b) {
  return same(a.h1, b.h1) && same(a.h2, b.h2) && a.m == b.m && a.n1 == b.n1 && a.n2 == b.n2 && a.power == b.power &&
         same_opt(a.per_antenna, b.per_antenna) && a.total_power == b.total_power && a.mode == b.mode &&
         a.solver == b.solver && a.target_rate == b.target_rate;
}

ResultFile make_result(const ChannelPair& ch, const SaddleSolution& sol, const SolverConfig& cfg, double wall_time) {
  ResultFile r;
  r.capacity_nats = sol.capacity_achievable;
  r.capacity_bits = sol.capacity_achievable / std::numbers::ln2;
  r.capacity_upper_nats = sol.capacity_upper;
  r.gap_bound = sol.gap_bound;
  r.t_final = sol.t_final;
  r.r_star = sol.r_star;
  r.k21_star = sol.k21_star;
  r.lambda = sol.lambda_star;
  if (sol.r_star.size() > 0)
    r.eig_r = Eigen::SelfAdjointEigenSolver<Matrix>(symmetrize(sol.r_star), Eigen::EigenvaluesOnly).eigenvalues();
  const DegradednessReport cls = classify_degraded(ch);
  r.eig_w1_minus_w2 = cls.eigenvalues;
  r.classification = std::string(to_string(cls.kind));
  r.method = sol.method;
  r.converged = sol.converged;
  r.total_newton_steps = sol.trace.total_newton_steps();
  r.stages = sol.trace.stages;
  r.trace = sol.trace.rows;
  r.diagnostics = sol.diagnostics;
  r.wall_time = wall_time;
  r.config = cfg;
  return r;
}

json to_json(const ResultFile& r) {
  json doc;
  doc["capacity_nats"] = r.capacity_nats;
  doc["capacity_bits"] = r.capacity_bits;
  doc["capacity_upper_nats"] = r.capacity_upper_nats;
  doc["gap_bound"] = r.gap_bound;
  doc["t_final"] = r.t_final;
  doc["R_star"] = matrix_json(r.r_star);
  doc["K21_star"] = matrix_json(r.k21_star);
  doc["lambda"] = r.lambda;
  doc["eig_R_star"] = vector_json(r.eig_r);
  doc["eig_W1_minus_W2"] = vector_json(r.eig_w1_minus_w2);
  doc["classification"] = r.classification;
  doc["method"] = r.method;
  doc["converged"] = r.converged;
  doc["total_newton_steps"] = r.total_newton_steps;
  json stages = json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"t", s.t},
                      {"iterations", s.iterations},
                      {"initial_residual", s.initial_residual},
                      {"final_residual", s.final_residual},
                      {"converged", s.converged}});
  doc["stages"] = std::move(stages);
  if (r.trace) {
    json rows = json::array();
    for (const auto& t : *r.trace)
      rows.push_back({{"t", t.t}, {"iter", t.iter}, {"residual", t.residual}, {"f", t.f}, {"C", t.c},
                      {"step_size", t.step_size}});
    doc["trace"] = std::move(rows);
  }
  doc["diagnostics"] = r.diagnostics;
  if (r.p_star) doc["P_star"] = *r.p_star;
  if (r.error) doc["error"] = *r.error;
  doc["wall_time"] = r.wall_time;
  doc["config"] = config_json(r.config);
  return doc;
}

ResultFile parse_result(const json& doc) {
  if (!doc.is_object()) fail("", "result file must be a JSON object");
  ResultFile r;
  try {
    r.capacity_nats = get_number(require(doc, "capacity_nats"), "capacity_nats");
    r.capacity_bits = get_number(require(doc, "capacity_bits"), "capacity_bits");
    r.capacity_upper_nats = get_number(require(doc, "capacity_upper_nats"), "capacity_upper_nats");
    r.gap_bound = get_number(require(doc, "gap_bound"), "gap_bound");
    r.t_final = get_number(require(doc, "t_final"), "t_final");
    r.r_star = get_matrix(require(doc, "R_star"), "R_star", true);
    r.k21_star = get_matrix(require(doc, "K21_star"), "K21_star", true);
    r.lambda = get_number(require(doc, "lambda"), "lambda");
    r.eig_r = get_vector(require(doc, "eig_R_star"), "eig_R_star");
    r.eig_w1_minus_w2 = get_vector(require(doc, "eig_W1_minus_W2"), "eig_W1_minus_W2");
    r.classification = require(doc, "classification").get<std::string>();
    r.method = require(doc, "method").get<std::string>();
    r.converged = require(doc, "converged").get<bool>();
    r.total_newton_steps = require(doc, "total_newton_steps").get<int>();
    for (const auto& s : require(doc, "stages"))
      r.stages.push_back({s.at("t").get<double>(), s.at("iterations").get<int>(), s.at("initial_residual").get<double>(),
                          s.at("final_residual").get<double>(), s.at("converged").get<bool>()});
    if (doc.contains("trace")) {
      std::vector<TraceRow> rows;
      for (const auto& t : doc["trace"])
        rows.push_back({t.at("t").get<double>(), t.at("iter").get<int>(), t.at("residual").get<double>(),
                        t.at("f").get<double>(), t.at("C").get<double>(), t.at("step_size").get<double>()});
      r.trace = std::move(rows);
    }
    r.diagnostics = require(doc, "diagnostics").get<std::vector<std::string>>();
    if (doc.contains("P_star")) r.p_star = get_number(doc["P_star"], "P_star");
    if (doc.contains("error")) r.error = doc["error"].get<std::string>();
    r.wall_time = get_number(require(doc, "wall_time"), "wall_time");
    const json& c = require(doc, "config");
    r.config.alpha = c.at("alpha").get<double>();
    r.config.beta = c.at("beta").get<double>();
    r.config.t0 = c.at("t0").get<double>();
    r.config.mu = c.at("mu").get<double>();
    r.config.t_max = c.at("t_max").get<double>();
    r.config.eps_gap = c.at("eps_gap").get<double>();
    r.config.eps_newton = c.at("eps_newton").get<double>();
    r.config.max_newton_iter = c.at("max_newton_iter").get<int>();
  } catch (const json::exception& e) {
    throw InputError(std::string("result file: ") + e.what());
  }
  return r;
}

ResultFile load_result(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_result(doc);
}

bool operator==(const ResultFile& a, const ResultFile& b) {
  auto same_stage = [](const StageSummary& x, const StageSummary& y) {
    return x.t == y.t && x.iterations == y.iterations && x.initial_residual == y.initial_residual &&
           x.final_residual == y.final_residual && x.converged == y.converged;
  };
  auto same_row = [](const TraceRow& x, const TraceRow& y) {
    return x.t == y.t && x.iter == y.iter && x.residual == y.residual && x.f == y.f && x.c == y.c &&
           x.step_size == y.step_size;
  };
  auto same_cfg = [](const SolverConfig& x, const SolverConfig& y) {
    return x.alpha == y.alpha && x.beta == y.beta && x.t0 == y.t0 && x.mu == y.mu && x.t_max == y.t_max &&
           x.eps_gap == y.eps_gap && x.eps_newton == y.eps_newton && x.max_newton_iter == y.max_newton_iter;
  };
  if (a.stages.size() != b.stages.size()) return false;
  for (std::size_t i = 0; i < a.stages.size(); ++i)
    if (!same_stage(a.stages[i], b.stages[i])) return false;
  if (a.trace.has_value() != b.trace.has_value()) return false;
  if (a.trace) {
    if (a.trace->size() != b.trace->size()) return false;
    for (std::size_t i = 0; i < a.trace->size(); ++i)
      if (!same_row((*a.trace)[i], (*b.trace)[i])) return false;
  }
  return a.capacity_nats == b.capacity_nats && a.capacity_bits == b.capacity_bits &&
         a.capacity_upper_nats == b.capacity_upper_nats && a.gap_bound == b.gap_bound && a.t_final == b.t_final &&
         same(a.r_star, b.r_star) && same(a.k21_star, b.k21_star) && a.lambda == b.lambda && same(a.eig_r, b.eig_r) &&
         same(a.eig_w1_minus_w2, b.eig_w1_minus_w2) && a.classification == b.classification && a.method == b.method &&
         a.converged == b.converged && a.total_newton_steps == b.total_newton_steps &&
         a.diagnostics == b.diagnostics && a.p_star == b.p_star && a.error == b.error && a.wall_time == b.wall_time &&
         same_cfg(a.config, b.config);
}

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::string out = "t,iter,residual,f,C,step_size\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17e,%d,%.17e,%.17e,%.17e,%.17e\n", r.t, r.iter, r.residual, r.f, r.c,
                  r.step_size);
    out += buf;
  }
  return out;
}

}  // namespace wiretap
