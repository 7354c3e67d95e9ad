#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mfg1d/analytic.hpp"
#include "mfg1d/errors.hpp"
#include "mfg1d/pipeline.hpp"
#include "mfg1d/reconstruct.hpp"

namespace mfg1d::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct SampleTable {
  SampledFunction m;
  SampledFunction u;
  SampledFunction er;
};

struct RunOutput {
  ordered_json summary;
  std::optional<SampleTable> table;
  int code = kSuccess;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::string& header, const PeriodicGrid& grid,
               const std::vector<const SampledFunction*>& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid.node(i));
    for (const SampledFunction* col : columns) out << ',' << format_double((*col)[i]);
    out << '\n';
  }
}

void write_json(const fs::path& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

ordered_json list(std::span<const double> values) {
  ordered_json out = ordered_json::array();
  for (double v : values) out.push_back(v);
  return out;
}

// NaN has no JSON representation.
ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

double mean(const SampledFunction& f) { return quad_periodic(f); }

SampleTable sample_table(const Solution& sol, const FunctionSpec& kernel,
                        const SampledFunction& potential) {
  SampledFunction er =
      error_functional(sol.m, sol.hbar, kernel.function(), potential, sol.j, sol.alpha);
  return SampleTable{sol.m, sol.u, std::move(er)};
}

void describe_solution(ordered_json& summary, const Solution& sol, const SampleTable& table) {
  summary["a"] = list(sol.coeffs.a_coeffs());
  summary["b"] = list(sol.coeffs.b_coeffs());
  summary["hbar"] = sol.hbar;
  summary["c"] = sol.c;
  summary["mass"] = quad_periodic(sol.m);
  summary["min_m"] = sol.m.min();
  summary["residual"] = table.er.max();
  summary["mean_error"] = mean(table.er);
}

void describe_report(ordered_json& summary, const SolverReport& report) {
  summary["termination"] = to_string(report.termination);
  summary["path"] = to_string(report.path);
  summary["iterations"] = report.iterations;
  summary["polish_iterations"] = report.polish_iterations;
  summary["system_residual"] = report.residual;
  summary["objective_trace"] = report.objective_trace;
}

ordered_json base_summary(const ProblemConfig& config, const std::string& branch) {
  ordered_json summary;
  summary["status"] = "";
  summary["branch"] = branch;
  summary["alpha"] = config.alpha;
  summary["current"] = config.current;
  summary["grid"] = config.grid;
  return summary;
}

std::size_t fourier_order(const ProblemConfig& config) {
  if (config.order) return *config.order;
  if (config.kernel.is_trig() && config.potential.is_trig()) {
    return std::max(config.kernel.poly().order(), config.potential.poly().order());
  }
  if (config.kernel.is_trig()) return config.kernel.poly().order();
  return config.schedule.orders.back();
}

TrigPoly coefficients_of(const FunctionSpec& f, std::size_t order, std::size_t grid) {
  if (f.is_trig()) return f.poly();
  return analyze(SampledFunction::sample(PeriodicGrid(grid), f.function()), order);
}

RunOutput run_zero_current(const ProblemConfig& config) {
  RunOutput run;
  run.summary = base_summary(config, "zero-current");
  const std::size_t order = fourier_order(config);
  ZeroCurrentProblem prob;
  try {
    prob.kernel = coefficients_of(config.kernel, order, config.grid);
    prob.potential = coefficients_of(config.potential, order, config.grid);
  } catch (const AliasingError& e) {
    throw ConfigError("grid", e.what());
  }
  const ZeroCurrentResult result = zero_current_solve(prob);
  run.summary["status"] = to_string(result.outcome);
  run.summary["outcome"] = to_string(result.outcome);
  run.summary["mode"] = result.mode;
  run.summary["order"] = order;

  switch (result.outcome) {
    case ZeroCurrentOutcome::Solution: run.code = kSuccess; break;
    case ZeroCurrentOutcome::NoSolution: run.code = kNoSolution; return run;
    case ZeroCurrentOutcome::NonUnique: run.code = kNonUnique; break;
    case ZeroCurrentOutcome::NotPositive: run.code = kNotPositive; break;
  }
  run.summary["hbar"] = result.hbar;
  run.summary["density_cos"] = list(result.density.cos_coeffs());
  run.summary["density_sin"] = list(result.density.sin_coeffs());
  run.summary["min_m"] = result.min_density;
  if (result.outcome == ZeroCurrentOutcome::NotPositive) return run;

  const PeriodicGrid grid(config.grid);
  const SampledFunction m = SampledFunction::sample(grid, result.density);
  const SampledFunction u(grid, std::vector<double>(grid.size(), 0.0));
  const SampledFunction potential = SampledFunction::sample(grid, config.potential.function());
  SampledFunction er = error_functional(m, result.hbar, config.kernel.function(), potential, 0.0,
                                        config.alpha);
  run.summary["c"] = 0.0;
  run.summary["mass"] = quad_periodic(m);
  run.summary["residual"] = er.max();
  run.summary["mean_error"] = mean(er);
  run.table = SampleTable{m, u, std::move(er)};
  return run;
}

RunOutput run_trig(const ProblemConfig& config, const CongestionParams& params) {
  RunOutput run;
  run.summary = base_summary(config, "trig");
  std::optional<KernelCoeffs> kernel;
  kernel.emplace(config.kernel.poly());
  const std::size_t order = config.order.value_or(kernel->highest_active_mode());
  if (kernel->highest_active_mode() > order) {
    throw ConfigError("order", "must be at least the kernel order " +
                                   std::to_string(kernel->highest_active_mode()));
  }
  run.summary["order"] = order;

  std::optional<PotentialContext> ctx;
  try {
    ctx.emplace(params, config.potential.function(), order, config.grid);
  } catch (const AliasingError& e) {
    throw ConfigError("grid", e.what());
  }
  const TrigSolveResult result = solve_trig(*ctx, *kernel, config.solver);
  const Solution sol = make_solution(*ctx, result.point, *kernel);
  SampleTable table = sample_table(sol, config.kernel, ctx->potential_samples());

  run.summary["status"] = to_string(result.report.termination);
  describe_report(run.summary, result.report);
  describe_solution(run.summary, sol, table);
  run.table = std::move(table);
  run.code = result.report.termination == Termination::Converged ? kSuccess : kSolverFailure;
  return run;
}

RunOutput run_pipeline(const ProblemConfig& config, const CongestionParams& params, Streams io) {
  RunOutput run;
  run.summary = base_summary(config, "pipeline");
  ApproxSchedule schedule = config.schedule;
  if (config.order) {
    std::erase_if(schedule.orders, [&](std::size_t n) { return n > *config.order; });
    if (schedule.orders.empty()) schedule.orders.push_back(*config.order);
  }
  const GeneralKernel g{config.kernel.function()};
  try {
    approximate_kernel(g, schedule.orders.back(), schedule.method, config.grid);
  } catch (const AliasingError& e) {
    throw ConfigError("grid", e.what());
  }

  PipelineOptions options;
  options.grid_size = config.grid;
  try {
    const GeneralSolveResult result =
        solve_general(params, config.potential.function(), g, schedule, config.solver, options);
    const SampledFunction potential =
        SampledFunction::sample(PeriodicGrid(config.grid), config.potential.function());
    SampleTable table = sample_table(result.solution, config.kernel, potential);
    run.summary["status"] = to_string(result.report.termination);
    run.summary["order"] = result.trace.back().order;
    run.summary["kernel_approximation"] = to_string(schedule.method);
    describe_report(run.summary, result.report);
    describe_solution(run.summary, result.solution, table);
    ordered_json stages = ordered_json::array();
    for (const StageRecord& s : result.trace) {
      stages.push_back({{"order", s.order},
                        {"iterations", s.iterations},
                        {"system_residual", s.residual},
                        {"m_diff", number_or_null(s.m_diff)},
                        {"hbar_diff", number_or_null(s.hbar_diff)},
                        {"sup_error", s.sup_error}});
    }
    run.summary["stopped_early"] = result.stopped_early;
    run.summary["stages"] = std::move(stages);
    run.table = std::move(table);
  } catch (const StageError& e) {
    io.err << "error: " << e.what() << '\n';
    run.summary["status"] = "stage_failure";
    run.summary["failed_stage"] = e.stage();
    run.summary["failed_order"] = e.order();
    run.summary["message"] = e.what();
    run.code = kSolverFailure;
  }
  return run;
}

RunOutput run_problem(const ProblemConfig& config, Streams io) {
  if (config.current == 0.0) return run_zero_current(config);
  const CongestionParams params = CongestionParams::make(config.alpha, config.current);
  if (config.kernel.is_trig()) return run_trig(config, params);
  return run_pipeline(config, params, io);
}

void write_outputs(const fs::path& dir, const RunOutput& run) {
  fs::create_directories(dir);
  write_json(dir / "summary.json", run.summary);
  if (run.table) {
    write_csv(dir / "samples.csv", "x,m,u,er", run.table->m.grid(),
              {&run.table->m, &run.table->u, &run.table->er});
  }
}

void report(const RunOutput& run, Streams io) {
  io.out << run.summary["status"].get<std::string>();
  if (run.summary.contains("mode") && run.summary["mode"].get<std::size_t>() != 0) {
    io.out << " (mode " << run.summary["mode"].get<std::size_t>() << ")";
  }
  if (run.summary.contains("residual")) {
    io.out << ": sup er = " << format_double(run.summary["residual"].get<double>());
  }
  if (run.summary.contains("hbar")) {
    io.out << ", hbar = " << format_double(run.summary["hbar"].get<double>());
  }
  io.out << '\n';
}

// Runs `body`, mapping library and config errors to exit codes.
template <typename Body>
int guarded(Streams io, Body body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    io.err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InadmissibleKernel& e) {
    io.err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    io.err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    io.err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

double estimate_hbar(const SampledFunction& m, const RealFunction& kernel,
                     const SampledFunction& potential, double j, double alpha) {
  const SampledFunction er0 = convolve_sampled(kernel, m);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    sum += 0.5 * j * j / std::pow(m[i], alpha) + potential[i] - er0[i];
  }
  return sum / static_cast<double>(m.size());
}

std::optional<double> hbar_from_summary(const fs::path& table_path) {
  const fs::path summary = table_path.parent_path() / "summary.json";
  std::ifstream in(summary);
  if (!in) return std::nullopt;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.contains("hbar") && doc["hbar"].is_number()) return doc["hbar"].get<double>();
  } catch (const nlohmann::json::exception&) {
  }
  return std::nullopt;
}

std::vector<double> read_m_column(const std::string& path, std::vector<double>& xs) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open table");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path, "empty table");
  if (line.rfind("x,m", 0) != 0) throw ConfigError(path, "header must start with \"x,m\"");
  std::vector<double> m;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string x_text;
    std::string m_text;
    std::getline(fields, x_text, ',');
    std::getline(fields, m_text, ',');
    char* end = nullptr;
    const double x = std::strtod(x_text.c_str(), &end);
    const bool x_ok = !x_text.empty() && *end == '\0';
    const double mv = std::strtod(m_text.c_str(), &end);
    if (!x_ok || m_text.empty() || *end != '\0') {
      throw ConfigError(path + ":" + std::to_string(line_no), "malformed row");
    }
    xs.push_back(x);
    m.push_back(mv);
  }
  return m;
}

void write_plot_script(const fs::path& dir, const std::string& tag) {
  std::ofstream out(dir / "plot.gp", std::ios::binary);
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set terminal pngcairo size 1200,400\n"
      << "set output '" << tag << ".png'\n"
      << "set multiplot layout 1,3\n"
      << "plot 'kernel_potential.csv' using 1:2 with lines, '' using 1:3 with lines\n"
      << "plot 'solution.csv' using 1:2 with lines, '' using 1:3 with lines\n"
      << "plot 'error.csv' using 1:2 with lines\n"
      << "unset multiplot\n";
}

}  // namespace

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              const Overrides& overrides, Streams io) {
  return guarded(io, [&] {
    ProblemConfig config = load_config(config_path);
    apply_overrides(config, overrides);
    const RunOutput run = run_problem(config, io);
    write_outputs(out_dir, run);
    report(run, io);
    return run.code;
  });
}

int cmd_zero_current(const std::string& config_path, const std::string& out_dir,
                     const Overrides& overrides, Streams io) {
  return guarded(io, [&] {
    ProblemConfig config = load_config(config_path);
    apply_overrides(config, overrides);
    if (config.current != 0.0) throw ConfigError("current", "zero-current requires current = 0");
    const RunOutput run = run_zero_current(config);
    write_outputs(out_dir, run);
    report(run, io);
    return run.code;
  });
}

int cmd_validate(const std::string& table_path, const std::string& config_path,
                 std::optional<double> tol, const Overrides& overrides, Streams io) {
  return guarded(io, [&] {
    ProblemConfig config = load_config(config_path);
    apply_overrides(config, overrides);
    const double threshold = tol.value_or(config.validate_tol);
    if (!(threshold > 0.0)) throw ConfigError("--tol", "must be positive");

    std::vector<double> xs;
    std::vector<double> m_values = read_m_column(table_path, xs);
    const std::size_t n = m_values.size();
    if (n != config.grid) {
      throw ConfigError("grid", "mismatch: table has " + std::to_string(n) +
                                    " rows, config grid is " + std::to_string(config.grid));
    }
    const PeriodicGrid grid(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(xs[i] - grid.node(i)) > 1e-12) {
        throw ConfigError("grid", "mismatch: row " + std::to_string(i) + " has x = " +
                                      format_double(xs[i]) + ", expected " +
                                      format_double(grid.node(i)));
      }
    }
    const SampledFunction m(grid, std::move(m_values));
    if (!(m.min() > 0.0)) {
      io.err << "table density is not positive\n";
      return static_cast<int>(kSolverFailure);
    }
    const SampledFunction potential = SampledFunction::sample(grid, config.potential.function());
    const RealFunction kernel = config.kernel.function();
    const std::optional<double> stored = hbar_from_summary(table_path);
    const double hbar = stored ? *stored
                               : estimate_hbar(m, kernel, potential, config.current, config.alpha);
    const SampledFunction er =
        error_functional(m, hbar, kernel, potential, config.current, config.alpha);
    const double sup = er.max();
    io.out << "sup_er = " << format_double(sup) << "\nmean_er = " << format_double(mean(er))
           << "\nhbar = " << format_double(hbar) << (stored ? " (summary)" : " (estimated)")
           << "\ntol = " << format_double(threshold) << '\n';
    return static_cast<int>(sup <= threshold ? kSuccess : kSolverFailure);
  });
}

std::optional<ProblemConfig> reproduce_fixture(const std::string& tag) {
  ProblemConfig config;
  config.alpha = 1.5;
  config.current = std::sqrt(2.0);
  config.potential = FunctionSpec::expression("2*sin(2*pi*(x + 1/4))");
  if (tag == "g1") {
    config.kernel = FunctionSpec::trig(TrigPoly({1, 4, 1}, {-5, -2}));
  } else if (tag == "g2") {
    config.kernel = FunctionSpec::trig(TrigPoly({1, 4, 1, 5, 7}, {0, 0, 0, 0}));
  } else if (tag == "g3") {
    config.kernel =
        FunctionSpec::expression("(2 - cos(2*pi*x) + sin(2*pi*x))/(5 - 4*cos(2*pi*x))");
    // All cosine coefficients of this kernel are positive, so its partial
    // sums are admissible and converge geometrically.
    config.schedule.method = KernelApproximation::Truncated;
  } else {
    return std::nullopt;
  }
  return config;
}

int cmd_reproduce(const std::string& tag, const std::string& out_dir, const Overrides& overrides,
                  bool plot_script, Streams io) {
  return guarded(io, [&] {
    std::optional<ProblemConfig> config = reproduce_fixture(tag);
    if (!config) throw ConfigError("tag", "unknown fixture '" + tag + "', expected g1, g2 or g3");
    apply_overrides(*config, overrides);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_json(dir / "config.json", config->to_json());

    const RunOutput run = run_problem(*config, io);
    write_outputs(dir, run);
    if (run.table) {
      const PeriodicGrid grid = run.table->m.grid();
      const SampledFunction g = SampledFunction::sample(grid, config->kernel.function());
      const SampledFunction v = SampledFunction::sample(grid, config->potential.function());
      write_csv(dir / "kernel_potential.csv", "x,G,V", grid, {&g, &v});
      write_csv(dir / "solution.csv", "x,m,u", grid, {&run.table->m, &run.table->u});
      write_csv(dir / "error.csv", "x,er", grid, {&run.table->er});
      if (plot_script) write_plot_script(dir, tag);
    }
    report(run, io);
    return run.code;
  });
}

}  // namespace mfg1d::cli
