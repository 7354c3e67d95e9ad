#include "mfg1d/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mfg1d/errors.hpp"

namespace mfg1d {

namespace {

constexpr double kClampTolerance = 1e-12;

double sup_diff(const SampledFunction& a, const SampledFunction& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

}  // namespace

const char* to_string(KernelApproximation method) {
  return method == KernelApproximation::Fejer ? "fejer" : "truncated";
}

std::optional<KernelApproximation> parse_kernel_approximation(const std::string& name) {
  if (name == "fejer") return KernelApproximation::Fejer;
  if (name == "truncated") return KernelApproximation::Truncated;
  return std::nullopt;
}

void ApproxSchedule::validate() const {
  if (orders.empty()) throw std::invalid_argument("schedule needs at least one order");
  for (std::size_t i = 1; i < orders.size(); ++i) {
    if (orders[i] <= orders[i - 1]) {
      throw std::invalid_argument("schedule orders must be strictly increasing");
    }
  }
  if (!(stop_tol > 0.0)) throw std::invalid_argument("schedule stop tolerance must be positive");
}

TrigPoly approximate_kernel(const GeneralKernel& g, std::size_t order,
                            KernelApproximation method, std::size_t grid_size) {
  const SampledFunction samples = SampledFunction::sample(PeriodicGrid(grid_size), g.sampler);
  const TrigPoly series = analyze(samples, order);

  std::vector<KernelViolation> violations;
  if (!(series.p(0) > 0.0)) violations.push_back({0, series.p(0)});
  std::vector<double> cos_coeffs(series.cos_coeffs().begin(), series.cos_coeffs().end());
  for (std::size_t k = 1; k <= order; ++k) {
    if (cos_coeffs[k] < -kClampTolerance) {
      violations.push_back({k, cos_coeffs[k]});
    } else if (cos_coeffs[k] < 0.0) {
      cos_coeffs[k] = 0.0;
    }
  }
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "kernel violates the admissibility assumptions at order " << order << ":";
    for (const auto& v : violations) msg << " p_" << v.index << " = " << v.value;
    throw InadmissibleKernel(msg.str(), std::move(violations));
  }

  const TrigPoly clamped(std::move(cos_coeffs),
                         std::vector<double>(series.sin_coeffs().begin(), series.sin_coeffs().end()));
  return method == KernelApproximation::Fejer ? fejer_mean(clamped, order) : clamped;
}

GeneralSolveResult solve_general(const CongestionParams& params, const RealFunction& potential,
                                 const GeneralKernel& g, const ApproxSchedule& schedule,
                                 const SolverConfig& config, const PipelineOptions& options) {
  schedule.validate();
  const PeriodicGrid grid(options.grid_size);
  const SampledFunction potential_samples = SampledFunction::sample(grid, potential);

  std::optional<GeneralSolveResult> result;
  std::optional<CoeffPoint> previous;
  for (std::size_t stage = 0; stage < schedule.orders.size(); ++stage) {
    const std::size_t order = schedule.orders[stage];
    auto fail = [&](const std::string& why) -> StageError {
      std::ostringstream msg;
      msg << "stage " << stage << " (order " << order << "): " << why;
      return StageError(msg.str(), stage, order);
    };

    TrigPoly approx;
    std::optional<KernelCoeffs> kernel;
    try {
      approx = approximate_kernel(g, order, schedule.method, options.grid_size);
      kernel.emplace(approx);
    } catch (const Error& e) {
      throw fail(e.what());
    }

    const PotentialContext ctx(params, potential, order, options.grid_size);
    std::optional<CoeffPoint> start;
    if (options.warm_start && previous) start = previous->with_order(order);
    TrigSolveResult solved;
    try {
      solved = solve_trig(ctx, *kernel, config, start);
    } catch (const Error& e) {
      throw fail(e.what());
    }
    if (solved.report.termination != Termination::Converged) {
      throw fail("solver terminated with " + to_string(solved.report.termination) +
                 ", residual " + std::to_string(solved.report.residual));
    }

    Solution sol = make_solution(ctx, solved.point, *kernel);
    StageRecord record;
    record.order = order;
    record.iterations = solved.report.iterations + solved.report.polish_iterations;
    record.residual = solved.report.residual;
    record.sup_error = error_functional(sol.m, sol.hbar, g.sampler, potential_samples,
                                        params.current_j, params.alpha)
                           .max();
    if (result) {
      record.m_diff = sup_diff(sol.m, result->solution.m);
      record.hbar_diff = std::abs(sol.hbar - result->solution.hbar);
    } else {
      record.m_diff = std::numeric_limits<double>::quiet_NaN();
      record.hbar_diff = std::numeric_limits<double>::quiet_NaN();
    }

    std::vector<StageRecord> trace = result ? std::move(result->trace) : std::vector<StageRecord>{};
    trace.push_back(record);
    previous = solved.point;
    result.emplace(GeneralSolveResult{std::move(sol), approx, std::move(solved.report),
                                      std::move(trace), false});
    if (stage > 0 && record.m_diff <= schedule.stop_tol) {
      result->stopped_early = stage + 1 < schedule.orders.size();
      break;
    }
  }
  return std::move(*result);
}

}  // namespace mfg1d
