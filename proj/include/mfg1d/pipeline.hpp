#pragma once

// General periodic kernels: approximate G by trigonometric polynomials of
// increasing order, solve each stage and monitor the successive differences.

#include <cstddef>
#include <optional>
#include <vector>

#include "mfg1d/fourier.hpp"
#include "mfg1d/potential.hpp"
#include "mfg1d/reconstruct.hpp"
#include "mfg1d/solver.hpp"

namespace mfg1d {

/// A C^2 periodic kernel known through point evaluations.
struct GeneralKernel {
  RealFunction sampler;
};

enum class KernelApproximation {
  Fejer,      // Cesaro means of the Fourier series; preserves p_k >= 0 for any kernel
  Truncated,  // plain partial sums; admissible only if every p_k >= 0
};

const char* to_string(KernelApproximation method);
std::optional<KernelApproximation> parse_kernel_approximation(const std::string& name);

struct ApproxSchedule {
  std::vector<std::size_t> orders{4, 8, 16, 32, 64};
  double stop_tol = 1e-8;
  KernelApproximation method = KernelApproximation::Fejer;

  /// Throws std::invalid_argument unless orders is nonempty and strictly
  /// increasing and stop_tol is positive.
  void validate() const;
};

/// Admissible trigonometric polynomial of the given order approximating g,
/// computed from grid_size samples. Negative cosine coefficients in
/// [-1e-12, 0) are rounded to zero.
/// Throws AliasingError if the grid is too coarse and InadmissibleKernel if
/// p_0 <= 0 or some p_k < -1e-12.
TrigPoly approximate_kernel(const GeneralKernel& g, std::size_t order,
                            KernelApproximation method = KernelApproximation::Fejer,
                            std::size_t grid_size = kDefaultGridSize);

struct StageRecord {
  std::size_t order = 0;
  int iterations = 0;
  double residual = 0.0;
  /// sup |m_n - m_prev| and |H_n - H_prev|; NaN at the first stage.
  double m_diff = 0.0;
  double hbar_diff = 0.0;
  /// sup Er against the original kernel g.
  double sup_error = 0.0;
};

struct GeneralSolveResult {
  Solution solution;
  TrigPoly kernel;        // approximation used at the last stage
  SolverReport report;    // last stage
  std::vector<StageRecord> trace;
  bool stopped_early = false;
};

struct PipelineOptions {
  std::size_t grid_size = kDefaultGridSize;
  bool warm_start = true;
};

/// Solves the stages of `schedule` in order, stopping once the successive
/// density difference falls to schedule.stop_tol. Throws StageError when a
/// stage does not converge or its kernel is inadmissible.
GeneralSolveResult solve_general(const CongestionParams& params, const RealFunction& potential,
                                 const GeneralKernel& g, const ApproxSchedule& schedule,
                                 const SolverConfig& config, const PipelineOptions& options = {});

}  // namespace mfg1d
