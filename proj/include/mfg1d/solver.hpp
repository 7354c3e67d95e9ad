#pragma once

// Finite-dimensional system for trigonometric-polynomial kernels
//   dPhi/da_0 = 1,
//   dPhi/da_k = (p_k a_k + q_k b_k) / (p_k^2 + q_k^2),
//   dPhi/db_k = (p_k b_k - q_k a_k) / (p_k^2 + q_k^2),
// over the active modes of the kernel, and the solvers for it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfg1d/fourier.hpp"
#include "mfg1d/potential.hpp"

namespace mfg1d {

/// Admissible kernel G = p_0 + sum p_k cos + q_k sin. Modes with
/// p_k = q_k = 0 are inactive and dropped from the unknowns.
class KernelCoeffs {
 public:
  /// Throws InadmissibleKernel unless p_0 > 0 and p_k >= 0.
  explicit KernelCoeffs(TrigPoly g);

  const TrigPoly& trig() const { return trig_; }
  const std::vector<std::size_t>& active_modes() const { return active_; }
  std::size_t highest_active_mode() const { return active_.empty() ? 0 : active_.back(); }
  bool symmetric() const { return trig_.is_symmetric(); }

  double p(std::size_t k) const { return trig_.p(k); }
  double q(std::size_t k) const { return trig_.q(k); }
  double norm2(std::size_t k) const { return p(k) * p(k) + q(k) * q(k); }

 private:
  TrigPoly trig_;
  std::vector<std::size_t> active_;
};

enum class SolverPath {
  Auto,       // Symmetric for symmetric kernels, General otherwise
  General,    // Gauss-Newton on F(a', b) with a_0 = omega(a', b)
  Symmetric,  // damped Newton maximization of the concave objective
  MFallback,  // damped Newton on the full residual with merit M
};

enum class Termination { Converged, MaxIters, InfeasibleLineSearch };

std::string to_string(SolverPath path);
std::string to_string(Termination termination);
/// Accepts "auto", "general", "symmetric", "m-fallback".
std::optional<SolverPath> parse_solver_path(const std::string& name);

struct SolverConfig {
  double tol_residual = 1e-10;
  int max_iters = 200;
  double tol_omega = 1e-12;
  double backtrack = 0.5;
  double armijo = 1e-4;
  SolverPath path = SolverPath::Auto;

  /// Throws std::invalid_argument for nonpositive tolerances or max_iters < 1.
  void validate() const;
};

struct SolverReport {
  int iterations = 0;           // main phase
  int polish_iterations = 0;    // Newton polish on the full residual
  double residual = 0.0;        // sup norm of system_residual at the returned point
  std::vector<double> objective_trace;  // main-phase objective, iterations + 1 entries
  Termination termination = Termination::MaxIters;
  SolverPath path = SolverPath::Auto;  // path that actually ran
};

struct TrigSolveResult {
  CoeffPoint point;
  SolverReport report;
};

/// Residual vector [R_0, R_a(active modes), R_b(active modes)].
/// Throws InfeasiblePoint outside the cone.
Eigen::VectorXd system_residual(const PotentialContext& ctx, const KernelCoeffs& kernel,
                                const CoeffPoint& pt);

/// Half the squared mode residuals at a_0 = omega(a', b). Propagates
/// OmegaSolveError.
double objective_F(const PotentialContext& ctx, const KernelCoeffs& kernel,
                   const CoeffPoint& tail, double tol_omega = 1e-12);

/// (dPhi/da_0 - 1)^2 + 1/2 sum of squared mode residuals.
double objective_M(const PotentialContext& ctx, const KernelCoeffs& kernel,
                   const CoeffPoint& pt);

/// Phi(a, b) - a_0 - sum (a_k^2 + b_k^2) / (2 p_k). Throws NonSymmetricKernel
/// if any q_k != 0.
double objective_symmetric(const PotentialContext& ctx, const KernelCoeffs& kernel,
                           const CoeffPoint& pt);

/// Solves the system to sup-norm residual tol_residual. Starts from
/// `start` when given, otherwise from the flat tail; a_0 is always reset to
/// omega(tail) so the start is feasible. Non-convergence is reported through
/// report.termination together with the best point reached.
/// Throws NonSymmetricKernel when the symmetric path is forced on a
/// nonsymmetric kernel.
TrigSolveResult solve_trig(const PotentialContext& ctx, const KernelCoeffs& kernel,
                           const SolverConfig& config,
                           const std::optional<CoeffPoint>& start = std::nullopt);

}  // namespace mfg1d
