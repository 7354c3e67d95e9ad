#pragma once

// Closed-form branches: integrals of 1/(a_0 + a_1 cos + b_1 sin), the
// first-harmonic solution at alpha = 1 and the zero-current (j = 0) problem.

#include <cstddef>

#include "mfg1d/fourier.hpp"
#include "mfg1d/potential.hpp"

namespace mfg1d {

struct CauchyIntegrals {
  double mass = 0.0;     // int 1/D
  double cos_mom = 0.0;  // int cos(2 pi x)/D
  double sin_mom = 0.0;  // int sin(2 pi x)/D
};

/// Integrals over the torus for D(x) = a_0 + a_1 cos(2 pi x) + b_1 sin(2 pi x).
/// Throws DomainError unless a_0 > sqrt(a_1^2 + b_1^2).
CauchyIntegrals cauchy_integrals(double a0, double a1, double b1);

/// Kernel p_0 + p_1 cos + q_1 sin and potential v_0 + v_1 cos + w_1 sin.
struct FirstHarmonicProblem {
  double p0 = 1.0;
  double p1 = 0.0;
  double q1 = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  double w1 = 0.0;
  double j = 1.0;

  /// Throws DomainError unless p0 > 0, p1 >= 0 and j != 0.
  void validate() const;
  TrigPoly kernel() const { return TrigPoly({p0, p1}, {q1}); }
  TrigPoly potential() const { return TrigPoly({v0, v1}, {w1}); }
};

/// Root r >= 1 of (1 - 1/r)((p_1 + j^2 r)^2 + q_1^2) = v_1^2 + w_1^2.
double solve_r_cubic(const FirstHarmonicProblem& prob);

struct FirstHarmonicSolution {
  double r = 1.0;
  /// m(x) = 1 / (density.p(0) + density.p(1) cos + density.q(1) sin).
  TrigPoly density;
  /// The same solution as a point of the potential's cone coordinates,
  /// w = (j^2/2) * density denominator, i.e. point = (j^2/2) density + V.
  CoeffPoint point;
  double hbar = 0.0;
};

/// Exact solution of the alpha = 1 problem with first-harmonic data.
FirstHarmonicSolution closed_form_alpha1(const FirstHarmonicProblem& prob);

/// Data of the zero-current problem G * m + H = V, int m = 1.
struct ZeroCurrentProblem {
  TrigPoly kernel;
  TrigPoly potential;
  /// Coefficients with magnitude at or below this are treated as zero.
  double zero_tol = 1e-12;
};

enum class ZeroCurrentOutcome { Solution, NoSolution, NonUnique, NotPositive };

const char* to_string(ZeroCurrentOutcome outcome);

struct ZeroCurrentResult {
  ZeroCurrentOutcome outcome = ZeroCurrentOutcome::Solution;
  /// Offending mode for NoSolution and NonUnique, 0 otherwise.
  std::size_t mode = 0;
  /// Density coefficients with m_0 = 1. Unconstrained modes of a NonUnique
  /// problem are set to zero. Empty order for NoSolution.
  TrigPoly density;
  double hbar = 0.0;
  /// Minimum of the density over the torus (not meaningful for NoSolution).
  double min_density = 0.0;
};

/// Mode-by-mode division of the potential by the kernel. NoSolution takes
/// precedence over NonUnique, which takes precedence over NotPositive.
ZeroCurrentResult zero_current_solve(const ZeroCurrentProblem& prob);

}  // namespace mfg1d
