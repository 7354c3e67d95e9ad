#pragma once

// From solved coefficients to the triple (m, u, H) and the residual of the
// current formulation
//   j^2 / (2 m^alpha) + V - G * m = H,   int m = 1.

#include "mfg1d/fourier.hpp"
#include "mfg1d/potential.hpp"
#include "mfg1d/solver.hpp"

namespace mfg1d {

struct Solution {
  CoeffPoint coeffs;
  double hbar = 0.0;
  SampledFunction m;
  SampledFunction u;
  double c = 0.0;
  double j = 0.0;
  double alpha = 1.0;
};

struct DensityResult {
  SampledFunction m;
  double hbar = 0.0;
};

/// m = c_j / w^(1/alpha) on the context grid and H = a_0 - p_0.
/// Throws InfeasiblePoint if w is not positive on the grid.
DensityResult density_from_coeffs(const PotentialContext& ctx, const CoeffPoint& pt,
                                  const KernelCoeffs& kernel);

/// c = j int m^(1 - alpha).
double drift_constant(const SampledFunction& m, double j, double alpha);

/// u(x) = int_0^x (j m^(1-alpha) - c) ds with u(0) = 0. The integrand is
/// replaced by its trigonometric interpolant on the grid, whose mean is
/// zero by the choice of c, so u is periodic and u' reproduces the integrand
/// at the nodes.
SampledFunction value_from_density(const SampledFunction& m, double j, double alpha);

/// Er(x) = |j^2/(2 m^alpha) + V - G * m - H| + |int m - 1|, with G * m by
/// the periodic rectangle rule on the grid of m. V must share that grid.
SampledFunction error_functional(const SampledFunction& m, double hbar, const RealFunction& kernel,
                                 const SampledFunction& potential, double j, double alpha);

/// Density, value function and drift constant of a solved point.
Solution make_solution(const PotentialContext& ctx, const CoeffPoint& pt,
                       const KernelCoeffs& kernel);

}  // namespace mfg1d
