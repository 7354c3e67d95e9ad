#include "mfg1d/reconstruct.hpp"

#include <cmath>
#include <stdexcept>

#include "mfg1d/errors.hpp"

namespace mfg1d {

namespace {

std::vector<double> current_integrand(const SampledFunction& m, double j, double alpha) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0.0)) throw DomainError("density must be positive");
    out[i] = alpha == 1.0 ? j : j * std::pow(m[i], 1.0 - alpha);
  }
  return out;
}

}  // namespace

DensityResult density_from_coeffs(const PotentialContext& ctx, const CoeffPoint& pt,
                                  const KernelCoeffs& kernel) {
  const SampledFunction w = eval_w(ctx, pt);
  if (!(w.min() > 0.0)) throw InfeasiblePoint("density_from_coeffs: w is not positive", w.min());
  const CongestionParams& params = ctx.params();
  std::vector<double> m(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    m[i] = params.c_j / std::pow(w[i], 1.0 / params.alpha);
  }
  return {SampledFunction(ctx.grid(), std::move(m)), pt.a(0) - kernel.p(0)};
}

double drift_constant(const SampledFunction& m, double j, double alpha) {
  return quad_periodic(SampledFunction(m.grid(), current_integrand(m, j, alpha)));
}

SampledFunction value_from_density(const SampledFunction& m, double j, double alpha) {
  std::vector<double> f = current_integrand(m, j, alpha);
  const double c = quad_periodic(SampledFunction(m.grid(), f));
  for (double& v : f) v -= c;
  const TrigPoly integrand = interpolate(SampledFunction(m.grid(), std::move(f)));
  const TrigPoly u = antiderivative_vanishing_at_zero(integrand);
  SampledFunction out = SampledFunction::sample(m.grid(), u);
  std::vector<double> values(out.values().begin(), out.values().end());
  values[0] = 0.0;
  return SampledFunction(m.grid(), std::move(values));
}

SampledFunction error_functional(const SampledFunction& m, double hbar, const RealFunction& kernel,
                                 const SampledFunction& potential, double j, double alpha) {
  if (!(m.grid() == potential.grid())) {
    throw std::invalid_argument("error_functional: density and potential grids differ");
  }
  const SampledFunction conv = convolve_sampled(kernel, m);
  const double defect = std::abs(quad_periodic(m) - 1.0);
  const double half_j2 = 0.5 * j * j;
  std::vector<double> er(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0.0)) throw DomainError("error_functional: density must be positive");
    const double congestion = half_j2 / std::pow(m[i], alpha);
    er[i] = std::abs(congestion + potential[i] - conv[i] - hbar) + defect;
  }
  return SampledFunction(m.grid(), std::move(er));
}

Solution make_solution(const PotentialContext& ctx, const CoeffPoint& pt,
                       const KernelCoeffs& kernel) {
  DensityResult density = density_from_coeffs(ctx, pt, kernel);
  const double j = ctx.params().current_j;
  const double alpha = ctx.params().alpha;
  SampledFunction u = value_from_density(density.m, j, alpha);
  const double c = drift_constant(density.m, j, alpha);
  return Solution{pt, density.hbar, std::move(density.m), std::move(u), c, j, alpha};
}

}  // namespace mfg1d
