#include "mfg1d/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfg1d/errors.hpp"

namespace mfg1d {

CauchyIntegrals cauchy_integrals(double a0, double a1, double b1) {
  const double disc = a0 * a0 - a1 * a1 - b1 * b1;
  if (!(a0 > 0.0) || !(disc > 0.0)) {
    std::ostringstream msg;
    msg << "cauchy_integrals: need a_0 > sqrt(a_1^2 + b_1^2), got (" << a0 << ", " << a1
        << ", " << b1 << ")";
    throw DomainError(msg.str());
  }
  const double root = std::sqrt(disc);
  // a_1 (root - a_0) / ((a_1^2 + b_1^2) root) with the cancellation removed;
  // this form also covers a_1 = b_1 = 0.
  const double scale = -1.0 / ((root + a0) * root);
  return {1.0 / root, a1 * scale, b1 * scale};
}

void FirstHarmonicProblem::validate() const {
  if (!(p0 > 0.0)) throw DomainError("first-harmonic problem needs p_0 > 0");
  if (!(p1 >= 0.0)) throw DomainError("first-harmonic problem needs p_1 >= 0");
  if (j == 0.0) throw DomainError("first-harmonic problem needs j != 0");
}

double solve_r_cubic(const FirstHarmonicProblem& prob) {
  prob.validate();
  const double j2 = prob.j * prob.j;
  const double rhs = prob.v1 * prob.v1 + prob.w1 * prob.w1;
  if (rhs == 0.0) return 1.0;

  auto f = [&](double r) {
    const double shifted = prob.p1 + j2 * r;
    return (1.0 - 1.0 / r) * (shifted * shifted + prob.q1 * prob.q1) - rhs;
  };
  auto df = [&](double r) {
    const double shifted = prob.p1 + j2 * r;
    const double quad = shifted * shifted + prob.q1 * prob.q1;
    return quad / (r * r) + (1.0 - 1.0 / r) * 2.0 * j2 * shifted;
  };

  double lo = 1.0;
  double hi = 2.0;
  while (f(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  const double tol = 1e-12 * std::max(1.0, rhs);
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double value = f(r);
    if (std::abs(value) <= tol) break;
    if (value < 0.0) {
      lo = r;
    } else {
      hi = r;
    }
    const double slope = df(r);
    double next = slope > 0.0 ? r - value / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == r) break;
    r = next;
  }
  return r;
}

FirstHarmonicSolution closed_form_alpha1(const FirstHarmonicProblem& prob) {
  FirstHarmonicSolution sol;
  sol.r = solve_r_cubic(prob);
  const double r = sol.r;
  const double j2 = prob.j * prob.j;
  const double shifted = prob.p1 + j2 * r;
  const double denom = shifted * shifted + prob.q1 * prob.q1;
  const double a0 = 2.0 * r - 1.0;
  const double a1 = -2.0 * r * (prob.v1 * shifted + prob.w1 * prob.q1) / denom;
  const double b1 = -2.0 * r * (prob.w1 * shifted - prob.v1 * prob.q1) / denom;
  sol.density = TrigPoly({a0, a1}, {b1});

  const double cj = 0.5 * j2;
  sol.point = CoeffPoint({cj * a0 + prob.v0, cj * a1 + prob.v1}, {cj * b1 + prob.w1});
  sol.hbar = cj * a0 + prob.v0 - prob.p0;
  return sol;
}

const char* to_string(ZeroCurrentOutcome outcome) {
  switch (outcome) {
    case ZeroCurrentOutcome::Solution: return "Solution";
    case ZeroCurrentOutcome::NoSolution: return "NoSolution";
    case ZeroCurrentOutcome::NonUnique: return "NonUnique";
    case ZeroCurrentOutcome::NotPositive: return "NotPositive";
  }
  return "Unknown";
}

ZeroCurrentResult zero_current_solve(const ZeroCurrentProblem& prob) {
  const TrigPoly& g = prob.kernel;
  const TrigPoly& v = prob.potential;
  const double tol = prob.zero_tol;
  const std::size_t order = std::max(g.order(), v.order());

  ZeroCurrentResult result;
  std::size_t non_unique = 0;
  std::vector<double> cos_coeffs(order + 1, 0.0);
  std::vector<double> sin_coeffs(order, 0.0);
  cos_coeffs[0] = 1.0;
  for (std::size_t k = 1; k <= order; ++k) {
    const double p = std::abs(g.p(k)) > tol ? g.p(k) : 0.0;
    const double q = std::abs(g.q(k)) > tol ? g.q(k) : 0.0;
    const double vk = std::abs(v.p(k)) > tol ? v.p(k) : 0.0;
    const double wk = std::abs(v.q(k)) > tol ? v.q(k) : 0.0;
    const double s = p * p + q * q;
    const bool forced = vk != 0.0 || wk != 0.0;
    if (s == 0.0) {
      if (forced) {
        result.outcome = ZeroCurrentOutcome::NoSolution;
        result.mode = k;
        result.density = TrigPoly();
        result.hbar = v.p(0) - g.p(0);
        return result;
      }
      if (k <= v.order() && non_unique == 0) non_unique = k;
      continue;
    }
    cos_coeffs[k] = 2.0 * (p * vk + q * wk) / s;
    sin_coeffs[k - 1] = 2.0 * (p * wk - q * vk) / s;
  }

  result.density = TrigPoly(std::move(cos_coeffs), std::move(sin_coeffs));
  result.hbar = v.p(0) - g.p(0);
  result.min_density = min_value(result.density);
  if (non_unique != 0) {
    result.outcome = ZeroCurrentOutcome::NonUnique;
    result.mode = non_unique;
  } else if (!(result.min_density > 0.0)) {
    result.outcome = ZeroCurrentOutcome::NotPositive;
  }
  return result;
}

}  // namespace mfg1d
