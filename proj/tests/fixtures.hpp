#pragma once

// Problem data shared by the test suites.

#include <cmath>

#include "mfg1d/fourier.hpp"
#include "mfg1d/potential.hpp"
#include "oracles.hpp"

namespace fixtures {

using mfg1d::CoeffPoint;
using mfg1d::TrigPoly;

inline double potential(double x) { return 2.0 * std::sin(mfg1d::kTwoPi * (x + 0.25)); }

inline TrigPoly g1() { return TrigPoly({1, 4, 1}, {-5, -2}); }
inline TrigPoly g2() { return TrigPoly({1, 4, 1, 5, 7}, {0, 0, 0, 0}); }
inline double g3(double x) {
  const double c = std::cos(mfg1d::kTwoPi * x);
  const double s = std::sin(mfg1d::kTwoPi * x);
  return (2.0 - c + s) / (5.0 - 4.0 * c);
}

inline mfg1d::CongestionParams paper_params() {
  return mfg1d::CongestionParams::make(1.5, std::sqrt(2.0));
}

/// Random point with its trigonometric part above V by at least `gap`.
inline CoeffPoint random_feasible(oracle::Rng& rng, std::size_t order, const oracle::Fn& v,
                                  double spread = 1.0, double gap_lo = 0.2, double gap_hi = 2.0) {
  std::vector<double> a(order + 1, 0.0);
  std::vector<double> b(order, 0.0);
  for (std::size_t k = 1; k <= order; ++k) {
    a[k] = rng.uniform(-spread, spread);
    b[k - 1] = rng.uniform(-spread, spread);
  }
  const double low = oracle::dense_min([&](double x) { return oracle::trig(a, b, x) - v(x); }, 4096);
  a[0] = -low + rng.uniform(gap_lo, gap_hi);
  return CoeffPoint(a, b);
}

}  // namespace fixtures
