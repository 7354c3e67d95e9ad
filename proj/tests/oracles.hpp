#pragma once

// Test-side reference computations that do not share code with the library:
// composite Simpson quadrature, finite differences, bisection and
// brute-force convolution.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

using Fn = std::function<double(double)>;

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const Fn& f, double a, double b, std::size_t panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  }
  return sum * h / 3.0;
}

inline double central_diff(const Fn& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Root of a continuous f with a sign change on [lo, hi].
inline double bisect(const Fn& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// int_0^1 g(x - y) m(y) dy by Simpson.
inline double convolution(const Fn& g, const Fn& m, double x, std::size_t panels = 4000) {
  return simpson([&](double y) { return g(x - y) * m(y); }, 0.0, 1.0, panels);
}

/// Trigonometric sum written out independently of the library.
inline double trig(const std::vector<double>& c, const std::vector<double>& s, double x) {
  double v = c.empty() ? 0.0 : c[0];
  for (std::size_t k = 1; k < c.size(); ++k) v += c[k] * std::cos(kTwoPi * k * x);
  for (std::size_t k = 1; k <= s.size(); ++k) v += s[k - 1] * std::sin(kTwoPi * k * x);
  return v;
}

/// Dense-sampling minimum of f on [0, 1).
inline double dense_min(const Fn& f, std::size_t samples = 20000) {
  double best = f(0.0);
  for (std::size_t i = 1; i < samples; ++i) best = std::min(best, f(static_cast<double>(i) / samples));
  return best;
}

struct Rng {
  explicit Rng(unsigned long long seed) : engine(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine); }
  std::mt19937_64 engine;
};

}  // namespace oracle
