#include "mfg1d/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mfg1d/errors.hpp"

namespace mfg1d {

namespace {

// cos/sin(2 pi t / N) for t = 0..N-1; mode k at node i uses index (k*i) mod N.
struct RootsOfUnity {
  explicit RootsOfUnity(std::size_t n) : cos(n), sin(n) {
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = kTwoPi * static_cast<double>(t) / static_cast<double>(n);
      cos[t] = std::cos(angle);
      sin[t] = std::sin(angle);
    }
  }
  std::vector<double> cos;
  std::vector<double> sin;
};

TrigPoly discrete_fourier(const SampledFunction& f, std::size_t n) {
  const std::size_t size = f.size();
  const RootsOfUnity roots(size);
  const auto values = f.values();
  const double inv = 1.0 / static_cast<double>(size);

  std::vector<double> cos_coeffs(n + 1, 0.0);
  std::vector<double> sin_coeffs(n, 0.0);
  cos_coeffs[0] = quad_periodic(f);
  for (std::size_t k = 1; k <= n; ++k) {
    double c = 0.0;
    double s = 0.0;
    std::size_t t = 0;
    for (std::size_t i = 0; i < size; ++i) {
      c += values[i] * roots.cos[t];
      s += values[i] * roots.sin[t];
      t += k;
      if (t >= size) t %= size;
    }
    cos_coeffs[k] = 2.0 * c * inv;
    sin_coeffs[k - 1] = 2.0 * s * inv;
  }
  return TrigPoly(std::move(cos_coeffs), std::move(sin_coeffs));
}

}  // namespace

TrigPoly::TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  if (cos_.size() != sin_.size() + 1) {
    throw std::invalid_argument("TrigPoly: expected " +
                                std::to_string(sin_.size() + 1) +
                                " cosine coefficients, got " +
                                std::to_string(cos_.size()));
  }
}

TrigPoly TrigPoly::with_order(std::size_t order) const {
  std::vector<double> c(order + 1, 0.0);
  std::vector<double> s(order, 0.0);
  for (std::size_t k = 0; k <= order; ++k) c[k] = p(k);
  for (std::size_t k = 1; k <= order; ++k) s[k - 1] = q(k);
  return TrigPoly(std::move(c), std::move(s));
}

bool TrigPoly::is_symmetric() const {
  return std::all_of(sin_.begin(), sin_.end(), [](double v) { return v == 0.0; });
}

double TrigPoly::operator()(double x) const { return eval_trig(*this, x); }

PeriodicGrid::PeriodicGrid(std::size_t size) : size_(size) {
  if (size == 0) throw std::invalid_argument("PeriodicGrid: size must be positive");
}

SampledFunction::SampledFunction(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("SampledFunction: " + std::to_string(values_.size()) +
                                " values for a grid of size " +
                                std::to_string(grid_.size()));
  }
}

SampledFunction SampledFunction::sample(PeriodicGrid grid, const RealFunction& f) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid.node(i));
  return SampledFunction(grid, std::move(values));
}

double SampledFunction::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double SampledFunction::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double eval_trig(const TrigPoly& p, double x) {
  double sum = p.p(0);
  for (std::size_t k = 1; k <= p.order(); ++k) {
    const double angle = kTwoPi * static_cast<double>(k) * x;
    sum += p.p(k) * std::cos(angle) + p.q(k) * std::sin(angle);
  }
  return sum;
}

double quad_periodic(const SampledFunction& f) {
  if (f.size() < 2) throw std::invalid_argument("quad_periodic: grid size must be >= 2");
  // Neumaier summation keeps the rule exact for constants up to rounding of the mean.
  double sum = 0.0;
  double carry = 0.0;
  for (double v : f.values()) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + carry) / static_cast<double>(f.size());
}

TrigPoly analyze(const SampledFunction& f, std::size_t n) {
  if (f.size() < 4 * n + 4) {
    throw AliasingError("analyze: order " + std::to_string(n) + " needs at least " +
                        std::to_string(4 * n + 4) + " grid points, got " +
                        std::to_string(f.size()));
  }
  return discrete_fourier(f, n);
}

TrigPoly interpolate(const SampledFunction& f) {
  return discrete_fourier(f, (f.size() - 1) / 2);
}

TrigPoly fejer_mean(const TrigPoly& g, std::size_t m) {
  const std::size_t order = std::min(m, g.order());
  const double denom = static_cast<double>(m + 1);
  std::vector<double> c(order + 1);
  std::vector<double> s(order);
  c[0] = g.p(0);
  for (std::size_t k = 1; k <= order; ++k) {
    const double weight = static_cast<double>(m + 1 - k) / denom;
    c[k] = weight * g.p(k);
    s[k - 1] = weight * g.q(k);
  }
  return TrigPoly(std::move(c), std::move(s));
}

TrigPoly convolve_coeffs(const TrigPoly& g, const TrigPoly& m) {
  const std::size_t order = std::max(g.order(), m.order());
  std::vector<double> c(order + 1);
  std::vector<double> s(order);
  c[0] = g.p(0) * m.p(0);
  for (std::size_t k = 1; k <= order; ++k) {
    c[k] = 0.5 * (g.p(k) * m.p(k) - g.q(k) * m.q(k));
    s[k - 1] = 0.5 * (g.p(k) * m.q(k) + g.q(k) * m.p(k));
  }
  return TrigPoly(std::move(c), std::move(s));
}

SampledFunction convolve_sampled(const RealFunction& g, const SampledFunction& m) {
  const PeriodicGrid grid = m.grid();
  const std::size_t n = grid.size();
  // g(x_i - x_l) only depends on (i - l) mod N.
  const SampledFunction kernel = SampledFunction::sample(grid, g);
  const auto kv = kernel.values();
  const auto mv = m.values();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t l = 0; l <= i; ++l) sum += kv[i - l] * mv[l];
    for (std::size_t l = i + 1; l < n; ++l) sum += kv[n + i - l] * mv[l];
    out[i] = sum / static_cast<double>(n);
  }
  return SampledFunction(grid, std::move(out));
}

TrigPoly derivative(const TrigPoly& p) {
  const std::size_t n = p.order();
  std::vector<double> c(n + 1, 0.0);
  std::vector<double> s(n, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double w = kTwoPi * static_cast<double>(k);
    c[k] = w * p.q(k);
    s[k - 1] = -w * p.p(k);
  }
  return TrigPoly(std::move(c), std::move(s));
}

TrigPoly antiderivative_vanishing_at_zero(const TrigPoly& p) {
  const std::size_t n = p.order();
  std::vector<double> c(n + 1, 0.0);
  std::vector<double> s(n, 0.0);
  double at_zero = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double w = kTwoPi * static_cast<double>(k);
    c[k] = -p.q(k) / w;
    s[k - 1] = p.p(k) / w;
    at_zero += c[k];
  }
  c[0] = -at_zero;
  return TrigPoly(std::move(c), std::move(s));
}

double min_value(const TrigPoly& p) {
  const std::size_t samples = std::max<std::size_t>(1024, 32 * (p.order() + 1));
  const PeriodicGrid grid(samples);
  const SampledFunction values = SampledFunction::sample(grid, p);
  const double h = grid.spacing();
  double best = values.min();
  constexpr double kGolden = 0.6180339887498949;
  for (std::size_t i = 0; i < samples; ++i) {
    const double left = values[(i + samples - 1) % samples];
    const double right = values[(i + 1) % samples];
    if (values[i] > left || values[i] > right) continue;
    double a = grid.node(i) - h;
    double b = grid.node(i) + h;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = p(x1);
    double f2 = p(x2);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = p(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = p(x2);
      }
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

Admissibility check_kernel_admissible(const TrigPoly& g) {
  Admissibility result;
  if (!(g.p(0) > 0.0)) result.violating_indices.push_back(0);
  for (std::size_t k = 1; k <= g.order(); ++k) {
    if (!(g.p(k) >= 0.0)) result.violating_indices.push_back(k);
  }
  return result;
}

}  // namespace mfg1d
