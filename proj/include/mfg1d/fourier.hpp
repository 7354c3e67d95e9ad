#pragma once

// Trigonometric polynomials on the unit torus T = [0,1), periodic quadrature
// and Fourier analysis of sampled functions.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mfg1d {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr std::size_t kDefaultGridSize = 1024;

using RealFunction = std::function<double(double)>;

/// Real trigonometric polynomial
///   p_0 + sum_{k=1..n} p_k cos(2 pi k x) + q_k sin(2 pi k x).
///
/// Coefficients past the stored order read as zero, so polynomials of
/// different orders combine as if the shorter one were zero-padded.
class TrigPoly {
 public:
  /// The zero polynomial of order 0.
  TrigPoly() : cos_(1, 0.0) {}

  /// Zero polynomial of the given order.
  explicit TrigPoly(std::size_t order) : cos_(order + 1, 0.0), sin_(order, 0.0) {}

  /// Requires cos_coeffs.size() == sin_coeffs.size() + 1.
  TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static TrigPoly constant(double value) { return TrigPoly({value}, {}); }

  std::size_t order() const { return sin_.size(); }

  double p(std::size_t k) const { return k < cos_.size() ? cos_[k] : 0.0; }
  double q(std::size_t k) const {
    return (k >= 1 && k <= sin_.size()) ? sin_[k - 1] : 0.0;
  }

  std::span<const double> cos_coeffs() const { return cos_; }
  /// q_1..q_n; element i holds q_{i+1}.
  std::span<const double> sin_coeffs() const { return sin_; }

  /// Copy zero-padded or truncated to `order`.
  TrigPoly with_order(std::size_t order) const;

  bool is_symmetric() const;

  double operator()(double x) const;

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Uniform sampling x_i = i/N of the torus, no duplicated endpoint.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t size);

  std::size_t size() const { return size_; }
  double spacing() const { return 1.0 / static_cast<double>(size_); }
  double node(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(size_);
  }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t size_;
};

/// Values of a function at the nodes of a periodic grid.
class SampledFunction {
 public:
  SampledFunction(PeriodicGrid grid, std::vector<double> values);

  static SampledFunction sample(PeriodicGrid grid, const RealFunction& f);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double min() const;
  double max() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

double eval_trig(const TrigPoly& p, double x);

/// Periodic rectangle rule (1/N) sum_i f(x_i). Requires N >= 2.
double quad_periodic(const SampledFunction& f);

/// Order-n truncated Fourier series of f, each coefficient by quad_periodic.
/// Throws AliasingError unless N >= 4n + 4.
TrigPoly analyze(const SampledFunction& f, std::size_t n);

/// Trigonometric interpolant of order floor((N-1)/2) (discrete Fourier
/// transform of all resolvable modes). Reproduces the samples exactly when N
/// is odd; for even N the Nyquist mode is dropped.
TrigPoly interpolate(const SampledFunction& f);

/// Cesaro mean of order m: p_k -> (m+1-k)/(m+1) p_k, q_k likewise, for
/// k <= min(m, order). p_0 is unchanged.
TrigPoly fejer_mean(const TrigPoly& g, std::size_t m);

/// Coefficients of x -> int_T g(x-y) m(y) dy for trigonometric polynomials.
TrigPoly convolve_coeffs(const TrigPoly& g, const TrigPoly& m);

/// Grid version of the convolution: (1/N) sum_l g(x_i - x_l) m(x_l).
SampledFunction convolve_sampled(const RealFunction& g, const SampledFunction& m);

TrigPoly derivative(const TrigPoly& p);

/// Mean-free antiderivative plus the constant making it vanish at x = 0.
/// The mean p_0 of the input is ignored.
TrigPoly antiderivative_vanishing_at_zero(const TrigPoly& p);

/// Global minimum over T: dense sampling, then golden-section refinement of
/// every sampled local minimum.
double min_value(const TrigPoly& p);

struct Admissibility {
  std::vector<std::size_t> violating_indices;
  bool admissible() const { return violating_indices.empty(); }
  explicit operator bool() const { return admissible(); }
};

/// Monotone coupling and positive weight: p_0 > 0 and p_k >= 0 for all k.
/// Sine coefficients are unconstrained.
Admissibility check_kernel_admissible(const TrigPoly& g);

}  // namespace mfg1d
