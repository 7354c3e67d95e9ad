#pragma once

// The concave potential Phi_alpha(a, b) = int_T phi_alpha(w(y)) dy with
//   w(y) = a_0 + sum_k a_k cos(2 pi k y) + b_k sin(2 pi k y) - V(y),
// its derivatives, the feasibility cone {w > 0} and the unit-mass map
// a_0 = omega(a', b).
//
// Coefficient vectors use the layout [a_0, a_1..a_n, b_1..b_n].

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mfg1d/fourier.hpp"

namespace mfg1d {

/// Congestion exponent alpha in (0, 2], nonzero current j and
/// c_j = (j^2 / 2)^(1 / alpha).
struct CongestionParams {
  double alpha = 1.0;
  double current_j = 1.0;
  double c_j = 0.5;

  /// Throws DomainError outside 0 < alpha <= 2 or for j == 0.
  static CongestionParams make(double alpha, double current_j);
};

/// Antiderivative of x -> c_j x^(-1/alpha): c_j alpha/(alpha-1) x^((alpha-1)/alpha),
/// or c_j ln x at alpha == 1. Throws DomainError for x <= 0.
double phi_scalar(const CongestionParams& params, double x);

/// Candidate coefficients (a_0..a_n, b_1..b_n).
class CoeffPoint {
 public:
  CoeffPoint() : a_(1, 0.0) {}
  explicit CoeffPoint(std::size_t order, double a0 = 0.0);
  CoeffPoint(std::vector<double> a, std::vector<double> b);

  static CoeffPoint from_vector(const Eigen::VectorXd& v, std::size_t order);

  std::size_t order() const { return b_.size(); }
  std::size_t dimension() const { return 2 * b_.size() + 1; }

  double a(std::size_t k) const { return a_[k]; }
  /// k in 1..order.
  double b(std::size_t k) const { return b_[k - 1]; }
  void set_a(std::size_t k, double v) { a_[k] = v; }
  void set_b(std::size_t k, double v) { b_[k - 1] = v; }

  const std::vector<double>& a_coeffs() const { return a_; }
  const std::vector<double>& b_coeffs() const { return b_; }

  Eigen::VectorXd to_vector() const;
  TrigPoly as_trig() const;
  CoeffPoint with_order(std::size_t order) const;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

/// Immutable per-problem data: exponent and current, the potential V on the
/// working grid and the cos/sin basis tables up to mode 2n (the Hessian needs
/// products of two order-n modes).
class PotentialContext {
 public:
  PotentialContext(CongestionParams params, RealFunction potential, std::size_t order,
                   std::size_t grid_size = kDefaultGridSize);

  const CongestionParams& params() const { return params_; }
  const PeriodicGrid& grid() const { return grid_; }
  std::size_t order() const { return order_; }
  std::size_t dimension() const { return 2 * order_ + 1; }
  const RealFunction& potential() const { return potential_; }
  const SampledFunction& potential_samples() const { return potential_samples_; }

  /// cos(2 pi k x_i) and sin(2 pi k x_i), k <= 2 * order.
  double cos_basis(std::size_t k, std::size_t i) const { return cos_[k * grid_.size() + i]; }
  double sin_basis(std::size_t k, std::size_t i) const { return sin_[k * grid_.size() + i]; }

 private:
  CongestionParams params_;
  RealFunction potential_;
  std::size_t order_;
  PeriodicGrid grid_;
  SampledFunction potential_samples_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Default cone margin 1e-10 (1 + |a_0|).
double cone_margin(const CoeffPoint& pt);

/// Samples of w on the working grid. pt.order() may not exceed ctx.order().
SampledFunction eval_w(const PotentialContext& ctx, const CoeffPoint& pt);

bool in_cone(const PotentialContext& ctx, const CoeffPoint& pt, double margin);
bool in_cone(const PotentialContext& ctx, const CoeffPoint& pt);

/// Value, gradient and (optionally) Hessian from a single pass over w.
/// When min w on the working grid drops below 1e3 times the cone margin the
/// integrals are taken on a grid four times finer.
struct PhiEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;  // empty unless requested
  double min_w = 0.0;
  bool refined = false;
};

enum class PhiParts { Gradient, GradientAndHessian };

/// Throws InfeasiblePoint when pt is not in the cone.
PhiEvaluation evaluate_phi(const PotentialContext& ctx, const CoeffPoint& pt,
                           PhiParts parts = PhiParts::Gradient);

double phi_value(const PotentialContext& ctx, const CoeffPoint& pt);
Eigen::VectorXd phi_grad(const PotentialContext& ctx, const CoeffPoint& pt);
Eigen::MatrixXd phi_hessian(const PotentialContext& ctx, const CoeffPoint& pt);

/// The unique a_0 with dPhi/da_0(a_0, a', b) = 1 for the tail (a', b) of
/// `tail` (its a_0 is ignored). The map a_0 -> dPhi/da_0 is strictly
/// decreasing on (l, inf), l = -min(tail - V); it is bracketed, bisected to
/// width 1e-3 and finished with safeguarded Newton.
/// Throws OmegaSolveError on failure.
double omega_solve(const PotentialContext& ctx, const CoeffPoint& tail, double tol = 1e-12,
                   int max_iters = 200);

}  // namespace mfg1d
