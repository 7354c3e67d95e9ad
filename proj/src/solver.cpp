#include "mfg1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mfg1d/errors.hpp"

namespace mfg1d {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kMinStep = 1e-16;
// The concave ascent hands over to the residual Newton polish below this
// residual; objective differences near the optimum drown in rounding.
constexpr double kSymmetricHandover = 1e-6;

Index idx(std::size_t i) { return static_cast<Index>(i); }

double sup_norm(const VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Maps between full coefficient points of the context order and the reduced
// unknowns [a_0, a_k (active), b_k (active)].
class ReducedSystem {
 public:
  ReducedSystem(const PotentialContext& ctx, const KernelCoeffs& kernel)
      : ctx_(ctx), kernel_(kernel), modes_(kernel.active_modes()) {
    if (kernel.highest_active_mode() > ctx.order()) {
      throw std::invalid_argument("kernel mode " + std::to_string(kernel.highest_active_mode()) +
                                  " exceeds context order " + std::to_string(ctx.order()));
    }
  }

  std::size_t modes() const { return modes_.size(); }
  Index dim() const { return idx(2 * modes_.size() + 1); }

  VectorXd reduce(const CoeffPoint& pt) const {
    const CoeffPoint full = pt.with_order(ctx_.order());
    VectorXd z(dim());
    z(0) = full.a(0);
    for (std::size_t i = 0; i < modes(); ++i) {
      z(idx(1 + i)) = full.a(modes_[i]);
      z(idx(1 + modes() + i)) = full.b(modes_[i]);
    }
    return z;
  }

  CoeffPoint expand(const VectorXd& z) const {
    CoeffPoint pt(ctx_.order(), z(0));
    for (std::size_t i = 0; i < modes(); ++i) {
      pt.set_a(modes_[i], z(idx(1 + i)));
      pt.set_b(modes_[i], z(idx(1 + modes() + i)));
    }
    return pt;
  }

  VectorXd residual(const VectorXd& z, const VectorXd& grad) const {
    const std::size_t n = ctx_.order();
    VectorXd r(dim());
    r(0) = grad(0) - 1.0;
    for (std::size_t i = 0; i < modes(); ++i) {
      const std::size_t k = modes_[i];
      const double s = kernel_.norm2(k);
      const double p = kernel_.p(k) / s;
      const double q = kernel_.q(k) / s;
      const double a = z(idx(1 + i));
      const double b = z(idx(1 + modes() + i));
      r(idx(1 + i)) = grad(idx(k)) - (p * a + q * b);
      r(idx(1 + modes() + i)) = grad(idx(n + k)) - (p * b - q * a);
    }
    return r;
  }

  // d residual / dz from the full Hessian of Phi.
  MatrixXd jacobian(const MatrixXd& hessian) const {
    const std::size_t n = ctx_.order();
    std::vector<Index> full(idx(2 * modes() + 1));
    full[0] = 0;
    for (std::size_t i = 0; i < modes(); ++i) {
      full[1 + i] = idx(modes_[i]);
      full[1 + modes() + i] = idx(n + modes_[i]);
    }
    MatrixXd jac(dim(), dim());
    for (Index r = 0; r < dim(); ++r) {
      for (Index c = 0; c < dim(); ++c) jac(r, c) = hessian(full[r], full[c]);
    }
    for (std::size_t i = 0; i < modes(); ++i) {
      const std::size_t k = modes_[i];
      const double s = kernel_.norm2(k);
      const double p = kernel_.p(k) / s;
      const double q = kernel_.q(k) / s;
      const Index ia = idx(1 + i);
      const Index ib = idx(1 + modes() + i);
      jac(ia, ia) -= p;
      jac(ia, ib) -= q;
      jac(ib, ib) -= p;
      jac(ib, ia) += q;
    }
    return jac;
  }

  double quadratic_penalty(const VectorXd& z) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < modes(); ++i) {
      const double a = z(idx(1 + i));
      const double b = z(idx(1 + modes() + i));
      sum += (a * a + b * b) / (2.0 * kernel_.p(modes_[i]));
    }
    return sum;
  }

  const PotentialContext& ctx() const { return ctx_; }

 private:
  const PotentialContext& ctx_;
  const KernelCoeffs& kernel_;
  const std::vector<std::size_t>& modes_;
};

double merit_m(const VectorXd& r) {
  return r(0) * r(0) + 0.5 * r.tail(r.size() - 1).squaredNorm();
}

struct Evaluated {
  VectorXd z;
  VectorXd residual;
  PhiEvaluation phi;
};

std::optional<Evaluated> evaluate(const ReducedSystem& sys, const VectorXd& z, PhiParts parts) {
  try {
    Evaluated e;
    e.z = z;
    e.phi = evaluate_phi(sys.ctx(), sys.expand(z), parts);
    e.residual = sys.residual(z, e.phi.gradient);
    return e;
  } catch (const InfeasiblePoint&) {
    return std::nullopt;
  }
}

// Point with a_0 = omega(tail); nullopt if the normalization fails.
std::optional<Evaluated> evaluate_tail(const ReducedSystem& sys, const VectorXd& tail,
                                       double tol_omega, PhiParts parts) {
  VectorXd z(sys.dim());
  z(0) = 0.0;
  z.tail(tail.size()) = tail;
  try {
    z(0) = omega_solve(sys.ctx(), sys.expand(z), tol_omega);
  } catch (const OmegaSolveError&) {
    return std::nullopt;
  }
  return evaluate(sys, z, parts);
}

VectorXd start_point(const ReducedSystem& sys, const std::optional<CoeffPoint>& start,
                     double tol_omega) {
  VectorXd z = start ? sys.reduce(*start) : VectorXd::Zero(sys.dim());
  z(0) = omega_solve(sys.ctx(), sys.expand(z), tol_omega);
  return z;
}

// Damped Newton on the residual system with merit M. feasibility is checked
// before every trial evaluation.
Termination newton_full(const ReducedSystem& sys, const SolverConfig& config, Evaluated& cur,
                        int& iterations, std::vector<double>* trace) {
  if (!cur.phi.hessian.size()) {
    auto e = evaluate(sys, cur.z, PhiParts::GradientAndHessian);
    if (!e) return Termination::InfeasibleLineSearch;
    cur = std::move(*e);
  }
  double merit = merit_m(cur.residual);
  if (trace && trace->empty()) trace->push_back(merit);
  while (sup_norm(cur.residual) > config.tol_residual) {
    if (iterations >= config.max_iters) return Termination::MaxIters;
    const MatrixXd jac = sys.jacobian(cur.phi.hessian);
    const VectorXd dir = -jac.partialPivLu().solve(cur.residual);
    double step = 1.0;
    std::optional<Evaluated> next;
    while (step >= kMinStep) {
      next = evaluate(sys, cur.z + step * dir, PhiParts::GradientAndHessian);
      if (next && merit_m(next->residual) <= (1.0 - 2.0 * config.armijo * step) * merit) break;
      next.reset();
      step *= config.backtrack;
    }
    if (!next) return Termination::InfeasibleLineSearch;
    cur = std::move(*next);
    merit = merit_m(cur.residual);
    ++iterations;
    if (trace) trace->push_back(merit);
  }
  return Termination::Converged;
}

// Concave maximization of Phi - a_0 - sum (a_k^2 + b_k^2)/(2 p_k); its
// gradient is the residual and its Hessian the residual Jacobian.
Termination ascend_symmetric(const ReducedSystem& sys, const SolverConfig& config,
                             Evaluated& cur, int& iterations, std::vector<double>& trace) {
  auto objective = [&](const Evaluated& e) {
    return e.phi.value - e.z(0) - sys.quadratic_penalty(e.z);
  };
  double value = objective(cur);
  trace.push_back(-value);
  const double handover = std::max(config.tol_residual, kSymmetricHandover);
  while (sup_norm(cur.residual) > handover) {
    if (iterations >= config.max_iters) return Termination::MaxIters;
    const MatrixXd neg_hessian = -sys.jacobian(cur.phi.hessian);
    const VectorXd dir = neg_hessian.ldlt().solve(cur.residual);
    const double slope = cur.residual.dot(dir);
    double step = 1.0;
    std::optional<Evaluated> next;
    while (step >= kMinStep) {
      next = evaluate(sys, cur.z + step * dir, PhiParts::GradientAndHessian);
      if (next && objective(*next) >= value + config.armijo * step * slope) break;
      next.reset();
      step *= config.backtrack;
    }
    if (!next) return Termination::InfeasibleLineSearch;
    cur = std::move(*next);
    value = objective(cur);
    ++iterations;
    trace.push_back(-value);
  }
  return Termination::Converged;
}

// Gauss-Newton on F(t) = 1/2 |rho(t)|^2 over the tail t = (a', b), with
// a_0 = omega(t) eliminated. rho' = J_tt - J_t0 J_0t / J_00 is the Schur
// complement of the residual Jacobian; -rho'^{-1} rho is always a descent
// direction because the symmetric part of rho' is negative definite.
Termination descend_tail(const ReducedSystem& sys, const SolverConfig& config, Evaluated& cur,
                         int& iterations, std::vector<double>& trace) {
  const Index m = sys.dim() - 1;
  auto objective = [&](const Evaluated& e) { return 0.5 * e.residual.tail(m).squaredNorm(); };
  double value = objective(cur);
  trace.push_back(value);
  while (sup_norm(cur.residual) > config.tol_residual) {
    if (iterations >= config.max_iters) return Termination::MaxIters;
    const MatrixXd jac = sys.jacobian(cur.phi.hessian);
    const MatrixXd schur = jac.bottomRightCorner(m, m) -
                           jac.col(0).tail(m) * jac.row(0).tail(m) / jac(0, 0);
    const VectorXd dir = -schur.partialPivLu().solve(cur.residual.tail(m));
    const VectorXd tail = cur.z.tail(m);
    double step = 1.0;
    std::optional<Evaluated> next;
    while (step >= kMinStep) {
      next = evaluate_tail(sys, tail + step * dir, config.tol_omega, PhiParts::Gradient);
      if (next && objective(*next) <= (1.0 - 2.0 * config.armijo * step) * value) break;
      next.reset();
      step *= config.backtrack;
    }
    if (!next) return Termination::InfeasibleLineSearch;
    auto full = evaluate(sys, next->z, PhiParts::GradientAndHessian);
    if (!full) return Termination::InfeasibleLineSearch;
    cur = std::move(*full);
    value = objective(cur);
    ++iterations;
    trace.push_back(value);
  }
  return Termination::Converged;
}

}  // namespace

KernelCoeffs::KernelCoeffs(TrigPoly g) : trig_(std::move(g)) {
  const Admissibility check = check_kernel_admissible(trig_);
  if (!check) {
    std::vector<KernelViolation> violations;
    std::ostringstream msg;
    msg << "inadmissible kernel: need p_0 > 0 and p_k >= 0; violated at";
    for (std::size_t k : check.violating_indices) {
      violations.push_back({k, trig_.p(k)});
      msg << " p_" << k << " = " << trig_.p(k);
    }
    throw InadmissibleKernel(msg.str(), std::move(violations));
  }
  for (std::size_t k = 1; k <= trig_.order(); ++k) {
    if (norm2(k) > 0.0) active_.push_back(k);
  }
}

std::string to_string(SolverPath path) {
  switch (path) {
    case SolverPath::Auto: return "auto";
    case SolverPath::General: return "general";
    case SolverPath::Symmetric: return "symmetric";
    case SolverPath::MFallback: return "m-fallback";
  }
  return "unknown";
}

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::Converged: return "converged";
    case Termination::MaxIters: return "max_iters";
    case Termination::InfeasibleLineSearch: return "infeasible_line_search";
  }
  return "unknown";
}

std::optional<SolverPath> parse_solver_path(const std::string& name) {
  for (SolverPath p : {SolverPath::Auto, SolverPath::General, SolverPath::Symmetric,
                       SolverPath::MFallback}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0)) throw std::invalid_argument("tol_residual must be positive");
  if (!(tol_omega > 0.0)) throw std::invalid_argument("tol_omega must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("backtracking factor must lie in (0, 1)");
  }
  if (!(armijo > 0.0 && armijo < 0.5)) throw std::invalid_argument("armijo constant must lie in (0, 0.5)");
}

Eigen::VectorXd system_residual(const PotentialContext& ctx, const KernelCoeffs& kernel,
                                const CoeffPoint& pt) {
  const ReducedSystem sys(ctx, kernel);
  const VectorXd z = sys.reduce(pt);
  return sys.residual(z, evaluate_phi(ctx, pt.with_order(ctx.order())).gradient);
}

double objective_F(const PotentialContext& ctx, const KernelCoeffs& kernel,
                   const CoeffPoint& tail, double tol_omega) {
  CoeffPoint pt = tail.with_order(ctx.order());
  pt.set_a(0, omega_solve(ctx, pt, tol_omega));
  const VectorXd r = system_residual(ctx, kernel, pt);
  return 0.5 * r.tail(r.size() - 1).squaredNorm();
}

double objective_M(const PotentialContext& ctx, const KernelCoeffs& kernel,
                   const CoeffPoint& pt) {
  return merit_m(system_residual(ctx, kernel, pt));
}

double objective_symmetric(const PotentialContext& ctx, const KernelCoeffs& kernel,
                           const CoeffPoint& pt) {
  if (!kernel.symmetric()) {
    throw NonSymmetricKernel("objective_symmetric requires q_k = 0 for all k");
  }
  const ReducedSystem sys(ctx, kernel);
  const CoeffPoint full = pt.with_order(ctx.order());
  return phi_value(ctx, full) - full.a(0) - sys.quadratic_penalty(sys.reduce(full));
}

TrigSolveResult solve_trig(const PotentialContext& ctx, const KernelCoeffs& kernel,
                           const SolverConfig& config, const std::optional<CoeffPoint>& start) {
  config.validate();
  const ReducedSystem sys(ctx, kernel);

  SolverPath path = config.path;
  if (path == SolverPath::Auto) path = kernel.symmetric() ? SolverPath::Symmetric : SolverPath::General;
  if (path == SolverPath::Symmetric && !kernel.symmetric()) {
    throw NonSymmetricKernel("symmetric path requested for a kernel with nonzero sine coefficients");
  }

  SolverReport report;
  report.path = path;

  auto first = evaluate(sys, start_point(sys, start, config.tol_omega),
                        PhiParts::GradientAndHessian);
  if (!first) throw InfeasiblePoint("initial point left the cone", 0.0);
  Evaluated cur = std::move(*first);

  Termination main = Termination::Converged;
  switch (path) {
    case SolverPath::Symmetric:
      main = ascend_symmetric(sys, config, cur, report.iterations, report.objective_trace);
      break;
    case SolverPath::General:
      main = descend_tail(sys, config, cur, report.iterations, report.objective_trace);
      break;
    case SolverPath::MFallback:
      main = newton_full(sys, config, cur, report.iterations, &report.objective_trace);
      break;
    case SolverPath::Auto:
      break;
  }

  report.termination = main;
  if (main == Termination::Converged && sup_norm(cur.residual) > config.tol_residual) {
    report.termination = newton_full(sys, config, cur, report.polish_iterations, nullptr);
  }
  report.residual = sup_norm(cur.residual);
  if (report.termination == Termination::Converged && report.residual > config.tol_residual) {
    report.termination = Termination::MaxIters;
  }
  return {sys.expand(cur.z), std::move(report)};
}

}  // namespace mfg1d
