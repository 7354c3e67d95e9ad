#include "mfg1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mfg1d/errors.hpp"

namespace mfg1d {

namespace {

constexpr std::size_t kRefinement = 4;
constexpr double kRefineTrigger = 1e3;

// w (and the grid it lives on) for one coefficient point.
struct NodeValues {
  std::vector<double> w;
  std::size_t nodes = 0;
  bool refined = false;
  double min_w = 0.0;
};

std::vector<double> w_on_working_grid(const PotentialContext& ctx, const CoeffPoint& pt) {
  const std::size_t n = ctx.grid().size();
  const auto v = ctx.potential_samples().values();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = pt.a(0) - v[i];
  for (std::size_t k = 1; k <= pt.order(); ++k) {
    const double ak = pt.a(k);
    const double bk = pt.b(k);
    if (ak == 0.0 && bk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += ak * ctx.cos_basis(k, i) + bk * ctx.sin_basis(k, i);
    }
  }
  return w;
}

struct Roots {
  explicit Roots(std::size_t m) : cos(m), sin(m) {
    for (std::size_t t = 0; t < m; ++t) {
      const double angle = kTwoPi * static_cast<double>(t) / static_cast<double>(m);
      cos[t] = std::cos(angle);
      sin[t] = std::sin(angle);
    }
  }
  std::vector<double> cos, sin;
};

std::vector<double> w_on_fine_grid(const PotentialContext& ctx, const CoeffPoint& pt,
                                   const Roots& roots) {
  const std::size_t m = roots.cos.size();
  std::vector<double> w(m);
  const RealFunction& potential = ctx.potential();
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = pt.a(0) - potential(static_cast<double>(i) / static_cast<double>(m));
  }
  for (std::size_t k = 1; k <= pt.order(); ++k) {
    std::size_t t = 0;
    for (std::size_t i = 0; i < m; ++i) {
      w[i] += pt.a(k) * roots.cos[t] + pt.b(k) * roots.sin[t];
      t = (t + k) % m;
    }
  }
  return w;
}

void check_order(const PotentialContext& ctx, const CoeffPoint& pt) {
  if (pt.order() > ctx.order()) {
    throw std::invalid_argument("coefficient point of order " + std::to_string(pt.order()) +
                                " exceeds context order " + std::to_string(ctx.order()));
  }
}

NodeValues node_values(const PotentialContext& ctx, const CoeffPoint& pt) {
  check_order(ctx, pt);
  NodeValues out;
  out.w = w_on_working_grid(ctx, pt);
  out.nodes = out.w.size();
  out.min_w = *std::min_element(out.w.begin(), out.w.end());
  const double margin = cone_margin(pt);
  if (!(out.min_w >= margin)) {
    std::ostringstream msg;
    msg << "point outside the feasibility cone: min w = " << out.min_w << " < " << margin;
    throw InfeasiblePoint(msg.str(), out.min_w);
  }
  if (out.min_w < kRefineTrigger * margin) {
    const Roots roots(kRefinement * out.nodes);
    out.w = w_on_fine_grid(ctx, pt, roots);
    out.nodes = out.w.size();
    out.refined = true;
    out.min_w = *std::min_element(out.w.begin(), out.w.end());
    if (!(out.min_w > 0.0)) {
      std::ostringstream msg;
      msg << "point outside the feasibility cone on the refined grid: min w = " << out.min_w;
      throw InfeasiblePoint(msg.str(), out.min_w);
    }
  }
  return out;
}

// mean(f * cos(2 pi k y)), mean(f * sin(2 pi k y)) for k = 0..max_mode.
void accumulate_moments(const PotentialContext& ctx, const NodeValues& nodes,
                        const std::vector<double>& f, std::size_t max_mode,
                        std::vector<double>& c, std::vector<double>& s) {
  c.assign(max_mode + 1, 0.0);
  s.assign(max_mode + 1, 0.0);
  const double inv = 1.0 / static_cast<double>(nodes.nodes);
  if (!nodes.refined) {
    for (std::size_t k = 0; k <= max_mode; ++k) {
      double ck = 0.0;
      double sk = 0.0;
      for (std::size_t i = 0; i < nodes.nodes; ++i) {
        ck += f[i] * ctx.cos_basis(k, i);
        sk += f[i] * ctx.sin_basis(k, i);
      }
      c[k] = ck * inv;
      s[k] = sk * inv;
    }
    return;
  }
  const Roots roots(nodes.nodes);
  for (std::size_t k = 0; k <= max_mode; ++k) {
    double ck = 0.0;
    double sk = 0.0;
    std::size_t t = 0;
    for (std::size_t i = 0; i < nodes.nodes; ++i) {
      ck += f[i] * roots.cos[t];
      sk += f[i] * roots.sin[t];
      t = (t + k) % nodes.nodes;
    }
    c[k] = ck * inv;
    s[k] = sk * inv;
  }
}

// Unit-mass equation in a_0 for a fixed tail: g(a_0) = c_j mean((a_0 + s)^(-1/alpha)).
class MassEquation {
 public:
  MassEquation(const PotentialContext& ctx, const CoeffPoint& tail)
      : ctx_(ctx), tail_(tail) {
    tail_.set_a(0, 0.0);
    shift_ = w_on_working_grid(ctx, tail_);
    lower_ = -*std::min_element(shift_.begin(), shift_.end());
  }

  double lower_bound() const { return lower_; }

  // Returns (g, g') at a_0, or nullopt when a_0 is not strictly feasible.
  std::optional<std::pair<double, double>> operator()(double a0) {
    const double margin = 1e-10 * (1.0 + std::abs(a0));
    const double min_w = a0 - lower_;
    if (!(min_w > 0.0)) return std::nullopt;
    const std::vector<double>* s = &shift_;
    if (min_w < kRefineTrigger * margin) {
      if (fine_shift_.empty()) {
        const Roots roots(kRefinement * shift_.size());
        fine_shift_ = w_on_fine_grid(ctx_, tail_, roots);
      }
      s = &fine_shift_;
    }
    const double alpha = ctx_.params().alpha;
    const double c_j = ctx_.params().c_j;
    double sum = 0.0;
    double dsum = 0.0;
    for (double si : *s) {
      const double w = a0 + si;
      if (!(w > 0.0)) return std::nullopt;
      const double term = std::pow(w, -1.0 / alpha);
      sum += term;
      dsum += term / w;
    }
    const double inv = 1.0 / static_cast<double>(s->size());
    return std::make_pair(c_j * sum * inv, -(c_j / alpha) * dsum * inv);
  }

 private:
  const PotentialContext& ctx_;
  CoeffPoint tail_;
  std::vector<double> shift_;
  std::vector<double> fine_shift_;
  double lower_ = 0.0;
};

}  // namespace

CongestionParams CongestionParams::make(double alpha, double current_j) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw DomainError("congestion exponent alpha must lie in (0, 2], got " +
                      std::to_string(alpha));
  }
  if (current_j == 0.0 || !std::isfinite(current_j)) {
    throw DomainError("current j must be finite and nonzero");
  }
  CongestionParams p;
  p.alpha = alpha;
  p.current_j = current_j;
  p.c_j = std::pow(0.5 * current_j * current_j, 1.0 / alpha);
  return p;
}

double phi_scalar(const CongestionParams& params, double x) {
  if (!(x > 0.0)) throw DomainError("phi_alpha is defined for x > 0 only");
  const double alpha = params.alpha;
  if (alpha == 1.0) return params.c_j * std::log(x);
  return params.c_j * alpha / (alpha - 1.0) * std::pow(x, (alpha - 1.0) / alpha);
}

CoeffPoint::CoeffPoint(std::size_t order, double a0) : a_(order + 1, 0.0), b_(order, 0.0) {
  a_[0] = a0;
}

CoeffPoint::CoeffPoint(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size() + 1) {
    throw std::invalid_argument("CoeffPoint: expected " + std::to_string(b_.size() + 1) +
                                " cosine coefficients, got " + std::to_string(a_.size()));
  }
}

CoeffPoint CoeffPoint::from_vector(const Eigen::VectorXd& v, std::size_t order) {
  if (static_cast<std::size_t>(v.size()) != 2 * order + 1) {
    throw std::invalid_argument("CoeffPoint::from_vector: dimension mismatch");
  }
  CoeffPoint pt(order);
  for (std::size_t k = 0; k <= order; ++k) pt.a_[k] = v(static_cast<Eigen::Index>(k));
  for (std::size_t k = 1; k <= order; ++k) pt.b_[k - 1] = v(static_cast<Eigen::Index>(order + k));
  return pt;
}

Eigen::VectorXd CoeffPoint::to_vector() const {
  const std::size_t n = order();
  Eigen::VectorXd v(static_cast<Eigen::Index>(2 * n + 1));
  for (std::size_t k = 0; k <= n; ++k) v(static_cast<Eigen::Index>(k)) = a_[k];
  for (std::size_t k = 1; k <= n; ++k) v(static_cast<Eigen::Index>(n + k)) = b_[k - 1];
  return v;
}

TrigPoly CoeffPoint::as_trig() const { return TrigPoly(a_, b_); }

CoeffPoint CoeffPoint::with_order(std::size_t order) const {
  CoeffPoint out(order);
  for (std::size_t k = 0; k <= std::min(order, this->order()); ++k) out.a_[k] = a_[k];
  for (std::size_t k = 1; k <= std::min(order, this->order()); ++k) out.b_[k - 1] = b_[k - 1];
  return out;
}

PotentialContext::PotentialContext(CongestionParams params, RealFunction potential,
                                   std::size_t order, std::size_t grid_size)
    : params_(params),
      potential_(std::move(potential)),
      order_(order),
      grid_(grid_size),
      potential_samples_(SampledFunction::sample(grid_, potential_)) {
  const std::size_t n = grid_.size();
  const std::size_t modes = 2 * order_ + 1;
  if (n < 4 * order_ + 4) {
    throw AliasingError("grid of " + std::to_string(n) + " points cannot resolve order " +
                        std::to_string(order_));
  }
  cos_.resize(modes * n);
  sin_.resize(modes * n);
  const Roots roots(n);
  for (std::size_t k = 0; k < modes; ++k) {
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      cos_[k * n + i] = roots.cos[t];
      sin_[k * n + i] = roots.sin[t];
      t = (t + k) % n;
    }
  }
}

double cone_margin(const CoeffPoint& pt) { return 1e-10 * (1.0 + std::abs(pt.a(0))); }

SampledFunction eval_w(const PotentialContext& ctx, const CoeffPoint& pt) {
  check_order(ctx, pt);
  return SampledFunction(ctx.grid(), w_on_working_grid(ctx, pt));
}

bool in_cone(const PotentialContext& ctx, const CoeffPoint& pt, double margin) {
  return eval_w(ctx, pt).min() >= margin;
}

bool in_cone(const PotentialContext& ctx, const CoeffPoint& pt) {
  return in_cone(ctx, pt, cone_margin(pt));
}

PhiEvaluation evaluate_phi(const PotentialContext& ctx, const CoeffPoint& pt, PhiParts parts) {
  const NodeValues nodes = node_values(ctx, pt);
  const CongestionParams& params = ctx.params();
  const double alpha = params.alpha;
  const double c_j = params.c_j;
  const std::size_t n = ctx.order();
  const std::size_t m = nodes.nodes;

  PhiEvaluation out;
  out.min_w = nodes.min_w;
  out.refined = nodes.refined;

  std::vector<double> first(m);
  std::vector<double> second(parts == PhiParts::GradientAndHessian ? m : 0);
  double value = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = nodes.w[i];
    const double root = std::pow(w, -1.0 / alpha);
    value += alpha == 1.0 ? std::log(w) : w * root;  // w^((alpha-1)/alpha) = w * w^(-1/alpha)
    first[i] = c_j * root;
    if (!second.empty()) second[i] = -(c_j / alpha) * root / w;
  }
  value /= static_cast<double>(m);
  out.value = alpha == 1.0 ? c_j * value : c_j * alpha / (alpha - 1.0) * value;

  std::vector<double> c, s;
  accumulate_moments(ctx, nodes, first, n, c, s);
  out.gradient.resize(static_cast<Eigen::Index>(2 * n + 1));
  for (std::size_t k = 0; k <= n; ++k) out.gradient(static_cast<Eigen::Index>(k)) = c[k];
  for (std::size_t k = 1; k <= n; ++k) out.gradient(static_cast<Eigen::Index>(n + k)) = s[k];

  if (!second.empty()) {
    // Products of two basis functions reduce to single modes up to 2n.
    accumulate_moments(ctx, nodes, second, 2 * n, c, s);
    auto S = [&](long k) { return k >= 0 ? s[static_cast<std::size_t>(k)] : -s[static_cast<std::size_t>(-k)]; };
    const auto dim = static_cast<Eigen::Index>(2 * n + 1);
    out.hessian.resize(dim, dim);
    for (std::size_t l = 0; l <= n; ++l) {
      for (std::size_t r = l; r <= n; ++r) {
        const double v = 0.5 * (c[r - l] + c[l + r]);
        out.hessian(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r)) = v;
        out.hessian(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) = v;
      }
    }
    for (std::size_t l = 1; l <= n; ++l) {
      for (std::size_t r = l; r <= n; ++r) {
        const double v = 0.5 * (c[r - l] - c[l + r]);
        out.hessian(static_cast<Eigen::Index>(n + l), static_cast<Eigen::Index>(n + r)) = v;
        out.hessian(static_cast<Eigen::Index>(n + r), static_cast<Eigen::Index>(n + l)) = v;
      }
    }
    for (std::size_t l = 0; l <= n; ++l) {
      for (std::size_t r = 1; r <= n; ++r) {
        const long lr = static_cast<long>(r) - static_cast<long>(l);
        const double v = 0.5 * (s[l + r] + S(lr));
        out.hessian(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n + r)) = v;
        out.hessian(static_cast<Eigen::Index>(n + r), static_cast<Eigen::Index>(l)) = v;
      }
    }
  }
  return out;
}

double phi_value(const PotentialContext& ctx, const CoeffPoint& pt) {
  return evaluate_phi(ctx, pt).value;
}

Eigen::VectorXd phi_grad(const PotentialContext& ctx, const CoeffPoint& pt) {
  return evaluate_phi(ctx, pt).gradient;
}

Eigen::MatrixXd phi_hessian(const PotentialContext& ctx, const CoeffPoint& pt) {
  return evaluate_phi(ctx, pt, PhiParts::GradientAndHessian).hessian;
}

double omega_solve(const PotentialContext& ctx, const CoeffPoint& tail, double tol,
                   int max_iters) {
  check_order(ctx, tail);
  MassEquation mass(ctx, tail);
  const double l = mass.lower_bound();

  auto fail = [&](const std::string& why, double lo, double hi, double residual) {
    std::ostringstream msg;
    msg << "omega_solve: " << why << " (bracket [" << lo << ", " << hi
        << "], residual " << residual << ")";
    return OmegaSolveError(msg.str(), lo, hi, residual);
  };

  // Bracket: g(lo) > 1 > g(hi).
  double lo = l;
  double hi = l;
  {
    auto first = mass(l + 1.0);
    if (!first) throw fail("mass equation undefined at l + 1", l, l + 1.0, NAN);
    if (first->first == 1.0) return l + 1.0;
    if (first->first > 1.0) {
      lo = l + 1.0;
      double width = 2.0;
      bool found = false;
      for (int it = 0; it < 2000 && !found; ++it) {
        hi = l + width;
        auto g = mass(hi);
        if (g && g->first < 1.0) found = true;
        else {
          lo = hi;
          width *= 2.0;
        }
      }
      if (!found) throw fail("no upper bracket", lo, hi, NAN);
    } else {
      hi = l + 1.0;
      double delta = 0.5;
      bool found = false;
      for (int it = 0; it < 2000 && !found; ++it) {
        lo = l + delta;
        auto g = mass(lo);
        if (!g || g->first > 1.0) found = true;
        else {
          hi = lo;
          delta *= 0.5;
        }
        if (delta == 0.0) break;
      }
      if (!found) throw fail("no lower bracket", lo, hi, NAN);
    }
  }

  int iterations = 0;
  while (hi - lo > 1e-3 && iterations < max_iters) {
    const double mid = 0.5 * (lo + hi);
    auto g = mass(mid);
    if (!g || g->first > 1.0) lo = mid;
    else hi = mid;
    ++iterations;
  }

  double x = 0.5 * (lo + hi);
  double residual = std::numeric_limits<double>::infinity();
  for (; iterations < max_iters; ++iterations) {
    auto g = mass(x);
    if (!g) {
      lo = x;
      x = 0.5 * (lo + hi);
      continue;
    }
    residual = g->first - 1.0;
    if (std::abs(residual) <= tol) return x;
    if (residual > 0.0) lo = x;
    else hi = x;
    double next = x - residual / g->second;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      break;  // bracket exhausted at machine resolution
    }
    x = next;
  }
  throw fail("did not converge", lo, hi, residual);
}

}  // namespace mfg1d
