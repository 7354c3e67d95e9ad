#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mfg1d/errors.hpp"
#include "mfg1d/pipeline.hpp"

using namespace mfg1d;

namespace {

double zero(double) { return 0.0; }

double sup_diff(const SampledFunction& a, const SampledFunction& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

}  // namespace

TEST(ApproxSchedule, DefaultsAndValidation) {
  ApproxSchedule s;
  EXPECT_EQ(s.orders, (std::vector<std::size_t>{4, 8, 16, 32, 64}));
  EXPECT_EQ(s.stop_tol, 1e-8);
  EXPECT_EQ(s.method, KernelApproximation::Fejer);
  EXPECT_NO_THROW(s.validate());
  s.orders = {4, 4};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.orders = {};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_EQ(parse_kernel_approximation("truncated"), KernelApproximation::Truncated);
  EXPECT_FALSE(parse_kernel_approximation("cesaro"));
}

TEST(ApproximateKernel, Examples) {
  const TrigPoly g({1, 2, 0.5}, {0.3, -1});
  const TrigPoly f = approximate_kernel({g}, 2);
  EXPECT_NEAR(f.p(0), 1.0, 1e-14);
  EXPECT_NEAR(f.p(1), 2.0 * 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(f.p(2), 0.5 / 3.0, 1e-14);
  EXPECT_NEAR(f.q(1), 0.3 * 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(f.q(2), -1.0 / 3.0, 1e-14);

  const TrigPoly t = approximate_kernel({g}, 2, KernelApproximation::Truncated);
  EXPECT_NEAR(t.p(1), 2.0, 1e-14);

  const TrigPoly g3 = approximate_kernel({fixtures::g3}, 16);
  EXPECT_NEAR(g3.p(0), 0.5, 1e-10);
  const TrigPoly g3t = approximate_kernel({fixtures::g3}, 16, KernelApproximation::Truncated);
  for (std::size_t k = 1; k <= 12; ++k) {
    // Geometric decay 2^-(k+1), worked out by hand from the kernel's
    // partial-fraction form.
    EXPECT_NEAR(g3t.p(k), std::ldexp(1.0, -static_cast<int>(k) - 1), 1e-12);
    EXPECT_NEAR(g3t.q(k), std::ldexp(1.0, -static_cast<int>(k) - 1), 1e-12);
  }

  for (std::size_t order : {1u, 4u, 9u}) {
    const TrigPoly c = approximate_kernel({[](double) { return 1.0; }}, order);
    EXPECT_NEAR(c.p(0), 1.0, 1e-15);
    for (std::size_t k = 1; k <= order; ++k) EXPECT_NEAR(c.p(k), 0.0, 1e-15);
  }
}

TEST(ApproximateKernel, ErrorsAndClamping) {
  EXPECT_THROW(approximate_kernel({fixtures::g3}, 300), AliasingError);
  try {
    approximate_kernel({[](double x) { return 1.0 - std::cos(kTwoPi * x); }}, 2);
    FAIL() << "expected InadmissibleKernel";
  } catch (const InadmissibleKernel& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].index, 1u);
  }
  EXPECT_THROW(approximate_kernel({[](double x) { return std::cos(kTwoPi * x); }}, 2), InadmissibleKernel);
  const TrigPoly clamped = approximate_kernel({[](double x) { return 1.0 - 1e-13 * std::cos(kTwoPi * x); }}, 2);
  EXPECT_EQ(clamped.p(1), 0.0);
}

TEST(ApproximateKernel, FejerPreservesAdmissibility) {
  oracle::Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> c(6);
    std::vector<double> s(5);
    c[0] = rng.uniform(0.1, 2);
    for (std::size_t k = 1; k < 6; ++k) c[k] = rng.uniform(0, 2);
    for (double& v : s) v = rng.uniform(-2, 2);
    const TrigPoly g(c, s);
    for (std::size_t order : {2u, 5u, 8u}) {
      EXPECT_TRUE(check_kernel_admissible(approximate_kernel({g}, order)));
    }
  }
}

TEST(SolveGeneral, ConstantKernelFlatPotential) {
  const auto p = fixtures::paper_params();
  const GeneralSolveResult r = solve_general(p, zero, {[](double) { return 1.0; }}, {{4, 8}, 1e-8}, SolverConfig{});
  for (const StageRecord& s : r.trace) EXPECT_LE(s.residual, 1e-10);
  EXPECT_NEAR(r.solution.m.min(), 1.0, 1e-12);
  EXPECT_NEAR(r.solution.m.max(), 1.0, 1e-12);
  EXPECT_EQ(r.trace.size(), 2u);
  EXPECT_TRUE(std::isnan(r.trace[0].m_diff));
  EXPECT_LE(r.trace[1].m_diff, 1e-12);
}

TEST(SolveGeneral, StabilizesOnTrigKernel) {
  const auto p = fixtures::paper_params();
  const TrigPoly g({1, 1.5, 0.5}, {-0.5, 0.2});
  ApproxSchedule schedule;
  schedule.orders = {4, 8, 16, 32, 64};
  schedule.stop_tol = 1e-14;
  const GeneralSolveResult r = solve_general(p, fixtures::potential, {g}, schedule, SolverConfig{});
  ASSERT_EQ(r.trace.size(), 5u);
  for (std::size_t i = 2; i < r.trace.size(); ++i) {
    EXPECT_LT(r.trace[i].m_diff, r.trace[i - 1].m_diff);
    EXPECT_LT(r.trace[i].sup_error, r.trace[i - 1].sup_error);
  }
  // Exact kernel solution as the limit.
  const PotentialContext ctx(p, fixtures::potential, 2);
  const KernelCoeffs kernel(g);
  const Solution exact = make_solution(ctx, solve_trig(ctx, kernel, SolverConfig{}).point, kernel);
  EXPECT_LT(sup_diff(r.solution.m, exact.m), sup_diff(make_solution(ctx, solve_trig(ctx, KernelCoeffs(fejer_mean(g, 4)), SolverConfig{}).point, kernel).m, exact.m));

  // Truncation reproduces the exact kernel from order 2 on.
  ApproxSchedule trunc = schedule;
  trunc.method = KernelApproximation::Truncated;
  trunc.orders = {2, 4};
  trunc.stop_tol = 1e-8;
  const GeneralSolveResult t = solve_general(p, fixtures::potential, {g}, trunc, SolverConfig{});
  EXPECT_LE(sup_diff(t.solution.m, exact.m), 1e-10);
  EXPECT_FALSE(t.stopped_early);
  EXPECT_EQ(t.trace.size(), 2u);
}

TEST(SolveGeneral, StopsEarly) {
  const auto p = fixtures::paper_params();
  ApproxSchedule schedule;
  schedule.method = KernelApproximation::Truncated;
  const GeneralSolveResult r = solve_general(p, fixtures::potential, {fixtures::g3}, schedule, SolverConfig{});
  EXPECT_TRUE(r.stopped_early);
  EXPECT_LT(r.trace.size(), schedule.orders.size());
  EXPECT_LE(r.trace.back().m_diff, schedule.stop_tol);
  EXPECT_LE(r.trace.back().sup_error, 1e-5);
}

TEST(SolveGeneral, WarmAndColdStartsAgree) {
  const auto p = fixtures::paper_params();
  ApproxSchedule schedule;
  schedule.orders = {4, 8, 16};
  PipelineOptions cold;
  cold.warm_start = false;
  const GeneralSolveResult a = solve_general(p, fixtures::potential, {fixtures::g3}, schedule, SolverConfig{});
  const GeneralSolveResult b = solve_general(p, fixtures::potential, {fixtures::g3}, schedule, SolverConfig{}, cold);
  EXPECT_LE(sup_diff(a.solution.m, b.solution.m), 1e-8);
  EXPECT_LE(std::abs(a.solution.hbar - b.solution.hbar), 1e-8);
}

TEST(SolveGeneral, StabilityUnderKernelPerturbation) {
  const auto p = fixtures::paper_params();
  ApproxSchedule schedule;
  schedule.orders = {16};
  const GeneralSolveResult base = solve_general(p, fixtures::potential, {fixtures::g3}, schedule, SolverConfig{});
  double previous = std::numeric_limits<double>::infinity();
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const GeneralKernel perturbed{[delta](double x) { return fixtures::g3(x) + delta * std::cos(kTwoPi * x); }};
    const GeneralSolveResult r = solve_general(p, fixtures::potential, perturbed, schedule, SolverConfig{});
    const double diff = sup_diff(r.solution.m, base.solution.m);
    EXPECT_LT(diff, previous);
    previous = diff;
  }
}

TEST(SolveGeneral, StageErrorCarriesStage) {
  const auto p = fixtures::paper_params();
  ApproxSchedule schedule;
  schedule.orders = {2, 4};
  SolverConfig config;
  config.max_iters = 1;
  try {
    solve_general(p, fixtures::potential, {fixtures::g3}, schedule, config);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), 0u);
    EXPECT_EQ(e.order(), 2u);
  }
}
