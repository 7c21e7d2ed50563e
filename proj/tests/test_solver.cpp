#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "coagtree/exact.hpp"
#include "coagtree/plan.hpp"
#include "coagtree/solver.hpp"

using namespace coagtree;

namespace {

SolverConfig bessel_config(int order, int steps) {
  SolverConfig c;
  c.grid = GridSpec(100.0, 1u << 14);
  c.kernel = kernels::SeparablePower{2.0};
  c.data = InitialData::exp_over_x;
  c.horizon = 0.5;
  c.order = order;
  c.steps = steps;
  return c;
}

}  // namespace

TEST(Plan, OrderOne) {
  const auto p = build_plan(1);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_EQ(p.steps[0].code.word(), "1");
  EXPECT_TRUE(p.steps[0].left.is_leaf());
  EXPECT_TRUE(p.steps[0].right.is_leaf());
  EXPECT_EQ(p.steps[0].coefficient, 1);
}

TEST(Plan, OrderThreeCoefficients) {
  const auto p = build_plan(3);
  ASSERT_EQ(p.steps.size(), 4u);
  const char* codes[] = {"1", "12", "123", "212"};
  const Rational coeffs[] = {1, 1, Rational(4, 6), Rational(2, 6)};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(p.steps[i].code.word(), codes[i]);
    EXPECT_EQ(p.steps[i].coefficient, coeffs[i]) << codes[i];
  }
  EXPECT_EQ(p.steps[3].left.word(), "1");
  EXPECT_EQ(p.steps[3].right.word(), "1");
}

TEST(Plan, OrderFourAddsTableTriples) {
  const auto plan = build_plan(4);
  const auto grade4 = plan.grade(4);
  ASSERT_EQ(grade4.size(), 3u);
  EXPECT_EQ(grade4[0]->code.word(), "1234");
  EXPECT_EQ(grade4[0]->coefficient, Rational(8, 24));
  EXPECT_EQ(grade4[1]->code.word(), "1323");
  EXPECT_EQ(grade4[1]->coefficient, Rational(4, 24));
  EXPECT_EQ(grade4[2]->code.word(), "2123");
  EXPECT_EQ(grade4[2]->coefficient, Rational(12, 24));
}

TEST(Plan, DecompositionsUseEarlierSteps) {
  const auto p = build_plan(6);
  const auto available = [&](const Tree& t, int below) {
    if (t.is_leaf()) return true;
    return std::any_of(p.steps.begin(), p.steps.end(),
                       [&](const PlanStep& q) { return q.code == t && q.grade() < below; });
  };
  for (const auto& s : p.steps) {
    EXPECT_EQ(graft(s.left, s.right), s.code);
    EXPECT_TRUE(available(s.left, s.grade())) << s.code.word();
    EXPECT_TRUE(available(s.right, s.grade())) << s.code.word();
  }
}

TEST(Plan, GradeCoefficientsSumToOne) {
  // sum over non-planar representatives of w 2^sigma equals n!.
  const auto p = build_plan(6);
  for (int g = 1; g <= 6; ++g) {
    Rational s = 0;
    for (const auto* step : p.grade(g)) s += step->coefficient;
    EXPECT_EQ(s, 1) << g;
  }
}

TEST(Plan, RejectsBadOrders) {
  EXPECT_THROW(build_plan(0), domain_error);
  EXPECT_THROW(build_plan(13), resource_limit);
}

TEST(FormalStep, ReproducesTheSeriesExactly) {
  for (int n = 1; n <= 6; ++n) {
    const Rational dt(1, 3);
    FormalGraftAlgebra alg(n);
    const auto stepped = advance(alg, SeriesVector::unit(n), dt, build_plan(n));
    EXPECT_EQ(stepped, project_nonplanar(to_plain(solution_coefficients(dt, n)))) << "N=" << n;
  }
}

TEST(Step, ZeroStepIsIdentity) {
  const auto c = bessel_config(3, 1);
  const auto g = sample_initial(c.data, c.grid);
  FftEngine e;
  const auto r = step(g, 0.0, build_plan(3), c.kernel, e);
  EXPECT_EQ(r.values, g.values);
  EXPECT_EQ(e.count(), 0u);
  EXPECT_THROW(step(g, -0.1, build_plan(3), c.kernel, e), domain_error);
}

TEST(Step, FirstOrderMatchesAnalyticRightHandSide) {
  // K = xy, g = e^{-x}/x: Q(g)(x) = e^{-x}(x/2 - 1).
  const auto c = bessel_config(1, 1);
  const auto g = sample_initial(c.data, c.grid);
  const double dt = 0.01;
  FftEngine e;
  const auto r = step(g, dt, build_plan(1), c.kernel, e);
  const auto want = GridFunction::sample(c.grid, [&](double x) {
    return std::exp(-x) / x + dt * std::exp(-x) * (0.5 * x - 1.0);
  });
  EXPECT_LE(l2_distance(r, want) / l2_norm(want), 1e-3);
}

TEST(Step, OrderThreeUsesAtMostTenTransforms) {
  const auto c = bessel_config(3, 1);
  const auto g = sample_initial(c.data, c.grid);
  FftEngine e;
  step(g, 0.01, build_plan(3), c.kernel, e);
  EXPECT_LE(e.count(), 10u);
  EXPECT_EQ(e.count(), 9u);
}

TEST(Run, SingleStepEqualsStep) {
  auto c = bessel_config(3, 1);
  c.horizon = 0.05;
  const auto tr = run(c);
  FftEngine e;
  const auto s = step(sample_initial(c.data, c.grid), 0.05, build_plan(3), c.kernel, e);
  EXPECT_EQ(tr.final_state.values, s.values);
  ASSERT_EQ(tr.records.size(), 2u);
  EXPECT_EQ(tr.records[1].fft_count, 9u);
}

TEST(Run, OrderThreeCloseToBessel) {
  const auto c = bessel_config(3, 64);
  const auto tr = run(c);
  const auto exact = multiplicative_bessel(c.grid, c.horizon);
  EXPECT_LE(l2_distance(tr.final_state, exact) / l2_norm(exact), 1e-4);
  EXPECT_TRUE(tr.m0_increases.empty());
  for (std::size_t i = 1; i < tr.records.size(); ++i) EXPECT_LE(tr.records[i].m0, tr.records[i - 1].m0);
}

TEST(Run, SubcriticalMassIsConserved) {
  SolverConfig c;
  c.grid = GridSpec(100.0, 1u << 14);
  c.kernel = kernels::SeparablePower{2.0 / 3.0};
  c.data = InitialData::exp;
  c.horizon = 1.5;
  c.order = 3;
  c.steps = 32;
  const auto tr = run(c);
  const double m10 = tr.records.front().m1;
  for (const auto& r : tr.records) EXPECT_LE(std::abs(r.m1 - m10) / m10, 1e-3);
}

TEST(Run, SnapshotsAndCsv) {
  auto c = bessel_config(2, 4);
  c.grid = GridSpec(50.0, 1u << 10);
  c.snapshot_every = 2;
  const auto tr = run(c);
  ASSERT_EQ(tr.snapshots.size(), 3u);
  EXPECT_DOUBLE_EQ(tr.snapshots[2].first, 0.5);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,M0,M1,fft_count");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}

TEST(Run, DeterministicAcrossRuns) {
  auto c = bessel_config(3, 8);
  c.grid = GridSpec(100.0, 1u << 12);
  EXPECT_EQ(run(c).final_state.values, run(c).final_state.values);
}

TEST(Run, GelationGuard) {
  auto c = bessel_config(3, 8);
  c.horizon = 1.2;
  EXPECT_THROW(run(c), config_error);
  c.gelation_guard = false;
  c.horizon = 0.5;
  EXPECT_NO_THROW(validate(c));
}

TEST(Run, NonFiniteStateIsReported) {
  auto c = bessel_config(1, 2);
  c.grid = GridSpec(10.0, 64);
  auto g = sample_initial(c.data, c.grid);
  g.values[3] = std::nan("");
  try {
    run(c, &g);
    FAIL() << "expected non_finite_value";
  } catch (const non_finite_value& e) {
    EXPECT_EQ(e.step_index(), 1u);
  }
}

TEST(Run, ConfigChecks) {
  auto c = bessel_config(3, 0);
  EXPECT_THROW(validate(c), config_error);
  c.steps = 4;
  c.order = 13;
  EXPECT_THROW(validate(c), config_error);
  c.order = 3;
  c.horizon = -1.0;
  EXPECT_THROW(validate(c), config_error);
}
