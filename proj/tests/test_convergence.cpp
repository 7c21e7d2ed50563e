#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "coagtree/convergence.hpp"

using namespace coagtree;

namespace {

SweepConfig small_sweep() {
  SweepConfig s;
  s.base.grid = GridSpec(60.0, 1u << 11);
  s.base.kernel = kernels::SeparablePower{2.0};
  s.base.data = InitialData::exp_over_x;
  s.base.horizon = 0.5;
  s.orders = {1};
  s.steps = {8, 16, 32};
  s.workers = 2;
  return s;
}

}  // namespace

TEST(FitSlope, RecoversSyntheticPowerLaw) {
  std::vector<std::pair<int, double>> pts;
  for (int m : {8, 16, 32, 64}) pts.emplace_back(m, 3.0 * std::pow(m, -2.5));
  EXPECT_NEAR(*fit_slope(pts), 2.5, 1e-12);
  EXPECT_FALSE(fit_slope({{8, 1e-3}}).has_value());
  EXPECT_FALSE(fit_slope({}).has_value());
}

TEST(FitSweep, ExcludesCellsNearTheFloor) {
  SweepResult r;
  r.cells = {{1, 8, 1e-2, true, {}}, {1, 16, 2.5e-3, true, {}}, {1, 32, 1e-6, true, {}},
             {2, 8, 1.5e-6, true, {}}, {2, 16, 0.0, false, "boom"}};
  fit_sweep(r, {1, 2}, 2.0);
  EXPECT_DOUBLE_EQ(r.floor, 1e-6);
  ASSERT_EQ(r.fits.size(), 2u);
  EXPECT_EQ(r.fits[0].steps_used, (std::vector<int>{8, 16}));
  EXPECT_NEAR(*r.fits[0].slope, 2.0, 1e-12);
  EXPECT_TRUE(r.fits[1].steps_used.empty());
  EXPECT_FALSE(r.fits[1].slope.has_value());
}

TEST(Sweep, FirstOrderHalvesTheError) {
  const auto r = run_sweep(small_sweep());
  ASSERT_EQ(r.cells.size(), 3u);
  for (const auto& c : r.cells) ASSERT_TRUE(c.ok) << c.failure;
  for (std::size_t i = 1; i < r.cells.size(); ++i) {
    EXPECT_NEAR(r.cells[i - 1].error / r.cells[i].error, 2.0, 0.3) << r.cells[i].steps;
  }
  EXPECT_GT(r.reference_norm, 0.0);
}

TEST(Sweep, FailedCellIsRecorded) {
  auto s = small_sweep();
  s.steps = {8, 0};
  const auto r = run_sweep(s);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_TRUE(r.cells[0].ok);
  EXPECT_FALSE(r.cells[1].ok);
  EXPECT_FALSE(r.cells[1].failure.empty());
  std::ostringstream os;
  write_cells_csv(os, r);
  EXPECT_NE(os.str().find("1,0,,failed"), std::string::npos);
}

TEST(Sweep, ExactReferenceNeedsMultiplicativeKernel) {
  auto s = small_sweep();
  s.base.kernel = kernels::SeparablePower{1.5};
  EXPECT_THROW(run_sweep(s), config_error);
  s = small_sweep();
  s.base.data = InitialData::exp;
  EXPECT_THROW(run_sweep(s), config_error);
  s = small_sweep();
  s.orders.clear();
  EXPECT_THROW(run_sweep(s), config_error);
}

TEST(Sweep, SelfReference) {
  auto s = small_sweep();
  s.base.kernel = kernels::SeparablePower{2.0 / 3.0};
  s.base.data = InitialData::exp;
  s.reference = ReferenceKind::self;
  s.reference_order = 4;
  s.reference_steps = 64;
  const auto r = run_sweep(s);
  for (const auto& c : r.cells) EXPECT_TRUE(c.ok) << c.failure;
  ASSERT_TRUE(r.fits[0].slope.has_value());
  EXPECT_NEAR(*r.fits[0].slope, 1.0, 0.25);
}

TEST(SweepCsv, Headers) {
  SweepResult r;
  r.cells = {{1, 8, 1e-2, true, {}}, {1, 16, 5e-3, true, {}}};
  fit_sweep(r, {1}, 2.0);
  std::ostringstream cells;
  write_cells_csv(cells, r);
  EXPECT_EQ(cells.str().substr(0, 16), "N,M,error,status");
  std::ostringstream slopes;
  write_slopes_csv(slopes, r);
  EXPECT_EQ(slopes.str(), "N,slope,points\n1,,1\n");
}
