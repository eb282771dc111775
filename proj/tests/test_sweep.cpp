#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ramaniton/dynamics.hpp"
#include "ramaniton/error.hpp"
#include "ramaniton/nambu.hpp"
#include "ramaniton/sweep.hpp"
#include "test_support.hpp"

namespace ramaniton {
namespace {

using testing::kind_of;

std::vector<ObservablePoint> series_for(const ModelParams& p, double tau_max, double step) {
  return evolve_series(p, make_grid(0.0, tau_max, step), std::nullopt);
}

TEST(Grid, InclusiveArithmetic) {
  EXPECT_EQ(make_grid(0.0, 3.0, 0.001).size(), 3001u);
  EXPECT_EQ(make_grid(1.0, 1.0, 1.0), std::vector<double>{1.0});
  EXPECT_EQ(make_grid(0.0, 1.0, 0.3).size(), 4u);
  EXPECT_EQ(kind_of([] { make_grid(0.0, 1.0, 0.0); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { make_grid(1.0, 0.0, 0.1); }), ErrorKind::InvalidParameters);
}

TEST(Grid, Validation) {
  const std::vector<double> ok{0.1, 0.2};
  const std::vector<double> empty;
  const std::vector<double> flat{0.1, 0.1};
  EXPECT_NO_THROW(validate_grid(ok, "q"));
  EXPECT_EQ(kind_of([&] { validate_grid(empty, "q"); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([&] { validate_grid(flat, "q"); }), ErrorKind::InvalidParameters);
}

TEST(SweepSpec, RejectsOutOfDomainShift) {
  SweepSpec spec{silicon_preset(), {0.5, 13.0}, 100.0, std::nullopt};
  EXPECT_EQ(kind_of([&] { spec.validate(); }), ErrorKind::InvalidParameters);
  spec.q_grid = {0.5, 0.6};
  spec.tau = -1.0;
  EXPECT_EQ(kind_of([&] { spec.validate(); }), ErrorKind::InvalidParameters);
}

TEST(DispersionSweep, GapAtResonance) {
  const std::vector<double> q{1.0};
  for (const double eta : {0.1, 1.0}) {
    const DispersionRow r = sweep_dispersion({12.4, eta, 1.0}, q).front();
    EXPECT_NEAR(r.omega3 - r.omega2, eta / std::sqrt(2.0), 1e-12);
  }
  EXPECT_NEAR(sweep_dispersion({12.4, 0.1, 1.0}, q).front().omega3 -
                  sweep_dispersion({12.4, 0.1, 1.0}, q).front().omega2,
              0.0707, 1e-4);
}

TEST(DispersionSweep, DecoupledCurvesCross) {
  const auto rows = sweep_dispersion({12.4, 0.0, 1.0}, make_grid(0.0, 2.0, 0.25));
  for (const DispersionRow& r : rows) {
    EXPECT_DOUBLE_EQ(r.omega1, -r.q);
    EXPECT_DOUBLE_EQ(r.omega2, std::min(r.q, 1.0));
    EXPECT_DOUBLE_EQ(r.omega3, std::max(r.q, 1.0));
  }
}

TEST(GoldenSection, FindsParabolaMinimum) {
  const GoldenResult r = golden_section_minimize([](double x) { return (x - 2.0) * (x - 2.0); }, 0.0, 5.0, 60, 1e-9);
  EXPECT_NEAR(r.x, 2.0, 1e-8);
  EXPECT_LT(r.value, 1e-16);
}

TEST(Resonances, SiliconFirstNode) {
  const ModelParams p = silicon_preset();
  const auto nodes = find_resonances(p, series_for(p, 1e4, 10.0));
  ASSERT_FALSE(nodes.empty());
  EXPECT_NEAR(nodes.front().tau_star, 8.89e3, 0.01 * 8.89e3);
  for (const ResonancePoint& n : nodes) {
    EXPECT_LE(std::abs(n.n_stokes - n.n_anti_stokes), 1e-3 * n.n_stokes);
    EXPECT_EQ(n.q, 1.0);
  }
  EXPECT_EQ(std::count_if(nodes.begin(), nodes.end(), [](const ResonancePoint& n) { return n.is_global; }), 1);
}

TEST(Resonances, NodeThresholdAgainstRunningMax) {
  const ModelParams p = silicon_preset();
  const auto series = series_for(p, 1e4, 10.0);
  double peak = 0.0;
  for (const ResonancePoint& n : find_resonances(p, series)) {
    for (const ObservablePoint& s : series) {
      if (s.tau <= n.tau_star) peak = std::max(peak, s.n_phonon);
    }
    EXPECT_LE(n.n_c_min, kNodeThreshold * peak);
  }
}

TEST(Resonances, NoneWithoutPump) {
  const ModelParams p{12.4, 0.0, 1.0};
  EXPECT_EQ(kind_of([&] { find_resonances(p, series_for(p, 1e4, 10.0)); }), ErrorKind::NoResonance);
}

TEST(Resonances, DetunedNodesSqueezeLess) {
  const ModelParams on = silicon_preset(1.0);
  const ModelParams off = silicon_preset(0.9995);
  const auto best_on = find_resonances(on, series_for(on, 1e4, 10.0));
  const auto best_off = find_resonances(off, series_for(off, 2e4, 10.0));
  ASSERT_FALSE(best_off.empty());
  const double global_on = std::find_if(best_on.begin(), best_on.end(), [](auto& n) { return n.is_global; })->s_db;
  for (const ResonancePoint& n : best_off) EXPECT_LT(n.s_db, global_on);
  EXPECT_GT(std::abs(best_off.front().tau_star - best_on.front().tau_star), 100.0);
}

TEST(SweepQ, PeakAndCorrelationMinimumAtResonance) {
  const auto rows = sweep_q(silicon_preset(), make_grid(0.999, 1.001, 1e-5), 8.89e3, std::nullopt);
  const auto peak = std::max_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.s_db < b.s_db; });
  EXPECT_NEAR(peak->s_db, 28.0, 0.5);
  EXPECT_NEAR(peak->q, 1.0, 2e-5);
  const auto least = std::min_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return *a.g2 < *b.g2; });
  EXPECT_NEAR(least->q, 1.0, 2e-5);
  EXPECT_GT(*rows.front().g2, *least->g2);
}

TEST(SweepQ, OffOptimalLengthPeaksAwayFromResonance) {
  for (const double tau : {5e3, 1.2e4}) {
    const auto rows = sweep_q(silicon_preset(), make_grid(0.99, 1.01, 1e-4), tau, std::nullopt);
    const auto peak = std::max_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.s_db < b.s_db; });
    EXPECT_GT(std::abs(peak->q - 1.0), 1e-4) << "tau=" << tau;
  }
}

TEST(SweepQ, IndependentOfThreadCount) {
  const auto grid = make_grid(0.98, 1.02, 1e-4);
  std::vector<SweepRow> reference;
  {
    testing::ScopedEnv env("RAMANITON_THREADS", "1");
    reference = sweep_q(silicon_preset(), grid, 7000.0, std::nullopt);
  }
  testing::ScopedEnv env("RAMANITON_THREADS", "5");
  const auto rows = sweep_q(silicon_preset(), grid, 7000.0, std::nullopt);
  ASSERT_EQ(rows.size(), reference.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].s_db, reference[i].s_db);
    EXPECT_EQ(rows[i].n_stokes, reference[i].n_stokes);
  }
}

TEST(Optimize, SiliconGlobalMaximum) {
  const GlobalOptimum best = optimize_global(silicon_preset(), {0.99, 1.01}, {5e3, 1.2e4});
  EXPECT_NEAR(best.q_star, 1.0, 1e-3);
  EXPECT_NEAR(best.tau_star, 8.89e3, 0.01 * 8.89e3);
  EXPECT_NEAR(best.s_db, 28.0, 0.5);
  EXPECT_GE(best.s_db, best.coarse_s_db);
  EXPECT_NEAR(best.phi, std::numbers::pi / 2, 1e-3);

  // the peak is broad in length: within 1 dB over a 5% window
  const BogoliubovBasis b = bogoliubov_basis(silicon_preset(best.q_star));
  for (const double f : {0.975, 0.9875, 1.0125, 1.025}) {
    EXPECT_GT(observe(b, f * best.tau_star, std::nullopt).s_db, best.s_db - 1.0);
  }
}

TEST(Optimize, FlatWithoutPump) {
  OptimizeOptions coarse;
  coarse.q_points = 21;
  coarse.tau_points = 11;
  const GlobalOptimum best = optimize_global({12.4, 0.0, 1.0}, {0.9, 1.1}, {0.0, 1e4}, coarse);
  EXPECT_NEAR(best.s_db, 0.0, 1e-12);
}

TEST(Optimize, RefinementNeverLosesGround) {
  for (int i = 0; i < 5; ++i) {
    OptimizeOptions coarse;
    coarse.q_points = 11;
    coarse.tau_points = 15;
    const ModelParams p{12.4, testing::log_uniform(1e-3, 1e-1), 1.0};
    const GlobalOptimum best = optimize_global(p, {0.9, 1.1}, {10.0, 5e3}, coarse);
    EXPECT_GE(best.s_db, best.coarse_s_db);
  }
}

TEST(Optimize, RejectsBadRanges) {
  EXPECT_EQ(kind_of([] { optimize_global(silicon_preset(), {1.1, 0.9}, {0.0, 1.0}); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { optimize_global(silicon_preset(), {0.9, 1.1}, {-1.0, 1.0}); }), ErrorKind::InvalidParameters);
}

}  // namespace
}  // namespace ramaniton
