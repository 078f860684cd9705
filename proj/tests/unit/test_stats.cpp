#include <gtest/gtest.h>

#include <cmath>

#include "sg2d/parallel.hpp"
#include "sg2d/rng.hpp"
#include "sg2d/stats.hpp"

using namespace sg2d;

TEST(Stats, CompensatedSumRecoversSmallTerms) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}

TEST(Stats, MeanEstimate) {
  const std::vector<double> x{1, 2, 3, 4};
  const auto e = mean_estimate(x);
  EXPECT_DOUBLE_EQ(e.value, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

TEST(Stats, WeightedFitExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7}, se{1, 1, 1, 1};
  const auto f = weighted_linear_fit(x, y, se);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_se, 1.0 / std::sqrt(5.0), 1e-14);
}

TEST(Stats, KsDistanceUniform) {
  std::vector<double> x;
  for (int i = 0; i < 10; ++i) x.push_back((i + 0.5) / 10.0);
  EXPECT_NEAR(ks_distance(x, [](double t) { return std::clamp(t, 0.0, 1.0); }), 0.05, 1e-14);
}

TEST(Stats, LogMeanExpStable) {
  const std::vector<double> x{1000.0, 1000.0};
  EXPECT_NEAR(log_mean_exp(x).value, 1000.0, 1e-12);
  const std::vector<double> y{0.0, std::log(3.0)};
  EXPECT_NEAR(log_mean_exp(y).value, std::log(2.0), 1e-14);
}

TEST(Stats, GelmanRubinIdenticalChains) {
  std::vector<std::vector<double>> chains(2);
  RngStream a(1), b(2);
  for (int i = 0; i < 5000; ++i) {
    chains[0].push_back(a.normal());
    chains[1].push_back(b.normal());
  }
  EXPECT_LT(gelman_rubin(chains), 1.01);
}

TEST(Rng, StreamsReplayAndDiffer) {
  RngStream a(5, 1), b(5, 1), c(5, 2);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_NE(x, c.normal());
  }
  EXPECT_EQ(a.draws(), 10u);
}

TEST(Parallel, ExceptionsPropagate) {
  EXPECT_THROW(for_each_replica(8, Execution::parallel,
                                [](std::size_t r) {
                                  if (r == 5) throw std::runtime_error("x");
                                }),
               std::runtime_error);
}
