#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sg2d/chaos.hpp"
#include "sg2d/green.hpp"

using namespace sg2d;
constexpr double kPi = std::numbers::pi;

// Direct lattice sums in 30-digit arithmetic, computed once and frozen.
TEST(Sigma, FrozenOracleValues) {
  EXPECT_NEAR(compute_sigma_N(1), 0.0253302959105844428609698658024, 1e-15);
  EXPECT_NEAR(compute_sigma_N(1), 1.0 / (4 * kPi * kPi), 1e-15);
  EXPECT_NEAR(compute_sigma_N(2), 0.0911411245844391962762995379934, 1e-14);
  EXPECT_NEAR(compute_sigma_N(8), 0.277238976225689450715269611365, 1e-13);
  EXPECT_NEAR(compute_sigma_N(16), 0.385697851658080426050793557606, 1e-13);
}

TEST(Sigma, MonotoneAndLogarithmic) {
  double prev = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const double s = compute_sigma_N(n);
    EXPECT_GE(s, prev);
    prev = s;
  }
  EXPECT_NEAR(compute_sigma_N(128) - compute_sigma_N(64), std::log(2.0) / (2 * kPi), 2e-3);
  EXPECT_THROW(compute_sigma_N(0), std::invalid_argument);
}

TEST(Gamma, Basics) {
  EXPECT_EQ(compute_gamma_N(16, 0.0), 1.0);
  EXPECT_NEAR(compute_gamma_N(8, kPi), std::exp(0.5 * kPi * 0.277238976225689450715), 1e-13);
  EXPECT_THROW(compute_gamma_N(8, -1.0), std::invalid_argument);
  const auto c = RenormConstants::make(8, 2.0);
  EXPECT_EQ(c.gamma_N, std::exp(0.5 * 2.0 * c.sigma_N));
  // growth ~ N^{beta^2 / 4 pi}
  const double slope = (std::log(compute_gamma_N(256, kPi)) - std::log(compute_gamma_N(32, kPi))) /
                       std::log(8.0);
  EXPECT_NEAR(slope, 0.25, 0.025);
}

TEST(Chaos, ZeroFieldIsConstantGamma) {
  const auto g = GridSpec::make(8, kPi, 32);
  const auto c = RenormConstants::for_grid(g);
  const auto theta = make_chaos(FourierField(g), c);
  for (const auto& z : theta.values) EXPECT_EQ(z, Complex(c.gamma_N, 0.0));
}

TEST(Chaos, ModulusIsGamma) {
  const auto g = GridSpec::make(8, 2.0, 32);
  const auto c = RenormConstants::for_grid(g);
  RngStream rng(5);
  const auto theta = make_chaos(sample_mu_projected(g, 1.0, 8, rng), c);
  for (const auto& z : theta.values) EXPECT_NEAR(std::abs(z), c.gamma_N, 1e-14);
}

TEST(Chaos, RejectsUnprojectedField) {
  const auto g = GridSpec::make(8, 2.0, 32);
  RngStream rng(5);
  EXPECT_THROW(make_chaos(sample_mu(g, 1.0, rng), RenormConstants::for_grid(g)), std::invalid_argument);
}

TEST(Chaos, MeanOneAndTwoPointSmall) {
  const auto g = GridSpec::make(8, kPi, 32);
  const std::vector<double> betas{kPi, 2 * kPi};
  const std::vector<GridOffset> offsets{{1, 0}, {3, 2}};
  const auto rows = chaos_moments(g, betas, 3000, offsets, 31);
  for (const auto& row : rows) {
    EXPECT_LT(std::abs(row.mean_re.value - 1.0), 3 * row.mean_re.std_error);
    EXPECT_LT(std::abs(row.mean_im.value), 3 * row.mean_im.std_error);
    for (const auto& tp : row.two_point) {
      EXPECT_LT(std::abs(tp.re.value - tp.predicted), 3 * tp.re.std_error);
      EXPECT_NEAR(tp.green, truncated_green(tp.offset.k1 * g.spacing(), tp.offset.k2 * g.spacing(), 8), 1e-15);
    }
  }
}

TEST(Chaos, DegenerateBetaScan) {
  const std::vector<double> alphas{0.3};
  const std::vector<int> ns{4, 8};
  const auto scan = chaos_regularity_scan(0.0, alphas, ns, 10, 1);
  for (const auto& row : scan.rows) EXPECT_NEAR(row.mean_norm.value, 1.0, 1e-12);
  EXPECT_EQ(scan.points_per_axis, 32);
}
