#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "sg2d/gibbs.hpp"
#include "sg2d/io.hpp"
#include "sg2d/observables.hpp"

using namespace sg2d;
constexpr double kPi = std::numbers::pi;

namespace {

// Zero-mode target: coefficient a ~ N(0,1) tilted by A cos(beta a / 2pi).
struct ZeroModeOracle {
  double amplitude, beta;
  std::vector<double> grid, cdf;
  double log_z = 0.0;

  ZeroModeOracle(double beta_sq, double gamma1) : amplitude(gamma1 * 4 * kPi * kPi / std::sqrt(beta_sq)), beta(std::sqrt(beta_sq)) {
    const int n = 200000;
    const double lo = -12, hi = 12, dx = (hi - lo) / n;
    double shift = amplitude;
    std::vector<double> w(n + 1);
    for (int k = 0; k <= n; ++k) {
      const double a = lo + k * dx;
      grid.push_back(a);
      w[k] = std::exp(-0.5 * a * a + amplitude * std::cos(beta * a / (2 * kPi)) - shift);
    }
    cdf.assign(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) cdf[k] = cdf[k - 1] + 0.5 * dx * (w[k] + w[k - 1]);
    const double total = cdf.back();
    for (auto& c : cdf) c /= total;
    log_z = std::log(total / std::sqrt(2 * kPi)) + shift;
  }

  double operator()(double a) const {
    if (a <= grid.front()) return 0.0;
    if (a >= grid.back()) return 1.0;
    const double pos = (a - grid.front()) / (grid[1] - grid[0]);
    const auto k = static_cast<std::size_t>(pos);
    const double f = pos - k;
    return cdf[k] * (1 - f) + cdf[k + 1] * f;
  }
};

}  // namespace

TEST(Density, Examples) {
  const auto g = GridSpec::make(8, kPi, 32);
  const auto target = GibbsTarget::make(g);
  const double top = target.constants.gamma_N * 4 * kPi * kPi / std::sqrt(kPi);
  EXPECT_NEAR(target.density(FourierField(g)), top, 1e-12 * top);
  const double c = 0.7;
  const auto constant = forward_transform(std::vector<double>(g.size(), c), g);
  EXPECT_NEAR(target.density(constant), top * std::cos(std::sqrt(kPi) * c), 1e-12 * top);
  EXPECT_NEAR(compute_RN(constant, target.constants), target.density(constant), 1e-12 * top);
  RngStream rng(3);
  for (int k = 0; k < 20; ++k) EXPECT_LE(std::abs(target.density(sample_mu(g, 1.0, rng))), top);
}

TEST(Density, CouplingOffIsZero) {
  auto g = GridSpec::make(8, kPi, 32);
  g.coupling = 0.0;
  RngStream rng(3);
  EXPECT_EQ(GibbsTarget::make(g).density(sample_mu(g, 1.0, rng)), 0.0);
}

TEST(Pcn, FlatDensityAcceptsEverything) {
  auto g = GridSpec::make(4, kPi, 16);
  g.coupling = 0.0;
  const auto target = GibbsTarget::make(g);
  RngStream rng(1);
  ChainState chain = start_chain(target, sample_mu(g, 1.0, rng), 0.5);
  for (int k = 0; k < 200; ++k) chain = pcn_step(std::move(chain), target, rng);
  EXPECT_EQ(chain.accepted, 200u);
}

TEST(Pcn, TinyScaleAcceptsAlmostAlways) {
  const auto target = GibbsTarget::make(GridSpec::make(4, kPi, 16));
  RngStream rng(1);
  ChainState chain = start_chain(target, sample_mu(target.grid, 1.0, rng), 1e-6);
  for (int k = 0; k < 200; ++k) chain = pcn_step(std::move(chain), target, rng);
  EXPECT_GE(chain.acceptance_rate(), 0.99);
  EXPECT_NEAR(chain.rn, target.density(chain.u), 1e-10 * std::abs(chain.rn));
}

TEST(Pcn, RejectsBadScale) {
  const auto target = GibbsTarget::make(GridSpec::make(4, kPi, 16));
  EXPECT_THROW(start_chain(target, FourierField(target.grid), 1.0), std::invalid_argument);
  EXPECT_THROW(start_chain(target, FourierField(target.grid), 0.0), std::invalid_argument);
}

TEST(Pcn, ZeroModeMatchesQuadrature) {
  const auto g = GridSpec::make(1, kPi, 4);
  const auto target = GibbsTarget::make(g);
  const ZeroModeOracle oracle(kPi, target.constants.gamma_N);
  RngStream rng(2024);
  GibbsRunOptions opt;
  opt.samples = 20000;
  opt.burn_in = 2000;
  opt.thin = 10;
  const auto out = sample_gibbs(target, opt, rng);
  std::vector<double> a;
  for (const auto& u : out.samples) a.push_back(u[0].real());
  EXPECT_LE(ks_distance(a, oracle), 0.03);
  EXPECT_TRUE(out.warnings.empty());
}

TEST(Gibbs, TwoChainsAgree) {
  const auto g = GridSpec::make(4, kPi, 16);
  const auto target = GibbsTarget::make(g);
  const ObservableSet obs(g, false);
  std::vector<std::vector<double>> chains;
  for (std::uint64_t c = 0; c < 2; ++c) {
    RngStream rng(77, c);
    GibbsRunOptions opt;
    opt.samples = 2000;
    opt.burn_in = 500;
    opt.thin = 5;
    const auto out = sample_gibbs(target, opt, rng);
    chains.emplace_back();
    for (const auto& u : out.samples) chains.back().push_back(obs.evaluate(u)[0]);
  }
  EXPECT_LT(gelman_rubin(chains), 1.1);
}

TEST(Gibbs, CouplingOffSamplesMu1) {
  auto g = GridSpec::make(4, kPi, 16);
  g.coupling = 0.0;
  const auto target = GibbsTarget::make(g);
  RunningMoments m;
  for (std::size_t c = 0; c < 5000; ++c) {
    RngStream rng(5, c);
    GibbsRunOptions opt;
    opt.samples = 1;
    opt.burn_in = 20;
    m.add(std::norm(sample_gibbs(target, opt, rng).samples[0].mode(1, 0)));
  }
  EXPECT_LT(std::abs(m.mean() - 0.5), 3 * m.std_error());
}

TEST(Gibbs, TiltRaisesMeanDensity) {
  const auto g = GridSpec::make(4, kPi, 16);
  const auto target = GibbsTarget::make(g);
  RunningMoments tilted, reference;
  for (std::size_t c = 0; c < 200; ++c) {
    RngStream rng(6, c);
    tilted.add(equilibrate_chain(target, 300, 0.2, rng).rn);
    reference.add(target.density(sample_mu(g, 1.0, rng)));
  }
  EXPECT_GT(tilted.mean() - reference.mean(),
            3 * std::hypot(tilted.std_error(), reference.std_error()));
}

TEST(LogZ, CouplingOffIsZero) {
  auto g = GridSpec::make(4, kPi, 16);
  g.coupling = 0.0;
  const auto r = estimate_logZ_mc(GibbsTarget::make(g), 1000, 1);
  EXPECT_EQ(r.log_z.value, 0.0);
  EXPECT_THROW(estimate_logZ_mc(GibbsTarget::make(g), 999, 1), std::invalid_argument);
}

TEST(LogZ, ZeroModeMatchesQuadrature) {
  const auto target = GibbsTarget::make(GridSpec::make(1, kPi, 4));
  const ZeroModeOracle oracle(kPi, target.constants.gamma_N);
  const auto r = estimate_logZ_mc(target, 20000, 9);
  EXPECT_LT(std::abs(r.log_z.value - oracle.log_z), 3 * r.log_z.std_error);
  ASSERT_EQ(r.moments.size(), 3u);
  EXPECT_NEAR(r.moments[0].log_norm.value, r.log_z.value, 1e-12);
  EXPECT_TRUE(std::isfinite(r.min_rn) && std::isfinite(r.max_rn));
}

TEST(LogZ, SerialAndParallelAgreeBitwise) {
  const auto target = GibbsTarget::make(GridSpec::make(8, kPi, 32));
  const auto a = estimate_logZ_mc(target, 2000, 4, {}, Execution::serial);
  const auto b = estimate_logZ_mc(target, 2000, 4, {}, Execution::parallel);
  EXPECT_EQ(a.log_z.value, b.log_z.value);
  EXPECT_EQ(a.log_z.std_error, b.log_z.std_error);
}

TEST(Drift, CostAndBandLimit) {
  const auto g = GridSpec::make(8, kPi, 32);
  DriftControl eta(g, 1, 2);
  std::vector<double> theta(eta.parameter_count());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = 0.1 * (i + 1);
  eta.set_parameters(theta);
  EXPECT_EQ(eta.parameters(), theta);
  const double l2 = sobolev_norm(eta.slab(0), 0.0);
  EXPECT_NEAR(eta.cost(), 0.5 * l2 * l2, 1e-14);
  EXPECT_EQ(eta.slab(0).hermitian_defect(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.mode_norm_sq(i) > 4) EXPECT_EQ(eta.slab(0)[i], Complex(0.0));
  }
  EXPECT_THROW(DriftControl(g, 1, 9), std::invalid_argument);
  EXPECT_THROW(DriftControl(g, 0, 2), std::invalid_argument);
}

TEST(Drift, CauchySchwarzBound) {
  const auto g = GridSpec::make(8, kPi, 32);
  DriftControl eta(g, 3, 3);
  RngStream rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> theta(eta.parameter_count());
    for (auto& t : theta) t = rng.normal();
    eta.set_parameters(theta);
    const double h1 = sobolev_norm(eta.integrated(), 1.0);
    EXPECT_LE(h1 * h1, 2 * eta.cost() * (1 + 1e-12));
  }
}

TEST(Variational, ZeroDriftAndBound) {
  const auto target = GibbsTarget::make(GridSpec::make(4, kPi, 16));
  const DriftControl zero(target.grid, 2, 2);
  const auto w = variational_objective(zero, target, 4000, 17);
  RunningMoments m;
  for (std::size_t r = 0; r < 4000; ++r) {
    RngStream rng(17, r);
    m.add(-target.density_of_projected(sample_mu_projected(target.grid, 1.0, 4, rng)));
  }
  EXPECT_NEAR(w.value, m.mean(), 1e-12 * std::abs(m.mean()));
  const auto z = estimate_logZ_mc(target, 4000, 18);
  EXPECT_LE(-w.value, z.log_z.value + 3 * z.log_z.std_error);
  EXPECT_EQ(variational_difference(zero, zero, target, 100, 1).value, 0.0);
}

TEST(Variational, OptimizerTraceIsMonotone) {
  const auto target = GibbsTarget::make(GridSpec::make(4, kPi, 16));
  DriftControl init(target.grid, 2, 2);
  std::vector<double> theta(init.parameter_count(), 0.3);
  init.set_parameters(theta);
  DriftOptimizerOptions opt;
  opt.iterations = 15;
  opt.batch = 500;
  const auto result = optimize_drift(target, init, opt, 3);
  ASSERT_EQ(result.trace.size(), 15u);
  const double initial = variational_objective(init, target, 500, 3).value;
  EXPECT_LE(result.trace.front(), initial);
  for (std::size_t k = 1; k < result.trace.size(); ++k) EXPECT_LE(result.trace[k], result.trace[k - 1]);
  EXPECT_LE(result.max_y8_ratio, 1.0 + 1e-12);
}

TEST(Variational, CouplingOffOptimumIsZero) {
  auto g = GridSpec::make(4, kPi, 16);
  g.coupling = 0.0;
  const auto target = GibbsTarget::make(g);
  DriftOptimizerOptions opt;
  opt.iterations = 5;
  opt.batch = 200;
  const auto result = optimize_drift(target, DriftControl(g, 1, 2), opt, 1);
  EXPECT_EQ(result.trace.back(), 0.0);
  EXPECT_EQ(result.eta.cost(), 0.0);
}

TEST(Ensemble, BinaryRoundTrip) {
  const auto g = GridSpec::make(4, kPi, 16);
  std::vector<FourierField> fields;
  RngStream rng(1);
  for (int k = 0; k < 3; ++k) fields.push_back(sample_mu(g, 1.0, rng));
  const auto path = std::filesystem::temp_directory_path() / "sg2d_ensemble_test.bin";
  save_ensemble(path, fields, {{"seed", 1}});
  const auto back = load_ensemble(path, g);
  const auto snap = read_snapshot(path);
  EXPECT_EQ(snap.header.at("fields"), 3);
  EXPECT_EQ(snap.header.at("N"), 4);
  ASSERT_EQ(back.size(), 3u);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(back[k][i] - fields[k][i]), 1e-13);
  std::filesystem::remove(path);
}
