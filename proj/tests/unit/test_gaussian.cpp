#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "sg2d/chaos.hpp"
#include "sg2d/cutoff.hpp"
#include "sg2d/gaussian.hpp"
#include "sg2d/green.hpp"
#include "sg2d/stats.hpp"

using namespace sg2d;

namespace {

// Free oscillator x'' + x' + lambda x = 0 by classical RK4 with a tiny step.
std::array<double, 2> oscillator_rk4(double lambda, double x, double y, double t) {
  const int steps = 20000;
  const double dt = t / steps;
  auto f = [&](double a, double b) { return std::array<double, 2>{b, -b - lambda * a}; };
  for (int k = 0; k < steps; ++k) {
    const auto k1 = f(x, y);
    const auto k2 = f(x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1]);
    const auto k3 = f(x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1]);
    const auto k4 = f(x + dt * k3[0], y + dt * k3[1]);
    x += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    y += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
  }
  return {x, y};
}

// int_0^h of the impulse response outer product, Simpson rule.
std::array<double, 3> noise_covariance_quadrature(double lambda, double h) {
  const double w = std::sqrt(lambda - 0.25);
  auto d = [&](double s) { return std::exp(-0.5 * s) * std::sin(w * s) / w; };
  auto dp = [&](double s) {
    return std::exp(-0.5 * s) * (std::cos(w * s) - 0.5 * std::sin(w * s) / w);
  };
  const int n = 20000;
  std::array<double, 3> q{};
  for (int k = 0; k <= n; ++k) {
    const double s = h * k / n;
    const double wt = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    q[0] += wt * 2 * d(s) * d(s);
    q[1] += wt * 2 * d(s) * dp(s);
    q[2] += wt * 2 * dp(s) * dp(s);
  }
  for (auto& x : q) x *= h / (3.0 * n);
  return q;
}

}  // namespace

TEST(LinearTables, RejectsNonPositiveStep) {
  const auto g = GridSpec::make(4, 1.0, 16);
  EXPECT_THROW(build_linear_tables(g, 0.0, LinearModel::hyperbolic), std::invalid_argument);
  EXPECT_THROW(build_linear_tables(g, -1.0, LinearModel::parabolic), std::invalid_argument);
}

TEST(LinearTables, SmallStepLimit) {
  const auto g = GridSpec::make(4, 1.0, 16);
  const auto t = build_linear_tables(g, 1e-12, LinearModel::hyperbolic);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(t.a11[i], 1.0, 1e-10);
    EXPECT_NEAR(t.a12[i], 0.0, 1e-10);
    EXPECT_NEAR(t.a21[i], 0.0, 1e-9);
    EXPECT_NEAR(t.a22[i], 1.0, 1e-10);
    EXPECT_NEAR(t.q11[i], 0.0, 1e-12);
    EXPECT_NEAR(t.q22[i], 0.0, 1e-10);
  }
}

TEST(LinearTables, PropagatorMatchesOscillator) {
  const auto g = GridSpec::make(8, 1.0, 32);
  const double h = 0.37;
  const auto t = build_linear_tables(g, h, LinearModel::hyperbolic);
  for (auto [n1, n2] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{3, 4}, std::pair{-7, 5}}) {
    const std::size_t idx = g.index_of_mode(n1, n2);
    const double lambda = 1.0 + n1 * n1 + n2 * n2;
    const auto ref = oscillator_rk4(lambda, 0.8, -0.3, h);
    EXPECT_NEAR(t.a11[idx] * 0.8 + t.a12[idx] * -0.3, ref[0], 1e-10);
    EXPECT_NEAR(t.a21[idx] * 0.8 + t.a22[idx] * -0.3, ref[1], 1e-10);
  }
}

TEST(LinearTables, NoiseCovarianceMatchesQuadrature) {
  const auto g = GridSpec::make(8, 1.0, 32);
  for (double h : {0.01, 0.3, 2.0}) {
    const auto t = build_linear_tables(g, h, LinearModel::hyperbolic);
    for (auto [n1, n2] : {std::pair{0, 0}, std::pair{2, 1}, std::pair{6, -9}}) {
      const std::size_t idx = g.index_of_mode(n1, n2);
      const auto q = noise_covariance_quadrature(1.0 + n1 * n1 + n2 * n2, h);
      EXPECT_NEAR(t.q11[idx], q[0], 1e-11);
      EXPECT_NEAR(t.q12[idx], q[1], 1e-11);
      EXPECT_NEAR(t.q22[idx], q[2], 1e-11);
      EXPECT_GE(t.q11[idx] * t.q22[idx] - t.q12[idx] * t.q12[idx], -1e-15);
    }
  }
}

TEST(LinearTables, LyapunovFixedPoint) {
  const auto g = GridSpec::make(8, 1.0, 32);
  const auto t = build_linear_tables(g, 0.45, LinearModel::hyperbolic);
  for (std::size_t i = 0; i < g.size(); ++i) {
    // iterate V <- A V A^T + Q from zero
    double v11 = 0, v12 = 0, v22 = 0;
    for (int k = 0; k < 400; ++k) {
      const double a = t.a11[i], b = t.a12[i], c = t.a21[i], d = t.a22[i];
      const double n11 = a * a * v11 + 2 * a * b * v12 + b * b * v22 + t.q11[i];
      const double n12 = a * c * v11 + (a * d + b * c) * v12 + b * d * v22 + t.q12[i];
      const double n22 = c * c * v11 + 2 * c * d * v12 + d * d * v22 + t.q22[i];
      v11 = n11, v12 = n12, v22 = n22;
    }
    const double lambda = 1.0 + g.mode_norm_sq(i);
    EXPECT_NEAR(v11, 1.0 / lambda, 1e-12);
    EXPECT_NEAR(v12, 0.0, 1e-12);
    EXPECT_NEAR(v22, 1.0, 1e-12);
  }
}

TEST(LinearTables, ParabolicStationaryVariance) {
  const auto g = GridSpec::make(8, 1.0, 32);
  const auto t = build_linear_tables(g, 0.2, LinearModel::parabolic);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double lambda = 1.0 + g.mode_norm_sq(i);
    const double a = t.a11[i];
    EXPECT_NEAR(t.q11[i] / (1.0 - a * a), 1.0 / lambda, 1e-13);
  }
}

TEST(LinearTables, DuhamelWeights) {
  // int_0^h D(s) ds and D(h) against the propagator: du = int a12, dv = a12(h)
  const auto g = GridSpec::make(4, 1.0, 16);
  const double h = 0.5;
  const auto t = build_linear_tables(g, h, LinearModel::hyperbolic);
  const int n = 4000;
  for (std::size_t idx : {std::size_t{0}, g.index_of_mode(2, 3)}) {
    double integral = 0;
    for (int k = 0; k <= n; ++k) {
      const double s = h * k / n;
      const double wt = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      integral += wt * build_linear_tables(g, s > 0 ? s : 1e-300, LinearModel::hyperbolic).a12[idx];
    }
    integral *= h / (3.0 * n);
    EXPECT_NEAR(t.duhamel_u[idx], integral, 1e-10);
    EXPECT_EQ(t.duhamel_v[idx], t.a12[idx]);
  }
}

TEST(LinearTables, StepComposition) {
  // A(2h) = A(h)^2 and Q(2h) = A(h) Q(h) A(h)^T + Q(h)
  const auto g = GridSpec::make(4, 1.0, 16);
  const auto t1 = build_linear_tables(g, 0.3, LinearModel::hyperbolic);
  const auto t2 = build_linear_tables(g, 0.6, LinearModel::hyperbolic);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = t1.a11[i], b = t1.a12[i], c = t1.a21[i], d = t1.a22[i];
    EXPECT_NEAR(t2.a11[i], a * a + b * c, 1e-13);
    EXPECT_NEAR(t2.a12[i], a * b + b * d, 1e-13);
    EXPECT_NEAR(t2.a22[i], c * b + d * d, 1e-12);
    const double q11 = a * a * t1.q11[i] + 2 * a * b * t1.q12[i] + b * b * t1.q22[i] + t1.q11[i];
    EXPECT_NEAR(t2.q11[i], q11, 1e-13);
  }
}

TEST(Sampling, MuSecondMoments) {
  const auto g = GridSpec::make(4, 1.0, 16);
  const std::vector<std::pair<int, int>> modes{{0, 0}, {1, 0}, {2, -3}, {5, 5}};
  for (double s : {0.0, 1.0}) {
    std::vector<RunningMoments> m(modes.size());
    for (std::size_t r = 0; r < 10000; ++r) {
      RngStream rng(21, r);
      const auto f = sample_mu(g, s, rng);
      EXPECT_EQ(f.hermitian_defect(), 0.0);
      for (std::size_t k = 0; k < modes.size(); ++k) m[k].add(std::norm(f.mode(modes[k].first, modes[k].second)));
    }
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const double nsq = modes[k].first * modes[k].first + modes[k].second * modes[k].second;
      const double expected = std::pow(1.0 + nsq, -s);
      EXPECT_LT(std::abs(m[k].mean() - expected), 3.0 * m[k].std_error()) << k;
    }
  }
}

TEST(Sampling, NyquistLinesStayZero) {
  const auto g = GridSpec::make(4, 1.0, 16);
  RngStream rng(1);
  const auto f = sample_mu(g, 1.0, rng);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.touches_nyquist(i)) EXPECT_EQ(f[i], Complex(0.0));
  }
}

TEST(Sampling, ProjectedSampleMatchesProjectedLaw) {
  const auto g = GridSpec::make(8, 1.0, 32);
  RngStream rng(2);
  const auto f = sample_mu_projected(g, 1.0, 8, rng);
  EXPECT_EQ(f.hermitian_defect(), 0.0);
  const auto chi = cutoff_symbol(g, 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (chi[i] == 0.0) EXPECT_EQ(f[i], Complex(0.0));
  }
  // grid variance equals sigma_N
  RunningMoments m;
  for (std::size_t r = 0; r < 4000; ++r) {
    RngStream rr(3, r);
    const auto v = inverse_transform(sample_mu_projected(g, 1.0, 8, rr));
    m.add(v[0] * v[0]);
  }
  EXPECT_LT(std::abs(m.mean() - compute_sigma_N(8)), 3.0 * m.std_error());
}

TEST(Sampling, PairIsIndependentWithRightVariances) {
  const auto g = GridSpec::make(4, 1.0, 16);
  RunningMoments uu, vv, re_cross, im_cross;
  const std::size_t idx = g.index_of_mode(1, 2);
  for (std::size_t r = 0; r < 10000; ++r) {
    RngStream rng(4, r);
    const auto s = sample_pair_mu1(g, rng);
    uu.add(std::norm(s.u[idx]));
    vv.add(std::norm(s.v[idx]));
    const Complex c = s.u[idx] * std::conj(s.v[idx]);
    re_cross.add(c.real());
    im_cross.add(c.imag());
  }
  EXPECT_LT(std::abs(uu.mean() - 1.0 / 6.0), 3 * uu.std_error());
  EXPECT_LT(std::abs(vv.mean() - 1.0), 3 * vv.std_error());
  EXPECT_LT(std::abs(re_cross.mean()), 3 * re_cross.std_error());
  EXPECT_LT(std::abs(im_cross.mean()), 3 * im_cross.std_error());
}

TEST(Evolve, DeterministicReplay) {
  const auto g = GridSpec::make(4, 1.0, 16);
  const auto t = build_linear_tables(g, 0.1, LinearModel::hyperbolic);
  auto run = [&] {
    RngStream rng(99, 7);
    PhaseState s = sample_pair_mu1(g, rng);
    for (int k = 0; k < 10; ++k) s = evolve_linear(std::move(s), t, rng);
    return s;
  };
  const auto a = run(), b = run();
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(a.u[i], b.u[i]);
    EXPECT_EQ(a.v[i], b.v[i]);
  }
  EXPECT_NEAR(a.t, 1.0, 1e-14);
}

TEST(Evolve, ZeroNoiseMatchesOscillator) {
  const auto g = GridSpec::make(4, 1.0, 16);
  const auto t = build_linear_tables(g, 0.25, LinearModel::hyperbolic);
  PhaseState s = zero_phase_state(g);
  s.u.set_real_mode(2, 1, 0.6);
  s.v.set_real_mode(2, 1, -1.1);
  for (int k = 0; k < 8; ++k) s = evolve_linear(std::move(s), t, zero_phase_state(g));
  const auto ref = oscillator_rk4(6.0, 0.6, -1.1, 2.0);
  EXPECT_NEAR(s.u.mode(2, 1).real(), ref[0], 1e-10);
  EXPECT_NEAR(s.v.mode(2, 1).real(), ref[1], 1e-10);
}

TEST(Evolve, StationarityOverManySteps) {
  const auto g = GridSpec::make(4, 1.0, 16);
  const auto t = build_linear_tables(g, 0.25, LinearModel::hyperbolic);
  const std::size_t idx = g.index_of_mode(1, 1);
  RunningMoments uu, vv, u0;
  for (std::size_t r = 0; r < 10000; ++r) {
    RngStream rng(8, r);
    PhaseState s = sample_pair_mu1(g, rng);
    for (int k = 0; k < 20; ++k) s = evolve_linear(std::move(s), t, rng);
    uu.add(std::norm(s.u[idx]));
    vv.add(std::norm(s.v[idx]));
    u0.add(s.u[0].real() * s.u[0].real());
  }
  EXPECT_LT(std::abs(uu.mean() - 1.0 / 3.0), 3 * uu.std_error());
  EXPECT_LT(std::abs(vv.mean() - 1.0), 3 * vv.std_error());
  EXPECT_LT(std::abs(u0.mean() - 1.0), 3 * u0.std_error());
}

TEST(Evolve, ComposedNoiseEqualsCoarseStep) {
  // Four fine steps with their noise equal one coarse step with the composed noise.
  const auto g = GridSpec::make(4, 1.0, 16);
  const auto fine = build_linear_tables(g, 0.05, LinearModel::hyperbolic);
  const auto coarse = build_linear_tables(g, 0.2, LinearModel::hyperbolic);
  RngStream rng(10);
  PhaseState start = sample_pair_mu1(g, rng);
  PhaseState a = start;
  PhaseState acc = zero_phase_state(g);
  for (int k = 0; k < 4; ++k) {
    const auto xi = draw_linear_noise(fine, rng);
    a = evolve_linear(std::move(a), fine, xi);
    accumulate_noise(acc, fine, xi);
  }
  const PhaseState b = evolve_linear(start, coarse, acc);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_LT(std::abs(a.u[i] - b.u[i]), 1e-13);
    EXPECT_LT(std::abs(a.v[i] - b.v[i]), 1e-13);
  }
}

TEST(Covariance, MatchesTruncatedGreen) {
  const auto g = GridSpec::make(8, 1.0, 32);
  const std::vector<GridOffset> offsets{{0, 0}, {1, 0}, {2, 3}, {8, 0}};
  const auto rows = estimate_covariance(g, offsets, 4000, 0.7, 123);
  for (const auto& row : rows) {
    const double exact = truncated_green(row.offset.k1 * g.spacing(), row.offset.k2 * g.spacing(), 8);
    EXPECT_LT(std::abs(row.value.value - exact), 3 * row.value.std_error) << row.r;
  }
  EXPECT_THROW(estimate_covariance(g, offsets, 50, 0.0, 1), std::invalid_argument);
}
