#include "sg2d/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sg2d/cutoff.hpp"
#include "sg2d/green.hpp"

namespace sg2d {

double compute_sigma_N(int cutoff, CutoffBridge bridge) {
  if (cutoff < 1) throw std::invalid_argument("sigma_N requires N >= 1");
  const CutoffProfile chi(bridge);
  double sum = 0.0;
  for (int n1 = -cutoff; n1 <= cutoff; ++n1) {
    for (int n2 = -cutoff; n2 <= cutoff; ++n2) {
      const double nsq = static_cast<double>(n1 * n1 + n2 * n2);
      const double c = chi.at_mode(nsq, cutoff);
      sum += c * c / (1.0 + nsq);
    }
  }
  return sum / kTorusArea;
}

double compute_gamma_N(int cutoff, double beta_sq, CutoffBridge bridge) {
  if (!(beta_sq >= 0.0)) throw std::invalid_argument("gamma_N requires beta_sq >= 0");
  return std::exp(0.5 * beta_sq * compute_sigma_N(cutoff, bridge));
}

RenormConstants RenormConstants::make(int cutoff, double beta_sq, CutoffBridge bridge) {
  RenormConstants c;
  c.N = cutoff;
  c.beta_sq = beta_sq;
  c.sigma_N = compute_sigma_N(cutoff, bridge);
  c.gamma_N = std::exp(0.5 * beta_sq * c.sigma_N);
  return c;
}

ChaosField make_chaos(const FourierField& psi, const RenormConstants& constants, double time) {
  const GridSpec& grid = psi.grid();
  const auto chi = cutoff_symbol(grid, constants.N);
  double scale = 1.0;
  for (const auto& c : psi.coefficients()) scale = std::max(scale, std::abs(c));
  for (std::size_t i = 0; i < chi.size(); ++i) {
    if (chi[i] == 0.0 && std::abs(psi[i]) > 1e-13 * scale) {
      throw std::invalid_argument("make_chaos: psi is not band-limited to |n| < N");
    }
  }
  const auto values = inverse_transform(psi);
  ChaosField theta;
  theta.grid = grid;
  theta.constants = constants;
  theta.time = time;
  theta.values.resize(values.size());
  const double beta = constants.beta();
  for (std::size_t i = 0; i < values.size(); ++i) {
    theta.values[i] = constants.gamma_N * std::polar(1.0, beta * values[i]);
  }
  return theta;
}

FourierField chaos_spectrum(const ChaosField& theta) {
  return forward_transform_complex(theta.values, theta.grid);
}

namespace {

Complex translated_correlation(std::span<const Complex> f, const GridSpec& grid, GridOffset o) {
  const int m = grid.points_per_axis;
  Complex acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const int i2 = ((i + o.k1) % m + m) % m;
    for (int j = 0; j < m; ++j) {
      const int j2 = ((j + o.k2) % m + m) % m;
      acc += f[grid.index(i2, j2)] * std::conj(f[grid.index(i, j)]);
    }
  }
  return acc / static_cast<double>(grid.size());
}

}  // namespace

std::vector<ChaosMomentRow> chaos_moments(const GridSpec& grid, std::span<const double> beta_sqs,
                                          std::size_t samples,
                                          const std::vector<GridOffset>& offsets,
                                          std::uint64_t seed, Execution exec) {
  const std::size_t nb = beta_sqs.size();
  const std::size_t no = offsets.size();
  // Per sample: [beta][mean_re, mean_im, (re, im) per offset]
  const std::size_t stride = 2 + 2 * no;
  std::vector<std::vector<double>> per_sample(samples, std::vector<double>(nb * stride));
  std::vector<RenormConstants> constants;
  for (double b : beta_sqs) constants.push_back(RenormConstants::make(grid.cutoff, b, grid.bridge));

  for_each_replica(samples, exec, [&](std::size_t r) {
    RngStream rng(seed, r);
    const FourierField psi = sample_mu_projected(grid, 1.0, grid.cutoff, rng);
    const auto psi_values = inverse_transform(psi);
    std::vector<Complex> theta(psi_values.size());
    for (std::size_t b = 0; b < nb; ++b) {
      const double beta = constants[b].beta();
      Complex mean = 0.0;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] = constants[b].gamma_N * std::polar(1.0, beta * psi_values[i]);
        mean += theta[i];
      }
      mean /= static_cast<double>(theta.size());
      double* row = per_sample[r].data() + b * stride;
      row[0] = mean.real();
      row[1] = mean.imag();
      for (std::size_t o = 0; o < no; ++o) {
        const Complex c = translated_correlation(theta, grid, offsets[o]);
        row[2 + 2 * o] = c.real();
        row[3 + 2 * o] = c.imag();
      }
    }
  });

  auto column = [&](std::size_t b, std::size_t k) {
    std::vector<double> col(samples);
    for (std::size_t r = 0; r < samples; ++r) col[r] = per_sample[r][b * stride + k];
    return mean_estimate(col);
  };

  std::vector<ChaosMomentRow> out;
  for (std::size_t b = 0; b < nb; ++b) {
    ChaosMomentRow row;
    row.beta_sq = beta_sqs[b];
    row.N = grid.cutoff;
    row.mean_re = column(b, 0);
    row.mean_im = column(b, 1);
    for (std::size_t o = 0; o < no; ++o) {
      TwoPointRow tp;
      tp.offset = offsets[o];
      tp.r = grid.spacing() * std::hypot(offsets[o].k1, offsets[o].k2);
      tp.re = column(b, 2 + 2 * o);
      tp.im = column(b, 3 + 2 * o);
      tp.green = truncated_green(grid.spacing() * offsets[o].k1, grid.spacing() * offsets[o].k2,
                                 grid.cutoff, grid.bridge);
      tp.predicted = std::exp(beta_sqs[b] * tp.green);
      row.two_point.push_back(tp);
    }
    out.push_back(std::move(row));
  }
  return out;
}

RegularityScan chaos_regularity_scan(double beta_sq, std::span<const double> alphas,
                                     std::span<const int> cutoffs, std::size_t samples,
                                     std::uint64_t seed, Execution exec, CutoffBridge bridge,
                                     int points_per_axis) {
  for (double a : alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("chaos_regularity_scan requires alpha > 0");
  }
  if (cutoffs.empty()) throw std::invalid_argument("chaos_regularity_scan needs at least one N");
  const int max_n = *std::max_element(cutoffs.begin(), cutoffs.end());
  const int m = points_per_axis > 0 ? points_per_axis : 4 * max_n;

  RegularityScan scan;
  scan.beta_sq = beta_sq;
  scan.points_per_axis = m;
  std::vector<std::vector<Estimate>> by_alpha(alphas.size());

  for (std::size_t ni = 0; ni < cutoffs.size(); ++ni) {
    const GridSpec grid = GridSpec::make(cutoffs[ni], beta_sq, m, 1.0, bridge);
    const RenormConstants constants = RenormConstants::for_grid(grid);
    std::vector<std::vector<double>> norms(alphas.size(), std::vector<double>(samples));
    std::vector<std::vector<double>> symbols;
    for (double a : alphas) {
      std::vector<double> s(grid.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::pow(1.0 + grid.mode_norm_sq(i), -0.5 * a);
      symbols.push_back(std::move(s));
    }
    for_each_replica(samples, exec, [&](std::size_t r) {
      RngStream rng(seed + static_cast<std::uint64_t>(ni), r);
      const FourierField psi = sample_mu_projected(grid, 1.0, grid.cutoff, rng);
      const FourierField spectrum = chaos_spectrum(make_chaos(psi, constants));
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        const auto smoothed = inverse_transform_complex(apply_symbol(spectrum, symbols[a]));
        double sup = 0.0;
        for (const auto& v : smoothed) sup = std::max(sup, std::abs(v));
        norms[a][r] = sup;
      }
    });
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const Estimate e = mean_estimate(norms[a]);
      scan.rows.push_back({alphas[a], cutoffs[ni], e});
      by_alpha[a].push_back(e);
    }
  }

  std::vector<double> log_n;
  for (int n : cutoffs) log_n.push_back(std::log(static_cast<double>(n)));
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    std::vector<double> y, se;
    for (const auto& e : by_alpha[a]) {
      y.push_back(e.value);
      se.push_back(std::max(e.std_error, 1e-300));
    }
    RegularityTrend trend;
    trend.alpha = alphas[a];
    if (cutoffs.size() >= 2) trend.fit = weighted_linear_fit(log_n, y, se);
    scan.trends.push_back(trend);
  }
  return scan;
}

}  // namespace sg2d
