#include "sg2d/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sg2d/cutoff.hpp"
#include "sg2d/gaussian.hpp"

namespace sg2d {

GibbsTarget GibbsTarget::make(const GridSpec& grid) {
  grid.validate();
  GibbsTarget t;
  t.grid = grid;
  t.constants = RenormConstants::for_grid(grid);
  t.projector = cutoff_symbol(grid, grid.cutoff);
  return t;
}

double GibbsTarget::density_of_projected(const FourierField& pn_u) const {
  if (grid.coupling == 0.0) return 0.0;
  if (grid.beta_sq == 0.0) throw std::invalid_argument("R_N is undefined for beta_sq = 0");
  const double beta = grid.beta();
  const auto values = inverse_transform(pn_u);
  CompensatedSum sum;
  for (double x : values) sum.add(std::cos(beta * x));
  return grid.coupling * constants.gamma_N / beta * grid.cell_area() * sum.value();
}

double GibbsTarget::density(const FourierField& u) const {
  return density_of_projected(apply_symbol(u, projector));
}

double compute_RN(const FourierField& u, const RenormConstants& constants, double coupling) {
  GridSpec grid = u.grid();
  grid.cutoff = constants.N;
  grid.beta_sq = constants.beta_sq;
  grid.coupling = coupling;
  GibbsTarget target;
  target.grid = grid;
  target.constants = constants;
  target.projector = cutoff_symbol(grid, constants.N);
  return target.density(u);
}

ChainState start_chain(const GibbsTarget& target, FourierField u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("pCN scale s must lie in (0, 1)");
  ChainState chain;
  chain.rn = target.density(u);
  chain.u = std::move(u);
  chain.s = s;
  return chain;
}

ChainState pcn_step(ChainState chain, const GibbsTarget& target, RngStream& rng) {
  const double keep = std::sqrt(1.0 - chain.s * chain.s);
  FourierField proposal = sample_mu(target.grid, 1.0, rng);
  proposal *= chain.s;
  auto p = proposal.coefficients();
  const auto u = chain.u.coefficients();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += keep * u[i];
  const double rn = target.density(proposal);
  const double log_uniform = std::log(rng.uniform());
  ++chain.proposed;
  if (log_uniform < rn - chain.rn) {
    chain.u = std::move(proposal);
    chain.rn = rn;
    ++chain.accepted;
  }
  return chain;
}

ChainState equilibrate_chain(const GibbsTarget& target, std::size_t burn_in, double initial_s,
                             RngStream& rng, double target_acceptance, std::size_t adapt_window) {
  ChainState chain = start_chain(target, sample_mu(target.grid, 1.0, rng), initial_s);
  std::size_t window_accepted = 0;
  std::size_t window_count = 0;
  for (std::size_t k = 0; k < burn_in; ++k) {
    const std::size_t before = chain.accepted;
    chain = pcn_step(std::move(chain), target, rng);
    window_accepted += chain.accepted - before;
    if (++window_count == adapt_window) {
      const double rate = static_cast<double>(window_accepted) / static_cast<double>(window_count);
      chain.s = std::clamp(chain.s * std::exp(rate - target_acceptance), 1e-3, 0.999);
      window_accepted = 0;
      window_count = 0;
    }
  }
  return chain;
}

GibbsSamples sample_gibbs(const GibbsTarget& target, const GibbsRunOptions& options, RngStream& rng) {
  if (options.burn_in < 1 || options.thin < 1) {
    throw std::invalid_argument("sample_gibbs requires burn_in >= 1 and thin >= 1");
  }
  ChainState chain = equilibrate_chain(target, options.burn_in, options.initial_s, rng,
                                       options.target_acceptance, options.adapt_window);
  chain.accepted = 0;
  chain.proposed = 0;
  GibbsSamples out;
  out.samples.reserve(options.samples);
  for (std::size_t i = 0; i < options.samples; ++i) {
    for (std::size_t k = 0; k < options.thin; ++k) chain = pcn_step(std::move(chain), target, rng);
    out.samples.push_back(chain.u);
  }
  out.acceptance = chain.acceptance_rate();
  out.final_s = chain.s;
  if (options.samples > 0 && (out.acceptance < 0.1 || out.acceptance > 0.9)) {
    out.warnings.push_back("pCN acceptance " + std::to_string(out.acceptance) +
                           " outside [0.1, 0.9] after adaptation");
  }
  return out;
}

LogZReport estimate_logZ_mc(const GibbsTarget& target, std::size_t samples, std::uint64_t seed,
                            std::span<const double> ps, Execution exec) {
  if (samples < 1000) throw std::invalid_argument("estimate_logZ_mc needs >= 1000 samples");
  std::vector<double> rn(samples);
  for_each_replica(samples, exec, [&](std::size_t r) {
    RngStream rng(seed, r);
    rn[r] = target.density_of_projected(sample_mu_projected(target.grid, 1.0, target.grid.cutoff, rng));
  });
  LogZReport report;
  report.N = target.grid.cutoff;
  report.beta_sq = target.grid.beta_sq;
  report.samples = samples;
  report.log_z = log_mean_exp(rn);
  report.min_rn = *std::min_element(rn.begin(), rn.end());
  report.max_rn = *std::max_element(rn.begin(), rn.end());
  const std::vector<double> default_ps{1.0, 2.0, 4.0};
  const std::span<const double> orders = ps.empty() ? std::span<const double>(default_ps) : ps;
  for (double p : orders) {
    std::vector<double> scaled(rn.size());
    for (std::size_t i = 0; i < rn.size(); ++i) scaled[i] = p * rn[i];
    const Estimate e = log_mean_exp(scaled);
    report.moments.push_back({p, {e.value / p, e.std_error / p}});
  }
  return report;
}

DriftControl::DriftControl(const GridSpec& grid, int slabs, int drift_cutoff)
    : grid_(grid), drift_cutoff_(drift_cutoff) {
  if (slabs < 1) throw std::invalid_argument("drift needs at least one slab");
  if (drift_cutoff < 0 || drift_cutoff > grid.cutoff) {
    throw std::invalid_argument("drift band limit must satisfy 0 <= N_drift <= N");
  }
  eta_.assign(static_cast<std::size_t>(slabs), FourierField(grid));
  for (int n1 = 0; n1 <= drift_cutoff; ++n1) {
    for (int n2 = (n1 == 0 ? 0 : -drift_cutoff); n2 <= drift_cutoff; ++n2) {
      if (n1 * n1 + n2 * n2 > drift_cutoff * drift_cutoff) continue;
      modes_.push_back(grid.index_of_mode(n1, n2));
    }
  }
}

std::size_t DriftControl::parameter_count() const {
  return eta_.size() * (modes_.empty() ? 0 : 2 * modes_.size() - 1);
}

std::vector<double> DriftControl::parameters() const {
  std::vector<double> theta;
  theta.reserve(parameter_count());
  for (const auto& slab : eta_) {
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      theta.push_back(slab[modes_[m]].real());
      if (m > 0) theta.push_back(slab[modes_[m]].imag());
    }
  }
  return theta;
}

void DriftControl::set_parameters(std::span<const double> theta) {
  if (theta.size() != parameter_count()) throw std::invalid_argument("drift parameter count mismatch");
  std::size_t j = 0;
  for (auto& slab : eta_) {
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      const std::size_t idx = modes_[m];
      Complex value(theta[j++], 0.0);
      if (m > 0) value.imag(theta[j++]);
      slab[idx] = value;
      slab[grid_.conjugate_index(idx)] = std::conj(value);
    }
  }
}

double DriftControl::cost() const {
  double sum = 0.0;
  for (const auto& slab : eta_) {
    const double n = sobolev_norm(slab, 0.0);
    sum += n * n;
  }
  return sum / (2.0 * static_cast<double>(eta_.size()));
}

FourierField DriftControl::integrated() const {
  FourierField total(grid_);
  for (const auto& slab : eta_) total += slab;
  total *= 1.0 / static_cast<double>(eta_.size());
  return apply_bessel_potential(total, -1.0);
}

namespace {

std::vector<double> shifted_density(const DriftControl& eta, const GibbsTarget& target,
                                    std::size_t samples, std::uint64_t seed, Execution exec) {
  const FourierField shift = apply_symbol(eta.integrated(), target.projector);
  std::vector<double> values(samples);
  for_each_replica(samples, exec, [&](std::size_t r) {
    RngStream rng(seed, r);
    FourierField y = sample_mu_projected(target.grid, 1.0, target.grid.cutoff, rng);
    y += shift;
    values[r] = -target.density_of_projected(y);
  });
  return values;
}

}  // namespace

Estimate variational_objective(const DriftControl& eta, const GibbsTarget& target,
                               std::size_t samples, std::uint64_t seed, Execution exec) {
  const Estimate e = mean_estimate(shifted_density(eta, target, samples, seed, exec));
  return {e.value + eta.cost(), e.std_error};
}

Estimate variational_difference(const DriftControl& a, const DriftControl& b,
                                const GibbsTarget& target, std::size_t samples, std::uint64_t seed,
                                Execution exec) {
  auto va = shifted_density(a, target, samples, seed, exec);
  const auto vb = shifted_density(b, target, samples, seed, exec);
  for (std::size_t i = 0; i < va.size(); ++i) va[i] -= vb[i];
  const Estimate e = mean_estimate(va);
  return {e.value + a.cost() - b.cost(), e.std_error};
}

namespace {

double y8_ratio(const DriftControl& eta) {
  const double total = 2.0 * eta.cost();
  if (total == 0.0) return 0.0;
  const double h1 = sobolev_norm(eta.integrated(), 1.0);
  return h1 * h1 / total;
}

double checked(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw std::runtime_error(std::string("optimize_drift: non-finite objective at ") + what);
  }
  return value;
}

}  // namespace

DriftOptimization optimize_drift(const GibbsTarget& target, DriftControl init,
                                 const DriftOptimizerOptions& options, std::uint64_t seed,
                                 Execution exec) {
  if (options.iterations < 1) throw std::invalid_argument("optimize_drift needs iterations >= 1");
  DriftOptimization out;
  out.eta = std::move(init);
  out.max_y8_ratio = y8_ratio(out.eta);
  auto objective = [&](const DriftControl& eta) {
    return variational_objective(eta, target, options.batch, seed, exec).value;
  };
  double current = checked(objective(out.eta), "the initial drift");
  std::vector<double> theta = out.eta.parameters();
  RngStream directions(seed, 0x5350534100ULL);
  DriftControl probe = out.eta;

  for (std::size_t k = 0; k < options.iterations; ++k) {
    const double ck = options.perturbation / std::pow(static_cast<double>(k + 1), 0.101);
    const double ak = options.step / std::pow(static_cast<double>(k + 1), 0.602);
    std::vector<double> delta(theta.size());
    for (auto& d : delta) d = directions.uniform() < 0.5 ? -1.0 : 1.0;

    std::vector<double> plus(theta), minus(theta);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      plus[i] += ck * delta[i];
      minus[i] -= ck * delta[i];
    }
    probe.set_parameters(plus);
    const double w_plus = checked(objective(probe), "a perturbed drift");
    probe.set_parameters(minus);
    const double w_minus = checked(objective(probe), "a perturbed drift");

    std::vector<double> candidate(theta);
    const double slope = (w_plus - w_minus) / (2.0 * ck);
    for (std::size_t i = 0; i < theta.size(); ++i) candidate[i] -= ak * slope / delta[i];
    probe.set_parameters(candidate);
    const double w_candidate = checked(objective(probe), "a candidate drift");
    if (w_candidate <= current) {
      theta = candidate;
      current = w_candidate;
      out.eta.set_parameters(theta);
      out.max_y8_ratio = std::max(out.max_y8_ratio, y8_ratio(out.eta));
      ++out.accepted_steps;
    }
    out.trace.push_back(current);
  }
  return out;
}

}  // namespace sg2d
