#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sg2d/chaos.hpp"
#include "sg2d/fourier_field.hpp"
#include "sg2d/parallel.hpp"
#include "sg2d/rng.hpp"
#include "sg2d/stats.hpp"

namespace sg2d {

/// Density data of rho_N = exp(R_N) d mu_1 on a fixed grid.
struct GibbsTarget {
  GridSpec grid;
  RenormConstants constants;
  std::vector<double> projector;  // chi_N

  static GibbsTarget make(const GridSpec& grid);

  /// R_N(u) = coupling (gamma_N / beta) * cell_area * sum_j cos(beta (P_N u)(x_j)).
  double density(const FourierField& u) const;
  /// Same, for a field that is already P_N u.
  double density_of_projected(const FourierField& pn_u) const;
};

/// Throws std::invalid_argument when beta_sq == 0 (R_N is not defined there).
double compute_RN(const FourierField& u, const RenormConstants& constants, double coupling = 1.0);

struct ChainState {
  FourierField u;
  double rn = 0.0;  // cached R_N(u)
  double s = 0.2;   // pCN scale, 0 < s < 1
  std::size_t accepted = 0;
  std::size_t proposed = 0;

  double acceptance_rate() const {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

ChainState start_chain(const GibbsTarget& target, FourierField u, double s);

/// u' = sqrt(1 - s^2) u + s xi, xi ~ mu_1, accepted with prob min(1, exp(R(u') - R(u))).
ChainState pcn_step(ChainState chain, const GibbsTarget& target, RngStream& rng);

struct GibbsRunOptions {
  std::size_t samples = 1000;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  double initial_s = 0.2;
  double target_acceptance = 0.3;
  std::size_t adapt_window = 50;
};

struct GibbsSamples {
  std::vector<FourierField> samples;
  double acceptance = 0.0;  // after burn-in
  double final_s = 0.0;
  std::vector<std::string> warnings;
};

/// Adapts s during burn-in toward the target acceptance, then freezes it.
/// Chain starts from a mu_1 draw.
GibbsSamples sample_gibbs(const GibbsTarget& target, const GibbsRunOptions& options, RngStream& rng);

/// Runs burn_in adaptive steps from a mu_1 draw and returns the last state;
/// the counters cover the burn-in.
ChainState equilibrate_chain(const GibbsTarget& target, std::size_t burn_in, double initial_s,
                             RngStream& rng, double target_acceptance = 0.3,
                             std::size_t adapt_window = 50);

struct LpMoment {
  double p = 1.0;
  Estimate log_norm;  // log || e^{R_N} ||_{L^p(mu_1)}
};

struct LogZReport {
  int N = 0;
  double beta_sq = 0.0;
  std::size_t samples = 0;
  Estimate log_z;
  std::vector<LpMoment> moments;
  double min_rn = 0.0;
  double max_rn = 0.0;
};

/// Importance sampling from mu_1. Requires samples >= 1000.
LogZReport estimate_logZ_mc(const GibbsTarget& target, std::size_t samples, std::uint64_t seed,
                            std::span<const double> ps = {}, Execution exec = Execution::parallel);

/// Piecewise-constant deterministic drift: K slabs of length 1/K, each
/// band-limited to |n| <= N_drift.
class DriftControl {
 public:
  DriftControl() = default;
  DriftControl(const GridSpec& grid, int slabs, int drift_cutoff);

  const GridSpec& grid() const { return grid_; }
  int slabs() const { return static_cast<int>(eta_.size()); }
  int drift_cutoff() const { return drift_cutoff_; }
  const FourierField& slab(int k) const { return eta_[static_cast<std::size_t>(k)]; }

  /// Real parameters: per slab, the real part of the zero mode then (re, im)
  /// of each mode with |n| <= N_drift in the upper half plane.
  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> theta);

  /// (1/2) int_0^1 ||eta||^2 dt = (1 / 2K) sum_k ||eta_k||^2
  double cost() const;
  /// I(eta)(1) = sum_k (1/K) <grad>^{-1} eta_k
  FourierField integrated() const;

 private:
  GridSpec grid_{};
  int drift_cutoff_ = 0;
  std::vector<FourierField> eta_;
  std::vector<std::size_t> modes_;  // storage indices in the half plane
};

/// W(eta) = E[-R_N(Y(1) + I(eta)(1))] + cost, Y(1) ~ mu_1. The samples are
/// indexed by (seed, replica) so equal seeds give common random numbers.
Estimate variational_objective(const DriftControl& eta, const GibbsTarget& target,
                               std::size_t samples, std::uint64_t seed,
                               Execution exec = Execution::parallel);

/// Paired estimate of W(a) - W(b) on common samples.
Estimate variational_difference(const DriftControl& a, const DriftControl& b,
                                const GibbsTarget& target, std::size_t samples, std::uint64_t seed,
                                Execution exec = Execution::parallel);

struct DriftOptimizerOptions {
  std::size_t iterations = 40;
  std::size_t batch = 2000;
  double step = 0.5;         // SPSA a
  double perturbation = 0.2;  // SPSA c
};

struct DriftOptimization {
  DriftControl eta;
  std::vector<double> trace;  // batch objective of the current iterate, non-increasing
  std::size_t accepted_steps = 0;
  double max_y8_ratio = 0.0;  // max over iterates of ||I(eta)(1)||_{H^1}^2 / int ||eta||^2
};

/// SPSA with common random numbers; a step is kept only if the batch objective
/// does not increase. Throws std::runtime_error on a non-finite objective.
DriftOptimization optimize_drift(const GibbsTarget& target, DriftControl init,
                                 const DriftOptimizerOptions& options, std::uint64_t seed,
                                 Execution exec = Execution::parallel);

}  // namespace sg2d
