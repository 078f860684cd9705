#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sg2d/fourier_field.hpp"
#include "sg2d/gaussian.hpp"
#include "sg2d/parallel.hpp"
#include "sg2d/stats.hpp"

namespace sg2d {

/// sigma_N = (1/4pi^2) sum_n chi_N(n)^2 <n>^{-2}, the variance of P_N u for u ~ mu_1.
double compute_sigma_N(int cutoff, CutoffBridge bridge = CutoffBridge::smooth_exponential);

/// gamma_N = exp(beta^2 sigma_N / 2). Throws std::invalid_argument for beta_sq < 0.
double compute_gamma_N(int cutoff, double beta_sq,
                       CutoffBridge bridge = CutoffBridge::smooth_exponential);

struct RenormConstants {
  int N = 0;
  double sigma_N = 0.0;
  double gamma_N = 1.0;
  double beta_sq = 0.0;

  static RenormConstants make(int cutoff, double beta_sq,
                              CutoffBridge bridge = CutoffBridge::smooth_exponential);
  static RenormConstants for_grid(const GridSpec& grid) {
    return make(grid.cutoff, grid.beta_sq, grid.bridge);
  }
  double beta() const { return std::sqrt(beta_sq); }
};

/// Theta_N = gamma_N exp(i beta Psi_N) on the grid; |Theta_N| = gamma_N pointwise.
struct ChaosField {
  GridSpec grid;
  std::vector<Complex> values;
  RenormConstants constants;
  double time = 0.0;
};

/// psi must already be band-limited (zero wherever chi_N vanishes), otherwise
/// std::invalid_argument is thrown.
ChaosField make_chaos(const FourierField& psi, const RenormConstants& constants, double time = 0.0);

FourierField chaos_spectrum(const ChaosField& theta);

struct TwoPointRow {
  GridOffset offset;
  double r = 0.0;
  Estimate re;
  Estimate im;
  double green = 0.0;      // truncated_green at the separation
  double predicted = 0.0;  // exp(beta^2 * green)
};

struct ChaosMomentRow {
  double beta_sq = 0.0;
  int N = 0;
  Estimate mean_re;  // E[Theta_N], averaged over the grid in each sample
  Estimate mean_im;
  std::vector<TwoPointRow> two_point;
};

/// Moment diagnostics from stationary samples Psi_N ~ (P_N)_# mu_1; all
/// beta_sq values share the same Psi samples.
std::vector<ChaosMomentRow> chaos_moments(const GridSpec& grid, std::span<const double> beta_sqs,
                                          std::size_t samples,
                                          const std::vector<GridOffset>& offsets,
                                          std::uint64_t seed, Execution exec = Execution::parallel);

struct RegularityRow {
  double alpha = 0.0;
  int N = 0;
  Estimate mean_norm;
};

struct RegularityTrend {
  double alpha = 0.0;
  LinearFit fit;  // mean norm against log N
};

struct RegularityScan {
  double beta_sq = 0.0;
  int points_per_axis = 0;
  std::vector<RegularityRow> rows;
  std::vector<RegularityTrend> trends;
};

/// Mean of neg_sobolev_sup_norm(Theta_N, alpha) for each (alpha, N). All N
/// share one grid (default M = 4 max N) so only the cutoff varies.
RegularityScan chaos_regularity_scan(double beta_sq, std::span<const double> alphas,
                                     std::span<const int> cutoffs, std::size_t samples,
                                     std::uint64_t seed, Execution exec = Execution::parallel,
                                     CutoffBridge bridge = CutoffBridge::smooth_exponential,
                                     int points_per_axis = 0);

}  // namespace sg2d
