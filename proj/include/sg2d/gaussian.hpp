#pragma once

#include <cstdint>
#include <vector>

#include "sg2d/fourier_field.hpp"
#include "sg2d/parallel.hpp"
#include "sg2d/rng.hpp"
#include "sg2d/stats.hpp"

namespace sg2d {

/// (u, du/dt) of the hyperbolic dynamics.
struct PhaseState {
  FourierField u;
  FourierField v;
  double t = 0.0;
};

enum class LinearModel { hyperbolic, parabolic };

std::string to_string(LinearModel model);
LinearModel linear_model_from_string(const std::string& name);

/// Exact one-step data of the linear flows, per storage index.
///
/// Hyperbolic: each real component of mode n follows x'' + x' + <n>^2 x = sqrt(2) dB/dt.
/// Parabolic:  x' + <n>^2 x / 2 = dB/dt.
/// The covariance q is written for a real Brownian motion of unit rate, so the
/// stationary covariance is diag(<n>^-2, 1) (hyperbolic) or <n>^-2 (parabolic);
/// complex modes use q/2 per real and imaginary part.
struct LinearStepTables {
  GridSpec grid;
  double h = 0.0;
  LinearModel model = LinearModel::hyperbolic;

  std::vector<double> a11, a12, a21, a22;
  std::vector<double> q11, q12, q22;
  std::vector<double> l11, l21, l22;  // Cholesky factor of q
  /// Response of (u, v) to a unit forcing held constant over one step.
  std::vector<double> duhamel_u, duhamel_v;
  /// chi_N of grid.cutoff, cached for the nonlinear steps.
  std::vector<double> projector;
};

/// Throws std::invalid_argument when h <= 0.
LinearStepTables build_linear_tables(const GridSpec& grid, double h, LinearModel model);

/// Coefficients g_n / <n>^s with g_n standard complex Gaussian (g_0 real),
/// Hermitian, Nyquist lines zero.
FourierField sample_mu(const GridSpec& grid, double s, RngStream& rng);

/// P_cutoff applied to a mu_s sample, drawing only the modes inside the
/// projector support. Same law as apply_cutoff_projector(sample_mu(...)) but a
/// different consumption of the stream.
FourierField sample_mu_projected(const GridSpec& grid, double s, int cutoff, RngStream& rng);

/// Independent u ~ mu_1 and v ~ mu_0.
PhaseState sample_pair_mu1(const GridSpec& grid, RngStream& rng);

/// Gaussian increment N(0, Q) of one step.
PhaseState draw_linear_noise(const LinearStepTables& tables, RngStream& rng);
FourierField draw_parabolic_noise(const LinearStepTables& tables, RngStream& rng);

/// Deterministic part of the step: (u, v) <- A (u, v).
void propagate_linear(PhaseState& state, const LinearStepTables& tables);
void propagate_linear(FourierField& field, const LinearStepTables& tables);

/// Exact-in-law step: A (u, v) + N(0, Q).
PhaseState evolve_linear(PhaseState state, const LinearStepTables& tables, RngStream& rng);
PhaseState evolve_linear(PhaseState state, const LinearStepTables& tables, const PhaseState& noise);
FourierField evolve_linear(FourierField field, const LinearStepTables& tables, RngStream& rng);

/// acc <- A_fine acc + fine_noise. After r fine steps from acc = 0 this is the
/// noise increment of one step of size r * h_fine on the same Brownian path.
void accumulate_noise(PhaseState& acc, const LinearStepTables& fine, const PhaseState& fine_noise);
void accumulate_noise(FourierField& acc, const LinearStepTables& fine,
                      const FourierField& fine_noise);

PhaseState zero_phase_state(const GridSpec& grid);

struct GridOffset {
  int k1 = 0;
  int k2 = 0;
};

struct CovariancePoint {
  GridOffset offset;
  double r = 0.0;
  Estimate value;
};

/// Monte Carlo estimate of E[Psi_N(t, x + r) Psi_N(t, x)] for the stationary
/// stochastic convolution: (u, v) ~ mu_1 x mu_0 evolved exactly to time t.
/// Each sample is averaged over all base points x.
std::vector<CovariancePoint> estimate_covariance(const GridSpec& grid,
                                                 const std::vector<GridOffset>& offsets,
                                                 std::size_t samples, double t, std::uint64_t seed,
                                                 Execution exec = Execution::parallel);

}  // namespace sg2d
