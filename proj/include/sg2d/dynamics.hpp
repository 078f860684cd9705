#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sg2d/chaos.hpp"
#include "sg2d/gaussian.hpp"
#include "sg2d/observables.hpp"
#include "sg2d/parallel.hpp"
#include "sg2d/stats.hpp"

namespace sg2d {

/// coupling * gamma_N * P_N sin(beta P_N u), evaluated on the grid and projected.
FourierField nonlinear_force(const FourierField& u, const LinearStepTables& tables,
                             const RenormConstants& constants);

/// Exponential Euler step of
///   u'' + u' + (1 - Delta) u + coupling gamma_N P_N sin(beta P_N u) = sqrt(2) xi.
/// The linear part and the noise are exact; the force is frozen at the step start.
PhaseState hyperbolic_step(PhaseState state, const LinearStepTables& tables,
                           const RenormConstants& constants, RngStream& rng);
PhaseState hyperbolic_step(PhaseState state, const LinearStepTables& tables,
                           const RenormConstants& constants, const PhaseState& noise);

/// Exponential Euler step of
///   u' + (1/2)(1 - Delta) u + (1/2) coupling gamma_N P_N sin(beta P_N u) = xi,
/// whose invariant law is rho_N.
FourierField parabolic_step(FourierField u, const LinearStepTables& tables,
                            const RenormConstants& constants, RngStream& rng);
FourierField parabolic_step(FourierField u, const LinearStepTables& tables,
                            const RenormConstants& constants, const FourierField& noise);

/// coupling * P_N Im(exp(i beta P_N w) Theta_N)
FourierField chaos_force(const FourierField& w, const ChaosField& theta,
                         const LinearStepTables& tables);

/// Noise-free exponential Euler step of the residual equation
///   w'' + w' + (1 - Delta) w + coupling P_N Im(exp(i beta P_N w) Theta_N) = 0
/// with Theta_N taken at the step start.
PhaseState dpd_step(PhaseState w, const ChaosField& theta, const LinearStepTables& tables);

/// Theta_N at t_k = k h, k < steps, from a stationary Psi started at mu_1 x mu_0.
std::vector<ChaosField> stationary_theta_path(const GridSpec& grid, std::size_t steps, double h,
                                              RngStream& rng);

struct PicardReport {
  std::vector<double> differences;  // ||Phi^{k+1} - Phi^k|| in max_t H^{1-alpha}
  std::vector<double> ratios;       // differences[k+1] / differences[k]
};

/// Iterates the discrete Duhamel map from w = 0 over the grid times of the
/// path. Requires the horizon path.size() * h <= 1.
PicardReport picard_diagnostic(const std::vector<ChaosField>& theta_path, double h, int iterations,
                               double alpha = 0.4);

struct DpdLevel {
  double h = 0.0;
  Estimate error;                 // E max_k ||(w + Psi)(t_k) - u_ref(t_k)||_{H^{1-alpha}}
  double identity_defect = 0.0;   // max ||u^(h) - (w^(h) + Psi)|| at equal step
};

struct DpdStudy {
  double h_ref = 0.0;
  double alpha = 0.4;
  std::vector<DpdLevel> levels;
  LinearFit order;  // slope of log error against log h
};

/// Same-path comparison: Psi and the reference solution u_ref use step h_ref,
/// coarser steps use the composed noise of the same Brownian path.
DpdStudy dpd_consistency_study(const GridSpec& grid, double horizon, std::span<const double> hs,
                               double h_ref, std::size_t replicas, double alpha,
                               std::uint64_t seed, Execution exec = Execution::parallel);

struct ModeMomentRow {
  int n1 = 0;
  int n2 = 0;
  std::string component;  // "u" or "v"
  Estimate second_moment;
  double expected = 0.0;
  double z = 0.0;
};

struct LinearInvarianceReport {
  LinearModel model = LinearModel::hyperbolic;
  std::vector<ModeMomentRow> rows;
  double max_abs_z = 0.0;
  std::size_t exceedances = 0;  // |z| > 3
  double expected_exceedances = 0.0;
};

/// Coupling ignored: stationary start, exact linear evolution to time horizon,
/// E|u(n)|^2 (and E|v(n)|^2) for every |n| <= grid.cutoff.
LinearInvarianceReport linear_invariance_check(const GridSpec& grid, LinearModel model,
                                               double horizon, double h, std::size_t replicas,
                                               std::uint64_t seed,
                                               Execution exec = Execution::parallel);

struct InvarianceOptions {
  double horizon = 5.0;
  double h = 1.0 / 128.0;
  std::size_t replicas = 2000;
  std::size_t burn_in = 1000;
  double initial_s = 0.2;
  bool start_from_gibbs = true;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;
};

struct ObservableComparison {
  std::string name;
  Estimate mean_start;
  Estimate mean_end;
  double z_mean = 0.0;    // paired O(T) - O(0) at step h
  double z_second = 0.0;  // paired O(T)^2 - O(0)^2 at step h
  Estimate d1;            // mean O_h(T) - O_{h/2}(T)
  Estimate d2;            // mean O_{h/2}(T) - O_{h/4}(T)
  bool resolved = false;  // |d1| > 3 SE
  double halving_ratio = 0.0;
};

struct InvarianceReport {
  LinearModel model = LinearModel::hyperbolic;
  int N = 0;
  double beta_sq = 0.0;
  double horizon = 0.0;
  double h = 0.0;
  std::size_t replicas = 0;
  double mean_acceptance = 0.0;
  std::vector<ObservableComparison> observables;
  double max_abs_z = 0.0;
  std::size_t resolved = 0;
  bool halving_ok = false;
  std::vector<std::string> warnings;
};

/// Ensemble from rho_N x mu_0 (independent pCN chain per replica), evolved at
/// steps h, h/2, h/4 on one Brownian path per replica.
InvarianceReport invariance_experiment(const GridSpec& grid, const InvarianceOptions& options);
InvarianceReport parabolic_invariance_experiment(const GridSpec& grid,
                                                 const InvarianceOptions& options);

struct TrajectoryRow {
  double t = 0.0;
  std::size_t replica = 0;
  std::size_t observable = 0;
  double value = 0.0;
};

struct Trajectory {
  LinearModel model = LinearModel::hyperbolic;
  double h = 0.0;
  std::string scheme = "exponential-euler";
  std::vector<std::string> names;
  std::vector<TrajectoryRow> rows;  // ordered by replica, then time
};

Trajectory evolve_ensemble(const GridSpec& grid, LinearModel model, const InvarianceOptions& options,
                           std::size_t snapshot_every);

}  // namespace sg2d
