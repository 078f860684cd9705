#include "sg2d/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sg2d/cutoff.hpp"
#include "sg2d/gibbs.hpp"

namespace sg2d {

namespace {

FourierField projected_sine_force(const FourierField& u, std::span<const double> projector,
                                  double beta, double scale) {
  const GridSpec& grid = u.grid();
  auto values = inverse_transform(apply_symbol(u, projector));
  for (auto& x : values) x = std::sin(beta * x);
  FourierField force = forward_transform(values, grid);
  auto c = force.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= scale * projector[i];
  return force;
}

FourierField chaos_force_impl(const FourierField& w, const ChaosField& theta,
                              std::span<const double> projector, double coupling) {
  const GridSpec& grid = w.grid();
  const double beta = theta.constants.beta();
  const auto pw = inverse_transform(apply_symbol(w, projector));
  std::vector<double> values(pw.size());
  for (std::size_t i = 0; i < pw.size(); ++i) {
    values[i] = (std::polar(1.0, beta * pw[i]) * theta.values[i]).imag();
  }
  FourierField force = forward_transform(values, grid);
  auto c = force.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= coupling * projector[i];
  return force;
}

void subtract_weighted(FourierField& target, std::span<const double> weight, const FourierField& f) {
  auto t = target.coefficients();
  const auto s = f.coefficients();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] -= weight[i] * s[i];
}

}  // namespace

FourierField nonlinear_force(const FourierField& u, const LinearStepTables& tables,
                             const RenormConstants& constants) {
  const double coupling = tables.grid.coupling;
  if (coupling == 0.0) return FourierField(u.grid());
  return projected_sine_force(u, tables.projector, constants.beta(), coupling * constants.gamma_N);
}

PhaseState hyperbolic_step(PhaseState state, const LinearStepTables& tables,
                           const RenormConstants& constants, const PhaseState& noise) {
  if (tables.grid.coupling == 0.0) return evolve_linear(std::move(state), tables, noise);
  const FourierField force = nonlinear_force(state.u, tables, constants);
  state = evolve_linear(std::move(state), tables, noise);
  subtract_weighted(state.u, tables.duhamel_u, force);
  subtract_weighted(state.v, tables.duhamel_v, force);
  return state;
}

PhaseState hyperbolic_step(PhaseState state, const LinearStepTables& tables,
                           const RenormConstants& constants, RngStream& rng) {
  const PhaseState noise = draw_linear_noise(tables, rng);
  return hyperbolic_step(std::move(state), tables, constants, noise);
}

FourierField parabolic_step(FourierField u, const LinearStepTables& tables,
                            const RenormConstants& constants, const FourierField& noise) {
  if (tables.grid.coupling == 0.0) {
    propagate_linear(u, tables);
    u += noise;
    return u;
  }
  FourierField force = nonlinear_force(u, tables, constants);
  force *= 0.5;
  propagate_linear(u, tables);
  u += noise;
  subtract_weighted(u, tables.duhamel_u, force);
  return u;
}

FourierField parabolic_step(FourierField u, const LinearStepTables& tables,
                            const RenormConstants& constants, RngStream& rng) {
  const FourierField noise = draw_parabolic_noise(tables, rng);
  return parabolic_step(std::move(u), tables, constants, noise);
}

FourierField chaos_force(const FourierField& w, const ChaosField& theta,
                         const LinearStepTables& tables) {
  return chaos_force_impl(w, theta, tables.projector, tables.grid.coupling);
}

PhaseState dpd_step(PhaseState w, const ChaosField& theta, const LinearStepTables& tables) {
  const FourierField force = chaos_force(w.u, theta, tables);
  propagate_linear(w, tables);
  subtract_weighted(w.u, tables.duhamel_u, force);
  subtract_weighted(w.v, tables.duhamel_v, force);
  return w;
}

std::vector<ChaosField> stationary_theta_path(const GridSpec& grid, std::size_t steps, double h,
                                              RngStream& rng) {
  const auto tables = build_linear_tables(grid, h, LinearModel::hyperbolic);
  const RenormConstants constants = RenormConstants::for_grid(grid);
  PhaseState psi = sample_pair_mu1(grid, rng);
  std::vector<ChaosField> path;
  path.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    path.push_back(make_chaos(apply_symbol(psi.u, tables.projector), constants,
                              static_cast<double>(k) * h));
    psi = evolve_linear(std::move(psi), tables, rng);
  }
  return path;
}

PicardReport picard_diagnostic(const std::vector<ChaosField>& theta_path, double h, int iterations,
                               double alpha) {
  if (theta_path.empty()) throw std::invalid_argument("picard_diagnostic needs a non-empty path");
  if (!(h > 0.0)) throw std::invalid_argument("picard_diagnostic needs h > 0");
  if (iterations < 1) throw std::invalid_argument("picard_diagnostic needs iterations >= 1");
  const std::size_t steps = theta_path.size();
  if (static_cast<double>(steps) * h > 1.0 + 1e-12) {
    throw std::invalid_argument("picard_diagnostic requires a horizon T <= 1");
  }
  const GridSpec& grid = theta_path.front().grid;
  const auto projector = cutoff_symbol(grid, theta_path.front().constants.N);

  // kernel[lag][idx] = h D(lag h)
  std::vector<std::vector<double>> kernel(steps + 1, std::vector<double>(grid.size()));
  for (std::size_t lag = 1; lag <= steps; ++lag) {
    const double t = static_cast<double>(lag) * h;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double omega = std::sqrt(0.75 + grid.mode_norm_sq(i));
      kernel[lag][i] = h * std::exp(-0.5 * t) * std::sin(omega * t) / omega;
    }
  }

  // w[m] lives at t_m = m h, m = 0..steps; w[0] = 0 always.
  std::vector<FourierField> w(steps + 1, FourierField(grid));
  PicardReport report;
  for (int it = 0; it < iterations; ++it) {
    std::vector<FourierField> forces;
    forces.reserve(steps);
    for (std::size_t j = 0; j < steps; ++j) {
      forces.push_back(chaos_force_impl(w[j], theta_path[j], projector, grid.coupling));
    }
    std::vector<FourierField> next(steps + 1, FourierField(grid));
    double diff = 0.0;
    for (std::size_t m = 1; m <= steps; ++m) {
      for (std::size_t j = 0; j < m; ++j) subtract_weighted(next[m], kernel[m - j], forces[j]);
      diff = std::max(diff, sobolev_norm(next[m] - w[m], 1.0 - alpha));
    }
    report.differences.push_back(diff);
    w = std::move(next);
  }
  for (std::size_t k = 1; k < report.differences.size(); ++k) {
    const double prev = report.differences[k - 1];
    report.ratios.push_back(prev > 0.0 ? report.differences[k] / prev : 0.0);
  }
  return report;
}

namespace {

std::size_t step_count(double horizon, double h) {
  const double n = horizon / h;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    throw std::invalid_argument("horizon must be a positive integer multiple of the step size");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

DpdStudy dpd_consistency_study(const GridSpec& grid, double horizon, std::span<const double> hs,
                               double h_ref, std::size_t replicas, double alpha,
                               std::uint64_t seed, Execution exec) {
  if (hs.empty() || replicas == 0) throw std::invalid_argument("dpd study needs steps and replicas");
  const RenormConstants constants = RenormConstants::for_grid(grid);
  const auto fine = build_linear_tables(grid, h_ref, LinearModel::hyperbolic);
  const std::size_t fine_steps = step_count(horizon, h_ref);
  const std::size_t nl = hs.size();
  std::vector<LinearStepTables> tables;
  std::vector<std::size_t> ratio;
  for (double h : hs) {
    ratio.push_back(step_count(h, h_ref));
    tables.push_back(build_linear_tables(grid, h, LinearModel::hyperbolic));
    step_count(horizon, h);
  }

  std::vector<std::vector<double>> errors(replicas, std::vector<double>(nl));
  std::vector<std::vector<double>> defects(replicas, std::vector<double>(nl));
  for_each_replica(replicas, exec, [&](std::size_t r) {
    RngStream rng(seed, r);
    PhaseState psi = sample_pair_mu1(grid, rng);
    PhaseState ref = psi;
    std::vector<PhaseState> acc(nl, zero_phase_state(grid));
    std::vector<PhaseState> w(nl, zero_phase_state(grid));
    std::vector<PhaseState> u(nl, psi);
    std::vector<PhaseState> psi_start(nl, psi);
    for (std::size_t i = 0; i < fine_steps; ++i) {
      const PhaseState xi = draw_linear_noise(fine, rng);
      ref = hyperbolic_step(std::move(ref), fine, constants, xi);
      psi = evolve_linear(std::move(psi), fine, xi);
      for (std::size_t l = 0; l < nl; ++l) {
        accumulate_noise(acc[l], fine, xi);
        if ((i + 1) % ratio[l] != 0) continue;
        const ChaosField theta =
            make_chaos(apply_symbol(psi_start[l].u, fine.projector), constants, psi_start[l].t);
        w[l] = dpd_step(std::move(w[l]), theta, tables[l]);
        u[l] = hyperbolic_step(std::move(u[l]), tables[l], constants, acc[l]);
        acc[l] = zero_phase_state(grid);
        psi_start[l] = psi;
        const FourierField sum = w[l].u + psi.u;
        errors[r][l] = std::max(errors[r][l], sobolev_norm(sum - ref.u, 1.0 - alpha));
        defects[r][l] = std::max(defects[r][l], sobolev_norm(u[l].u - sum, 1.0 - alpha));
      }
    }
  });

  DpdStudy study;
  study.h_ref = h_ref;
  study.alpha = alpha;
  std::vector<double> log_h, log_e;
  for (std::size_t l = 0; l < nl; ++l) {
    std::vector<double> col(replicas);
    DpdLevel level;
    level.h = hs[l];
    for (std::size_t r = 0; r < replicas; ++r) {
      col[r] = errors[r][l];
      level.identity_defect = std::max(level.identity_defect, defects[r][l]);
    }
    level.error = mean_estimate(col);
    study.levels.push_back(level);
    log_h.push_back(std::log(hs[l]));
    log_e.push_back(std::log(level.error.value));
  }
  if (nl >= 2) study.order = linear_fit(log_h, log_e);
  return study;
}

namespace {

// Runs body over replicas in fixed-size blocks, then hands each replica's
// result to consume in replica order.
template <class Body, class Consume>
void blocked_replicas(std::size_t count, Execution exec, std::size_t block, Body&& body,
                      Consume&& consume) {
  std::vector<std::vector<double>> buffer(block);
  for (std::size_t start = 0; start < count; start += block) {
    const std::size_t n = std::min(block, count - start);
    for_each_replica(n, exec, [&](std::size_t k) { buffer[k] = body(start + k); });
    for (std::size_t k = 0; k < n; ++k) consume(start + k, buffer[k]);
  }
}

}  // namespace

LinearInvarianceReport linear_invariance_check(const GridSpec& grid, LinearModel model,
                                               double horizon, double h, std::size_t replicas,
                                               std::uint64_t seed, Execution exec) {
  const auto tables = build_linear_tables(grid, h, model);
  const std::size_t steps = step_count(horizon, h);
  const bool hyper = model == LinearModel::hyperbolic;

  std::vector<std::pair<int, int>> modes;
  const int n = grid.cutoff;
  for (int n1 = 0; n1 <= n; ++n1) {
    for (int n2 = (n1 == 0 ? 0 : -n); n2 <= n; ++n2) {
      if (n1 * n1 + n2 * n2 <= n * n) modes.emplace_back(n1, n2);
    }
  }
  std::vector<std::size_t> index;
  for (const auto& [a, b] : modes) index.push_back(grid.index_of_mode(a, b));
  const std::size_t width = modes.size() * (hyper ? 2 : 1);
  std::vector<RunningMoments> moments(width);

  blocked_replicas(
      replicas, exec, 256,
      [&](std::size_t r) {
        RngStream rng(seed, r);
        std::vector<double> out(width);
        if (hyper) {
          PhaseState s = sample_pair_mu1(grid, rng);
          for (std::size_t k = 0; k < steps; ++k) s = evolve_linear(std::move(s), tables, rng);
          for (std::size_t m = 0; m < index.size(); ++m) {
            out[2 * m] = std::norm(s.u[index[m]]);
            out[2 * m + 1] = std::norm(s.v[index[m]]);
          }
        } else {
          FourierField u = sample_mu(grid, 1.0, rng);
          for (std::size_t k = 0; k < steps; ++k) u = evolve_linear(std::move(u), tables, rng);
          for (std::size_t m = 0; m < index.size(); ++m) out[m] = std::norm(u[index[m]]);
        }
        return out;
      },
      [&](std::size_t, const std::vector<double>& out) {
        for (std::size_t j = 0; j < width; ++j) moments[j].add(out[j]);
      });

  LinearInvarianceReport report;
  report.model = model;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double lambda = 1.0 + grid.mode_norm_sq(index[m]);
    for (int c = 0; c < (hyper ? 2 : 1); ++c) {
      ModeMomentRow row;
      row.n1 = modes[m].first;
      row.n2 = modes[m].second;
      row.component = c == 0 ? "u" : "v";
      row.second_moment = moments[hyper ? 2 * m + c : m].estimate();
      row.expected = c == 0 ? 1.0 / lambda : 1.0;
      row.z = (row.second_moment.value - row.expected) / row.second_moment.std_error;
      report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z));
      if (std::abs(row.z) > 3.0) ++report.exceedances;
      report.rows.push_back(row);
    }
  }
  report.expected_exceedances = 0.0026997960632601 * static_cast<double>(report.rows.size());
  return report;
}

namespace {

struct HyperbolicModel {
  using State = PhaseState;
  static constexpr LinearModel kind = LinearModel::hyperbolic;
  static State initial(const GridSpec& grid, FourierField u, RngStream& rng) {
    State s;
    s.u = std::move(u);
    s.v = sample_mu(grid, 0.0, rng);
    return s;
  }
  static State zero(const GridSpec& grid) { return zero_phase_state(grid); }
  static State noise(const LinearStepTables& t, RngStream& rng) { return draw_linear_noise(t, rng); }
  static State step(State s, const LinearStepTables& t, const RenormConstants& c, const State& xi) {
    return hyperbolic_step(std::move(s), t, c, xi);
  }
  static std::vector<double> observe(const ObservableSet& obs, const State& s) {
    return obs.evaluate(s.u, s.v);
  }
};

struct ParabolicModel {
  using State = FourierField;
  static constexpr LinearModel kind = LinearModel::parabolic;
  static State initial(const GridSpec&, FourierField u, RngStream&) { return u; }
  static State zero(const GridSpec& grid) { return FourierField(grid); }
  static State noise(const LinearStepTables& t, RngStream& rng) { return draw_parabolic_noise(t, rng); }
  static State step(State s, const LinearStepTables& t, const RenormConstants& c, const State& xi) {
    return parabolic_step(std::move(s), t, c, xi);
  }
  static std::vector<double> observe(const ObservableSet& obs, const State& s) {
    return obs.evaluate(s);
  }
};

FourierField initial_position(const GibbsTarget& target, const InvarianceOptions& options,
                              RngStream& rng, double& acceptance) {
  if (!options.start_from_gibbs) {
    acceptance = 1.0;
    return sample_mu(target.grid, 1.0, rng);
  }
  ChainState chain = equilibrate_chain(target, options.burn_in, options.initial_s, rng);
  acceptance = chain.acceptance_rate();
  return std::move(chain.u);
}

template <class Model>
InvarianceReport run_invariance(const GridSpec& grid, const InvarianceOptions& options) {
  using State = typename Model::State;
  grid.validate();
  if (options.replicas < 2) throw std::invalid_argument("invariance needs at least 2 replicas");
  const GibbsTarget target = GibbsTarget::make(grid);
  const RenormConstants& constants = target.constants;
  const ObservableSet obs(grid, Model::kind == LinearModel::hyperbolic, options.epsilon);
  const std::size_t no = obs.size();
  constexpr std::size_t kLevels = 3;
  std::vector<LinearStepTables> tables;
  for (std::size_t l = 0; l < kLevels; ++l) {
    tables.push_back(build_linear_tables(grid, options.h / static_cast<double>(1u << l), Model::kind));
  }
  const LinearStepTables& fine = tables.back();
  const std::size_t fine_steps = step_count(options.horizon, fine.h);
  step_count(options.horizon, options.h);

  // Per replica: O(0), then O(T) at h, h/2, h/4.
  std::vector<std::vector<double>> data(options.replicas);
  std::vector<double> acceptance(options.replicas);
  for_each_replica(options.replicas, options.exec, [&](std::size_t r) {
    RngStream rng(options.seed, r);
    FourierField u0 = initial_position(target, options, rng, acceptance[r]);
    const State start = Model::initial(grid, std::move(u0), rng);
    std::vector<double> row = Model::observe(obs, start);
    std::vector<State> state(kLevels, start);
    std::vector<State> acc(kLevels - 1, Model::zero(grid));
    for (std::size_t i = 0; i < fine_steps; ++i) {
      const State xi = Model::noise(fine, rng);
      state[kLevels - 1] = Model::step(std::move(state[kLevels - 1]), fine, constants, xi);
      for (std::size_t l = 0; l + 1 < kLevels; ++l) {
        accumulate_noise(acc[l], fine, xi);
        const std::size_t every = std::size_t{1} << (kLevels - 1 - l);
        if ((i + 1) % every != 0) continue;
        state[l] = Model::step(std::move(state[l]), tables[l], constants, acc[l]);
        acc[l] = Model::zero(grid);
      }
    }
    for (std::size_t l = 0; l < kLevels; ++l) {
      const auto o = Model::observe(obs, state[l]);
      row.insert(row.end(), o.begin(), o.end());
    }
    data[r] = std::move(row);
  });

  InvarianceReport report;
  report.model = Model::kind;
  report.N = grid.cutoff;
  report.beta_sq = grid.beta_sq;
  report.horizon = options.horizon;
  report.h = options.h;
  report.replicas = options.replicas;
  report.mean_acceptance = mean_estimate(acceptance).value;
  if (options.start_from_gibbs && (report.mean_acceptance < 0.1 || report.mean_acceptance > 0.9)) {
    report.warnings.push_back("mean pCN acceptance outside [0.1, 0.9]");
  }

  const std::size_t n = options.replicas;
  auto column = [&](auto&& f) {
    std::vector<double> c(n);
    for (std::size_t r = 0; r < n; ++r) c[r] = f(data[r]);
    return mean_estimate(c);
  };
  bool ratios_ok = true;
  for (std::size_t j = 0; j < no; ++j) {
    ObservableComparison cmp;
    cmp.name = obs.names()[j];
    const std::size_t t0 = no + j, t1 = 2 * no + j, t2 = 3 * no + j;
    cmp.mean_start = column([&](const auto& d) { return d[j]; });
    cmp.mean_end = column([&](const auto& d) { return d[t0]; });
    const Estimate diff = column([&](const auto& d) { return d[t0] - d[j]; });
    const Estimate diff2 = column([&](const auto& d) { return d[t0] * d[t0] - d[j] * d[j]; });
    cmp.z_mean = diff.std_error > 0.0 ? diff.value / diff.std_error : 0.0;
    cmp.z_second = diff2.std_error > 0.0 ? diff2.value / diff2.std_error : 0.0;
    cmp.d1 = column([&](const auto& d) { return d[t0] - d[t1]; });
    cmp.d2 = column([&](const auto& d) { return d[t1] - d[t2]; });
    cmp.resolved = std::abs(cmp.d1.value) > 3.0 * cmp.d1.std_error;
    if (cmp.resolved) {
      cmp.halving_ratio = cmp.d2.value / cmp.d1.value;
      ++report.resolved;
      if (cmp.halving_ratio < 0.25 || cmp.halving_ratio > 0.75) ratios_ok = false;
    }
    report.max_abs_z = std::max({report.max_abs_z, std::abs(cmp.z_mean), std::abs(cmp.z_second)});
    report.observables.push_back(cmp);
  }
  report.halving_ok = ratios_ok && report.resolved > 0;
  return report;
}

}  // namespace

InvarianceReport invariance_experiment(const GridSpec& grid, const InvarianceOptions& options) {
  return run_invariance<HyperbolicModel>(grid, options);
}

InvarianceReport parabolic_invariance_experiment(const GridSpec& grid,
                                                 const InvarianceOptions& options) {
  return run_invariance<ParabolicModel>(grid, options);
}

Trajectory evolve_ensemble(const GridSpec& grid, LinearModel model, const InvarianceOptions& options,
                           std::size_t snapshot_every) {
  grid.validate();
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  const GibbsTarget target = GibbsTarget::make(grid);
  const bool hyper = model == LinearModel::hyperbolic;
  const ObservableSet obs(grid, hyper, options.epsilon);
  const auto tables = build_linear_tables(grid, options.h, model);
  const std::size_t steps = step_count(options.horizon, options.h);

  std::vector<std::vector<TrajectoryRow>> per_replica(options.replicas);
  for_each_replica(options.replicas, options.exec, [&](std::size_t r) {
    RngStream rng(options.seed, r);
    double acceptance = 0.0;
    FourierField u = initial_position(target, options, rng, acceptance);
    auto& rows = per_replica[r];
    auto record = [&](double t, const std::vector<double>& values) {
      for (std::size_t j = 0; j < values.size(); ++j) rows.push_back({t, r, j, values[j]});
    };
    if (hyper) {
      PhaseState s = HyperbolicModel::initial(grid, std::move(u), rng);
      record(0.0, obs.evaluate(s.u, s.v));
      for (std::size_t k = 1; k <= steps; ++k) {
        s = hyperbolic_step(std::move(s), tables, target.constants, rng);
        if (k % snapshot_every == 0) record(static_cast<double>(k) * options.h, obs.evaluate(s.u, s.v));
      }
    } else {
      record(0.0, obs.evaluate(u));
      for (std::size_t k = 1; k <= steps; ++k) {
        u = parabolic_step(std::move(u), tables, target.constants, rng);
        if (k % snapshot_every == 0) record(static_cast<double>(k) * options.h, obs.evaluate(u));
      }
    }
  });

  Trajectory traj;
  traj.model = model;
  traj.h = options.h;
  traj.names = obs.names();
  for (auto& rows : per_replica) traj.rows.insert(traj.rows.end(), rows.begin(), rows.end());
  return traj;
}

}  // namespace sg2d
