#include "sg2d/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sg2d/cutoff.hpp"

namespace sg2d {

std::string to_string(LinearModel model) {
  return model == LinearModel::hyperbolic ? "hyperbolic" : "parabolic";
}

LinearModel linear_model_from_string(const std::string& name) {
  if (name == "hyperbolic") return LinearModel::hyperbolic;
  if (name == "parabolic") return LinearModel::parabolic;
  throw std::invalid_argument("unknown model '" + name + "' (expected hyperbolic or parabolic)");
}

namespace {

struct HyperbolicMode {
  double a11, a12, a21, a22;
  double q11, q12, q22;
  double du, dv;
};

// Underdamped oscillator x'' + x' + lambda x, lambda >= 1, omega = sqrt(lambda - 1/4).
HyperbolicMode hyperbolic_mode(double lambda, double h) {
  const double omega = std::sqrt(lambda - 0.25);
  const double decay = std::exp(-0.5 * h);
  const double sn = std::sin(omega * h);
  const double cs = std::cos(omega * h);
  const double d = decay * sn / omega;
  const double dp = decay * (cs - sn / (2.0 * omega));

  HyperbolicMode m{};
  m.a11 = dp + d;
  m.a12 = d;
  m.a21 = -lambda * d;
  m.a22 = dp;

  // int_0^h e^{-s} {sin^2, sin cos, cos^2}(omega s) ds via k = 2 omega.
  const double k = 2.0 * omega;
  const double e1 = std::exp(-h);
  const double e0 = -std::expm1(-h);
  const double c_int = (e0 + e1 * (1.0 - std::cos(k * h)) + e1 * k * std::sin(k * h)) / (1.0 + k * k);
  const double s_int = (k * (1.0 - e1 * std::cos(k * h)) - e1 * std::sin(k * h)) / (1.0 + k * k);
  const double j_ss = 0.5 * (e0 - c_int);
  const double j_cc = 0.5 * (e0 + c_int);
  const double j_sc = 0.5 * s_int;

  const double w2 = omega * omega;
  m.q11 = 2.0 * j_ss / w2;
  m.q12 = 2.0 * (j_sc / omega - j_ss / (2.0 * w2));
  m.q22 = 2.0 * (j_cc - j_sc / omega + j_ss / (4.0 * w2));

  // int_0^h D(s) ds = Im[(e^{z h} - 1) / z] / omega, z = -1/2 + i omega.
  const double a = -0.5 * h;
  const double b = omega * h;
  const double half_sin = std::sin(0.5 * b);
  const Complex ezm1(std::expm1(a) * std::cos(b) - 2.0 * half_sin * half_sin, std::exp(a) * std::sin(b));
  const Complex z(-0.5, omega);
  m.du = (ezm1 / z).imag() / omega;
  m.dv = d;
  return m;
}

void cholesky2(double q11, double q12, double q22, double& l11, double& l21, double& l22) {
  l11 = std::sqrt(std::max(0.0, q11));
  l21 = l11 > 0.0 ? q12 / l11 : 0.0;
  l22 = std::sqrt(std::max(0.0, q22 - l21 * l21));
}

// Visits each independent mode once: idx < conj(idx), or idx == conj(idx).
// Nyquist-touching indices are skipped.
template <class F>
void for_each_independent_mode(const GridSpec& grid, F&& f) {
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.touches_nyquist(idx)) continue;
    const std::size_t conj = grid.conjugate_index(idx);
    if (idx > conj) continue;
    f(idx, conj);
  }
}

void require_model(const LinearStepTables& tables, LinearModel model) {
  if (tables.model != model) {
    throw std::invalid_argument("tables were built for the " + to_string(tables.model) + " model");
  }
}

}  // namespace

LinearStepTables build_linear_tables(const GridSpec& grid, double h, LinearModel model) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("step size h must be > 0");
  LinearStepTables t;
  t.grid = grid;
  t.h = h;
  t.model = model;
  const std::size_t n = grid.size();
  for (auto* v : {&t.a11, &t.a12, &t.a21, &t.a22, &t.q11, &t.q12, &t.q22, &t.l11, &t.l21, &t.l22,
                  &t.duhamel_u, &t.duhamel_v}) {
    v->assign(n, 0.0);
  }
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double lambda = 1.0 + grid.mode_norm_sq(idx);
    if (model == LinearModel::hyperbolic) {
      const HyperbolicMode m = hyperbolic_mode(lambda, h);
      t.a11[idx] = m.a11;
      t.a12[idx] = m.a12;
      t.a21[idx] = m.a21;
      t.a22[idx] = m.a22;
      t.q11[idx] = m.q11;
      t.q12[idx] = m.q12;
      t.q22[idx] = m.q22;
      t.duhamel_u[idx] = m.du;
      t.duhamel_v[idx] = m.dv;
      cholesky2(m.q11, m.q12, m.q22, t.l11[idx], t.l21[idx], t.l22[idx]);
    } else {
      t.a11[idx] = std::exp(-0.5 * lambda * h);
      t.q11[idx] = -std::expm1(-lambda * h) / lambda;
      t.l11[idx] = std::sqrt(t.q11[idx]);
      t.duhamel_u[idx] = -2.0 * std::expm1(-0.5 * lambda * h) / lambda;
    }
  }
  t.projector = cutoff_symbol(grid, grid.cutoff);
  return t;
}

FourierField sample_mu(const GridSpec& grid, double s, RngStream& rng) {
  FourierField field(grid);
  for_each_independent_mode(grid, [&](std::size_t idx, std::size_t conj) {
    const double scale = std::pow(1.0 + grid.mode_norm_sq(idx), -0.5 * s);
    if (idx == conj) {
      field[idx] = scale * rng.normal();
    } else {
      const Complex g = scale * rng.complex_normal();
      field[idx] = g;
      field[conj] = std::conj(g);
    }
  });
  return field;
}

FourierField sample_mu_projected(const GridSpec& grid, double s, int cutoff, RngStream& rng) {
  FourierField field(grid);
  const CutoffProfile chi(grid.bridge);
  for (int n1 = 0; n1 < cutoff; ++n1) {
    for (int n2 = (n1 == 0 ? 0 : -cutoff + 1); n2 < cutoff; ++n2) {
      const double nsq = static_cast<double>(n1 * n1 + n2 * n2);
      const double c = chi.at_mode(nsq, cutoff);
      if (c == 0.0) continue;
      const double scale = c * std::pow(1.0 + nsq, -0.5 * s);
      if (n1 == 0 && n2 == 0) {
        field[0] = scale * rng.normal();
      } else {
        field.set_real_mode(n1, n2, scale * rng.complex_normal());
      }
    }
  }
  return field;
}

PhaseState sample_pair_mu1(const GridSpec& grid, RngStream& rng) {
  PhaseState state;
  state.u = sample_mu(grid, 1.0, rng);
  state.v = sample_mu(grid, 0.0, rng);
  return state;
}

PhaseState zero_phase_state(const GridSpec& grid) {
  PhaseState state;
  state.u = FourierField(grid);
  state.v = FourierField(grid);
  return state;
}

PhaseState draw_linear_noise(const LinearStepTables& tables, RngStream& rng) {
  require_model(tables, LinearModel::hyperbolic);
  PhaseState noise = zero_phase_state(tables.grid);
  constexpr double kHalf = std::numbers::sqrt2 / 2.0;
  for_each_independent_mode(tables.grid, [&](std::size_t idx, std::size_t conj) {
    const double l11 = tables.l11[idx], l21 = tables.l21[idx], l22 = tables.l22[idx];
    if (idx == conj) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      noise.u[idx] = l11 * z1;
      noise.v[idx] = l21 * z1 + l22 * z2;
    } else {
      const double z1 = rng.normal(), z2 = rng.normal();
      const double z3 = rng.normal(), z4 = rng.normal();
      const Complex xu(l11 * z1 * kHalf, l11 * z3 * kHalf);
      const Complex xv((l21 * z1 + l22 * z2) * kHalf, (l21 * z3 + l22 * z4) * kHalf);
      noise.u[idx] = xu;
      noise.u[conj] = std::conj(xu);
      noise.v[idx] = xv;
      noise.v[conj] = std::conj(xv);
    }
  });
  return noise;
}

FourierField draw_parabolic_noise(const LinearStepTables& tables, RngStream& rng) {
  require_model(tables, LinearModel::parabolic);
  FourierField noise(tables.grid);
  for_each_independent_mode(tables.grid, [&](std::size_t idx, std::size_t conj) {
    if (idx == conj) {
      noise[idx] = tables.l11[idx] * rng.normal();
    } else {
      const Complex x = tables.l11[idx] * rng.complex_normal();
      noise[idx] = x;
      noise[conj] = std::conj(x);
    }
  });
  return noise;
}

void propagate_linear(PhaseState& state, const LinearStepTables& tables) {
  require_model(tables, LinearModel::hyperbolic);
  auto u = state.u.coefficients();
  auto v = state.v.coefficients();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Complex nu = tables.a11[i] * u[i] + tables.a12[i] * v[i];
    const Complex nv = tables.a21[i] * u[i] + tables.a22[i] * v[i];
    u[i] = nu;
    v[i] = nv;
  }
  state.t += tables.h;
}

void propagate_linear(FourierField& field, const LinearStepTables& tables) {
  require_model(tables, LinearModel::parabolic);
  auto u = field.coefficients();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= tables.a11[i];
}

PhaseState evolve_linear(PhaseState state, const LinearStepTables& tables, const PhaseState& noise) {
  propagate_linear(state, tables);
  state.u += noise.u;
  state.v += noise.v;
  return state;
}

PhaseState evolve_linear(PhaseState state, const LinearStepTables& tables, RngStream& rng) {
  const PhaseState noise = draw_linear_noise(tables, rng);
  return evolve_linear(std::move(state), tables, noise);
}

FourierField evolve_linear(FourierField field, const LinearStepTables& tables, RngStream& rng) {
  const FourierField noise = draw_parabolic_noise(tables, rng);
  propagate_linear(field, tables);
  field += noise;
  return field;
}

void accumulate_noise(PhaseState& acc, const LinearStepTables& fine, const PhaseState& fine_noise) {
  const double t = acc.t;
  propagate_linear(acc, fine);
  acc.t = t;
  acc.u += fine_noise.u;
  acc.v += fine_noise.v;
}

void accumulate_noise(FourierField& acc, const LinearStepTables& fine,
                      const FourierField& fine_noise) {
  propagate_linear(acc, fine);
  acc += fine_noise;
}

std::vector<CovariancePoint> estimate_covariance(const GridSpec& grid,
                                                 const std::vector<GridOffset>& offsets,
                                                 std::size_t samples, double t, std::uint64_t seed,
                                                 Execution exec) {
  if (samples < 100) throw std::invalid_argument("estimate_covariance needs >= 100 samples");
  const int m = grid.points_per_axis;
  const auto tables = t > 0.0 ? build_linear_tables(grid, t, LinearModel::hyperbolic)
                              : LinearStepTables{};
  std::vector<std::vector<double>> per_sample(samples, std::vector<double>(offsets.size()));

  for_each_replica(samples, exec, [&](std::size_t r) {
    RngStream rng(seed, r);
    PhaseState state = sample_pair_mu1(grid, rng);
    if (t > 0.0) state = evolve_linear(std::move(state), tables, rng);
    const auto psi = inverse_transform(apply_symbol(state.u, tables.projector.empty()
                                                                 ? cutoff_symbol(grid, grid.cutoff)
                                                                 : tables.projector));
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          const int i2 = ((i + offsets[o].k1) % m + m) % m;
          const int j2 = ((j + offsets[o].k2) % m + m) % m;
          acc += psi[grid.index(i, j)] * psi[grid.index(i2, j2)];
        }
      }
      per_sample[r][o] = acc / static_cast<double>(grid.size());
    }
  });

  std::vector<CovariancePoint> out;
  for (std::size_t o = 0; o < offsets.size(); ++o) {
    std::vector<double> column(samples);
    for (std::size_t r = 0; r < samples; ++r) column[r] = per_sample[r][o];
    CovariancePoint p;
    p.offset = offsets[o];
    p.r = grid.spacing() * std::hypot(offsets[o].k1, offsets[o].k2);
    p.value = mean_estimate(column);
    out.push_back(p);
  }
  return out;
}

}  // namespace sg2d
