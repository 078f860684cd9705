// sg2d <subcommand> --config <path> [--seed U64] [--out DIR] [--replicas K]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sg2d/chaos.hpp"
#include "sg2d/config.hpp"
#include "sg2d/dynamics.hpp"
#include "sg2d/gibbs.hpp"
#include "sg2d/green.hpp"
#include "sg2d/io.hpp"
#include "sg2d/observables.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sg2d;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = std::numbers::pi;

// thrown when a run finishes but one of its checks does not hold
struct AssertionBreach : std::runtime_error {
  AssertionBreach(std::string check, const std::string& what)
      : std::runtime_error(what), check(std::move(check)) {}
  std::string check;
};

struct Context {
  RunConfig cfg;
  fs::path out;
  Execution exec = Execution::parallel;
  json results = json::object();
  std::size_t replicas = 0;

  CsvWriter csv(const std::vector<std::string>& header) const {
    return CsvWriter(out / "data.csv", header);
  }
};

std::string d(double x) { return format_double(x); }
std::string d(std::size_t x) { return std::to_string(x); }
std::string d(int x) { return std::to_string(x); }

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"std_error", e.std_error}}; }

void require(bool ok, const std::string& check, const std::string& message) {
  if (!ok) throw AssertionBreach(check, message);
}

std::vector<int> cutoffs_or(const RunConfig& c, std::vector<int> fallback) {
  return c.Ns.empty() ? fallback : c.Ns;
}

void run_sigma(Context& ctx) {
  const auto ns = cutoffs_or(ctx.cfg, {16, 32, 64, 128, 256});
  std::vector<double> x, y;
  for (int n : ns) {
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(compute_sigma_N(n, ctx.cfg.bridge));
  }
  const double slope = ns.size() >= 2 ? linear_fit(x, y).slope : std::nan("");
  auto csv = ctx.csv({"N", "sigma_N", "gamma_N", "log_N", "fitted_slope", "target_slope"});
  for (std::size_t i = 0; i < ns.size(); ++i) {
    csv << std::vector<std::string>{d(ns[i]), d(y[i]), d(std::exp(ctx.cfg.beta_sq * y[i] / 2)), d(x[i]),
                                    d(slope), d(1 / (2 * kPi))};
  }
  ctx.results["fitted_slope"] = slope;
  if (ns.size() >= 2) {
    require(std::abs(slope * 2 * kPi - 1) <= 0.1, "sigma_slope",
            "fitted slope " + d(slope) + " not within 10% of 1/(2 pi)");
  }
}

void run_green(Context& ctx) {
  const auto grid = ctx.cfg.grid();
  const auto values = truncated_green_grid(grid, grid.cutoff);
  auto csv = ctx.csv({"k", "r", "G_N", "G_N_plus_log"});
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k <= grid.points_per_axis / 2; ++k) {
    const double r = 2 * kPi * k / grid.points_per_axis;
    const double g = values[static_cast<std::size_t>(k)];
    const double shifted = g + std::log(r + 1.0 / grid.cutoff) / (2 * kPi);
    if (r >= 0.05 && r <= kPi / 2) {
      lo = std::min(lo, shifted);
      hi = std::max(hi, shifted);
    }
    csv << std::vector<std::string>{d(k), d(r), d(g), d(shifted)};
  }
  ctx.results["band"] = {{"c1", lo}, {"c2", hi}};
  if (lo <= hi) require(hi - lo <= 0.5, "green_band", "band width " + d(hi - lo) + " exceeds 0.5");
}

void run_chaos_moments(Context& ctx) {
  const auto grid = ctx.cfg.grid();
  const auto betas = ctx.cfg.beta_sqs.empty() ? std::vector<double>{ctx.cfg.beta_sq} : ctx.cfg.beta_sqs;
  std::vector<GridOffset> offsets;
  for (int k = 1; k <= grid.points_per_axis / 4; k *= 2) offsets.push_back({k, 0});
  const auto rows = chaos_moments(grid, betas, ctx.cfg.samples, offsets, ctx.cfg.seed, ctx.exec);
  ctx.replicas = ctx.cfg.samples;
  auto csv = ctx.csv({"kind", "beta_sq", "N", "k1", "k2", "r", "re", "re_se", "im", "im_se", "predicted"});
  double worst = 0.0;
  for (const auto& row : rows) {
    csv << std::vector<std::string>{"mean", d(row.beta_sq), d(row.N), "0", "0", "0", d(row.mean_re.value),
                                    d(row.mean_re.std_error), d(row.mean_im.value),
                                    d(row.mean_im.std_error), "1"};
    const double dev = std::hypot(row.mean_re.value - 1, row.mean_im.value);
    worst = std::max(worst, dev / std::hypot(row.mean_re.std_error, row.mean_im.std_error));
    for (const auto& tp : row.two_point) {
      csv << std::vector<std::string>{"two_point", d(row.beta_sq), d(row.N), d(tp.offset.k1),
                                      d(tp.offset.k2), d(tp.r), d(tp.re.value), d(tp.re.std_error),
                                      d(tp.im.value), d(tp.im.std_error), d(tp.predicted)};
    }
  }
  ctx.results["max_mean_z"] = worst;
  require(worst <= 3, "mean_one", "E[Theta_N] deviates from 1 by " + d(worst) + " standard errors");
}

void run_chaos_scan(Context& ctx) {
  const auto ns = cutoffs_or(ctx.cfg, {16, 32, 64, 128});
  const auto alphas = ctx.cfg.alphas.empty() ? std::vector<double>{0.1, 0.5} : ctx.cfg.alphas;
  const auto scan = chaos_regularity_scan(ctx.cfg.beta_sq, alphas, ns, ctx.cfg.samples, ctx.cfg.seed,
                                          ctx.exec, ctx.cfg.bridge);
  ctx.replicas = ctx.cfg.samples;
  auto csv = ctx.csv({"alpha", "N", "mean_norm", "std_error"});
  for (const auto& r : scan.rows) {
    csv << std::vector<std::string>{d(r.alpha), d(r.N), d(r.mean_norm.value), d(r.mean_norm.std_error)};
  }
  ctx.results["points_per_axis"] = scan.points_per_axis;
  for (const auto& t : scan.trends) {
    ctx.results["trends"].push_back(
        {{"alpha", t.alpha}, {"slope", t.fit.slope}, {"slope_se", t.fit.slope_se}});
  }
}

void run_gibbs_sample(Context& ctx) {
  const auto target = GibbsTarget::make(ctx.cfg.grid());
  GibbsRunOptions opt;
  opt.samples = ctx.cfg.samples;
  opt.burn_in = ctx.cfg.burn_in;
  opt.thin = ctx.cfg.thin;
  opt.initial_s = ctx.cfg.s;
  RngStream rng(ctx.cfg.seed);
  const auto out = sample_gibbs(target, opt, rng);
  ctx.replicas = out.samples.size();
  const ObservableSet obs(target.grid, false, ctx.cfg.epsilon);
  auto csv = ctx.csv({"sample", "observable", "value"});
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const auto values = obs.evaluate(out.samples[i]);
    for (std::size_t k = 0; k < values.size(); ++k) {
      csv << std::vector<std::string>{d(i), obs.names()[k], d(values[k])};
    }
  }
  save_ensemble(ctx.out / "samples.bin", out.samples, {{"M", target.grid.points_per_axis}, {"N", target.grid.cutoff}});
  ctx.results["acceptance"] = out.acceptance;
  ctx.results["final_s"] = out.final_s;
  ctx.results["warnings"] = out.warnings;
}

void run_logz(Context& ctx) {
  const auto target = GibbsTarget::make(ctx.cfg.grid());
  const std::vector<double> ps{1, 2, 4};
  const auto z = estimate_logZ_mc(target, ctx.cfg.samples, ctx.cfg.seed, ps, ctx.exec);
  ctx.replicas = ctx.cfg.samples;
  const DriftControl zero(target.grid, ctx.cfg.K, ctx.cfg.N_drift);
  DriftOptimizerOptions opt;
  opt.iterations = ctx.cfg.iterations;
  const auto best = optimize_drift(target, zero, opt, ctx.cfg.seed + 1, ctx.exec);
  const auto w0 = variational_objective(zero, target, ctx.cfg.samples, ctx.cfg.seed + 2, ctx.exec);
  const auto w1 = variational_objective(best.eta, target, ctx.cfg.samples, ctx.cfg.seed + 2, ctx.exec);
  const auto diff = variational_difference(best.eta, zero, target, ctx.cfg.samples, ctx.cfg.seed + 2, ctx.exec);

  auto csv = ctx.csv({"quantity", "value", "std_error"});
  csv << std::vector<std::string>{"log_z", d(z.log_z.value), d(z.log_z.std_error)};
  for (const auto& m : z.moments) {
    csv << std::vector<std::string>{"log_lp_norm_" + d(m.p), d(m.log_norm.value), d(m.log_norm.std_error)};
  }
  csv << std::vector<std::string>{"minus_W_zero", d(-w0.value), d(w0.std_error)};
  csv << std::vector<std::string>{"minus_W_optimized", d(-w1.value), d(w1.std_error)};
  csv << std::vector<std::string>{"W_optimized_minus_W_zero", d(diff.value), d(diff.std_error)};
  csv << std::vector<std::string>{"gap_zero", d(z.log_z.value + w0.value), "nan"};
  csv << std::vector<std::string>{"gap_optimized", d(z.log_z.value + w1.value), "nan"};
  ctx.results["optimizer"] = {{"trace", best.trace},
                              {"accepted_steps", best.accepted_steps},
                              {"cost", best.eta.cost()},
                              {"max_y8_ratio", best.max_y8_ratio},
                              {"parameters", best.eta.parameters()}};
  const double bound = z.log_z.value + 3 * z.log_z.std_error;
  require(-w0.value <= bound && -w1.value <= bound, "variational_bound",
          "variational lower bound exceeds log Z + 3 SE");
}

InvarianceOptions invariance_options(const Context& ctx) {
  InvarianceOptions opt;
  opt.horizon = ctx.cfg.T;
  opt.h = ctx.cfg.h;
  opt.replicas = ctx.cfg.replicas;
  opt.burn_in = ctx.cfg.burn_in;
  opt.initial_s = ctx.cfg.s;
  opt.epsilon = ctx.cfg.epsilon;
  opt.seed = ctx.cfg.seed;
  opt.exec = ctx.exec;
  return opt;
}

void run_evolve(Context& ctx) {
  const auto traj = evolve_ensemble(ctx.cfg.grid(), ctx.cfg.model, invariance_options(ctx),
                                    ctx.cfg.snapshot_every);
  ctx.replicas = ctx.cfg.replicas;
  auto csv = ctx.csv({"t", "replica", "observable", "value"});
  for (const auto& r : traj.rows) {
    csv << std::vector<std::string>{d(r.t), d(r.replica), traj.names[r.observable], d(r.value)};
  }
  ctx.results["integrator"] = {{"model", to_string(traj.model)}, {"scheme", traj.scheme}, {"h", traj.h}};
}

void run_invariance(Context& ctx, LinearModel model) {
  const auto opt = invariance_options(ctx);
  const auto rep = model == LinearModel::hyperbolic
                       ? invariance_experiment(ctx.cfg.grid(), opt)
                       : parabolic_invariance_experiment(ctx.cfg.grid(), opt);
  ctx.replicas = rep.replicas;
  auto csv = ctx.csv({"observable", "mean_start", "mean_start_se", "mean_end", "mean_end_se", "z_mean",
                      "z_second", "d1", "d1_se", "d2", "d2_se", "resolved", "halving_ratio"});
  for (const auto& o : rep.observables) {
    csv << std::vector<std::string>{o.name, d(o.mean_start.value), d(o.mean_start.std_error),
                                    d(o.mean_end.value), d(o.mean_end.std_error), d(o.z_mean),
                                    d(o.z_second), d(o.d1.value), d(o.d1.std_error), d(o.d2.value),
                                    d(o.d2.std_error), o.resolved ? "1" : "0", d(o.halving_ratio)};
  }
  ctx.results["integrator"] = {{"model", to_string(model)}, {"scheme", "exponential-euler"}, {"h", rep.h}};
  ctx.results["max_abs_z"] = rep.max_abs_z;
  ctx.results["resolved"] = rep.resolved;
  ctx.results["halving_ok"] = rep.halving_ok;
  ctx.results["mean_acceptance"] = rep.mean_acceptance;
  ctx.results["warnings"] = rep.warnings;
  require(rep.max_abs_z <= 3, "invariance_z", "max |z| = " + d(rep.max_abs_z) + " exceeds 3");
}

void run_dpd(Context& ctx) {
  const auto hs = ctx.cfg.hs.empty()
                      ? std::vector<double>{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512}
                      : ctx.cfg.hs;
  const auto study = dpd_consistency_study(ctx.cfg.grid(), ctx.cfg.T, hs, ctx.cfg.h_ref, ctx.cfg.replicas,
                                           ctx.cfg.alpha, ctx.cfg.seed, ctx.exec);
  ctx.replicas = ctx.cfg.replicas;
  auto csv = ctx.csv({"h", "error", "std_error", "identity_defect"});
  double defect = 0.0;
  for (const auto& l : study.levels) {
    csv << std::vector<std::string>{d(l.h), d(l.error.value), d(l.error.std_error), d(l.identity_defect)};
    defect = std::max(defect, l.identity_defect);
  }
  ctx.results["order"] = {{"slope", study.order.slope}, {"slope_se", study.order.slope_se}};
  require(defect <= 1e-10, "dpd_identity", "equal-step identity defect " + d(defect));
  require(study.order.slope >= 0.8, "dpd_order", "observed order " + d(study.order.slope) + " below 0.8");
}

void run_picard(Context& ctx) {
  const auto steps = static_cast<std::size_t>(std::llround(ctx.cfg.T / ctx.cfg.h));
  RngStream rng(ctx.cfg.seed);
  const auto path = stationary_theta_path(ctx.cfg.grid(), steps, ctx.cfg.h, rng);
  const auto rep = picard_diagnostic(path, ctx.cfg.h, static_cast<int>(ctx.cfg.picard_iterations), ctx.cfg.alpha);
  auto csv = ctx.csv({"iteration", "difference", "ratio"});
  for (std::size_t k = 0; k < rep.differences.size(); ++k) {
    csv << std::vector<std::string>{d(k), d(rep.differences[k]),
                                    k == 0 ? "nan" : d(rep.ratios[k - 1])};
  }
  for (std::size_t k = 0; k < std::min<std::size_t>(4, rep.ratios.size()); ++k) {
    require(rep.ratios[k] < 1, "picard_contraction", "ratio " + d(rep.ratios[k]) + " not below 1");
  }
}

json manifest_base(const Context& ctx, const std::string& sub) {
  const auto text = serialize_config(ctx.cfg);
  json m;
  m["subcommand"] = sub;
  m["version"] = kVersion;
  m["config"] = text;
  m["config_hash"] = git_blob_hash(text);
  m["seed"] = ctx.cfg.seed;
  m["execution"] = to_string(ctx.exec);
  const auto consts = RenormConstants::for_grid(ctx.cfg.grid());
  m["sigma_N"] = consts.sigma_N;
  m["gamma_N"] = consts.gamma_N;
  m["cutoff_bridge"] = to_string(ctx.cfg.bridge);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral sine-Gordon toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
  bool serial = false;

  const std::vector<std::string> names{"sigma", "green", "chaos-moments", "chaos-scan", "gibbs-sample",
                                       "logz", "evolve", "invariance", "invariance-parabolic",
                                       "dpd-check", "picard"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed);
    sub->add_option("--out", out_dir, "output directory (default $SG2D_OUT_DIR or ./sg2d_out)");
    sub->add_option("--replicas", replicas, "ensemble size; overrides replicas and samples");
    sub->add_flag("--serial", serial, "run replicas on one thread");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  Context ctx;
  try {
    ctx.cfg = parse_config(config_path);
    if (seed) ctx.cfg.seed = *seed;
    if (replicas) ctx.cfg.replicas = ctx.cfg.samples = *replicas;
    ctx.cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "sg2d: " << e.what() << "\n";
    return 2;
  }
  ctx.exec = serial ? Execution::serial : Execution::parallel;
  if (!out_dir.empty()) {
    ctx.out = out_dir;
  } else if (!ctx.cfg.out_dir.empty()) {
    ctx.out = ctx.cfg.out_dir;
  } else if (const char* env = std::getenv("SG2D_OUT_DIR")) {
    ctx.out = env;
  } else {
    ctx.out = "sg2d_out";
  }
  ctx.out /= sub;
  fs::create_directories(ctx.out);
  ctx.replicas = ctx.cfg.replicas;

  json manifest = manifest_base(ctx, sub);
  int status = 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (sub == "sigma") run_sigma(ctx);
    else if (sub == "green") run_green(ctx);
    else if (sub == "chaos-moments") run_chaos_moments(ctx);
    else if (sub == "chaos-scan") run_chaos_scan(ctx);
    else if (sub == "gibbs-sample") run_gibbs_sample(ctx);
    else if (sub == "logz") run_logz(ctx);
    else if (sub == "evolve") run_evolve(ctx);
    else if (sub == "invariance") run_invariance(ctx, LinearModel::hyperbolic);
    else if (sub == "invariance-parabolic") run_invariance(ctx, LinearModel::parabolic);
    else if (sub == "dpd-check") run_dpd(ctx);
    else if (sub == "picard") run_picard(ctx);
    manifest["status"] = "ok";
  } catch (const AssertionBreach& e) {
    manifest["status"] = "assertion_failed";
    manifest["failure"] = {{"check", e.check}, {"message", e.what()}};
    std::cerr << "sg2d " << sub << ": " << e.check << ": " << e.what() << "\n";
    status = 1;
  } catch (const std::exception& e) {
    manifest["status"] = "error";
    manifest["failure"] = {{"check", "exception"}, {"message", e.what()}};
    std::cerr << "sg2d " << sub << ": " << e.what() << "\n";
    status = 2;
  }
  manifest["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["replicas"] = ctx.replicas;
  manifest["results"] = ctx.results;
  write_json(ctx.out / "manifest.json", manifest);
  return status;
}
