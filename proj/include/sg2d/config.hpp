#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sg2d/gaussian.hpp"
#include "sg2d/grid.hpp"

namespace sg2d {

/// Flat key = value run description. Required keys: N, beta_sq.
struct RunConfig {
  int N = 0;
  int M = 0;  // 0 means 4 N
  double beta_sq = 0.0;
  double coupling = 1.0;
  CutoffBridge bridge = CutoffBridge::smooth_exponential;
  LinearModel model = LinearModel::hyperbolic;

  double h = 1.0 / 128.0;
  double T = 5.0;
  double h_ref = 1.0 / 4096.0;
  std::size_t replicas = 2000;
  std::size_t samples = 10000;
  std::size_t snapshot_every = 16;

  double s = 0.2;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;

  int K = 4;
  int N_drift = 0;  // 0 means min(N, 2)
  std::size_t iterations = 40;
  std::size_t picard_iterations = 6;

  double alpha = 0.4;
  double epsilon = 0.1;
  std::vector<int> Ns;
  std::vector<double> alphas;
  std::vector<double> beta_sqs;
  std::vector<double> hs;

  std::uint64_t seed = 1;
  std::string out_dir;

  GridSpec grid() const;
  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws std::invalid_argument on syntax errors, unknown keys (with a
/// suggestion), missing required keys and invariant violations.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

/// Lossless: parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

std::vector<std::string> config_keys();

}  // namespace sg2d
