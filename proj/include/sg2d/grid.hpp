#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

namespace sg2d {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kTorusArea = kTwoPi * kTwoPi;

/// Radial bridge used by the smooth frequency cutoff between r = 1/2 and r = 1.
enum class CutoffBridge {
  smooth_exponential,  ///< C-infinity partition built from exp(-1/t)
  quintic_polynomial,  ///< C2 smoothstep 1 - (6t^5 - 15t^4 + 10t^3)
};

std::string to_string(CutoffBridge bridge);
CutoffBridge cutoff_bridge_from_string(const std::string& name);

/// Discretization of the torus [0, 2pi)^2 and the model parameters tied to it.
///
/// Coefficients are stored as a full M x M array in FFT order: storage index k
/// maps to wavenumber k for k < M/2 and k - M otherwise. The Nyquist row and
/// column (k = M/2) exist in storage so that transforms round-trip, but every
/// sampler and projector leaves them at zero.
struct GridSpec {
  int points_per_axis = 0;  // M
  int cutoff = 0;           // N
  double beta_sq = 0.0;
  double coupling = 1.0;
  CutoffBridge bridge = CutoffBridge::smooth_exponential;

  /// Default M = 4N.
  static GridSpec make(int cutoff, double beta_sq, int points_per_axis = 0, double coupling = 1.0,
                       CutoffBridge bridge = CutoffBridge::smooth_exponential);

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  double beta() const { return std::sqrt(beta_sq); }
  double spacing() const { return kTwoPi / points_per_axis; }
  double cell_area() const { return spacing() * spacing(); }
  std::size_t size() const {
    return static_cast<std::size_t>(points_per_axis) * static_cast<std::size_t>(points_per_axis);
  }

  int wavenumber(int k) const { return k < points_per_axis / 2 ? k : k - points_per_axis; }
  int storage_of(int n) const { return n >= 0 ? n : n + points_per_axis; }
  bool is_nyquist(int k) const { return k == points_per_axis / 2; }

  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(k1) * static_cast<std::size_t>(points_per_axis) +
           static_cast<std::size_t>(k2);
  }
  /// Storage index of the wavenumber pair (n1, n2); both must satisfy |n_i| <= M/2.
  std::size_t index_of_mode(int n1, int n2) const { return index(storage_of(n1), storage_of(n2)); }
  /// Storage index of -n (mod M).
  std::size_t conjugate_index(std::size_t idx) const;
  /// |n|^2 of the wavenumber stored at idx.
  double mode_norm_sq(std::size_t idx) const;
  bool touches_nyquist(std::size_t idx) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// <n> = (1 + |n|^2)^{1/2}
inline double japanese_bracket(double n_norm_sq) { return std::sqrt(1.0 + n_norm_sq); }

}  // namespace sg2d
