#pragma once

#include <vector>

#include "sg2d/grid.hpp"

namespace sg2d {

/// Radial profile chi of the smooth frequency projector P_N.
///
/// chi(r) = 1 for r <= 1/2, chi(r) = 0 for r >= 1, and a non-increasing bridge
/// in between. The default bridge is the C-infinity partition
///   chi(r) = f(1 - t) / (f(1 - t) + f(t)),  t = 2r - 1,  f(t) = exp(-1/t),
/// the alternative is the C2 quintic smoothstep. Both are used to measure
/// cutoff sensitivity.
class CutoffProfile {
 public:
  explicit CutoffProfile(CutoffBridge bridge = CutoffBridge::smooth_exponential)
      : bridge_(bridge) {}

  double operator()(double r) const;

  /// chi_N(n) = chi(|n| / N)
  double at_mode(double n_norm_sq, int cutoff) const;

  CutoffBridge bridge() const { return bridge_; }

 private:
  CutoffBridge bridge_;
};

/// chi_N evaluated on every storage index of the grid (zero on Nyquist lines).
std::vector<double> cutoff_symbol(const GridSpec& grid, int cutoff);

}  // namespace sg2d
