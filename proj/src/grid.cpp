#include "sg2d/grid.hpp"

#include <stdexcept>

namespace sg2d {

std::string to_string(CutoffBridge bridge) {
  switch (bridge) {
    case CutoffBridge::smooth_exponential:
      return "smooth_exponential";
    case CutoffBridge::quintic_polynomial:
      return "quintic_polynomial";
  }
  return "unknown";
}

CutoffBridge cutoff_bridge_from_string(const std::string& name) {
  if (name == "smooth_exponential") return CutoffBridge::smooth_exponential;
  if (name == "quintic_polynomial") return CutoffBridge::quintic_polynomial;
  throw std::invalid_argument("unknown cutoff bridge '" + name +
                              "' (expected smooth_exponential or quintic_polynomial)");
}

GridSpec GridSpec::make(int cutoff, double beta_sq, int points_per_axis, double coupling,
                        CutoffBridge bridge) {
  GridSpec grid;
  grid.cutoff = cutoff;
  grid.points_per_axis = points_per_axis > 0 ? points_per_axis : 4 * cutoff;
  grid.beta_sq = beta_sq;
  grid.coupling = coupling;
  grid.bridge = bridge;
  grid.validate();
  return grid;
}

void GridSpec::validate() const {
  if (cutoff < 1) {
    throw std::invalid_argument("cutoff N must be a positive integer (got " +
                                std::to_string(cutoff) + ")");
  }
  if (points_per_axis <= 0 || points_per_axis % 2 != 0) {
    throw std::invalid_argument("points_per_axis M must be a positive even integer (got " +
                                std::to_string(points_per_axis) + ")");
  }
  if (points_per_axis < 2 * cutoff + 2) {
    throw std::invalid_argument("Nyquist invariant violated: M >= 2N + 2 required (M = " +
                                std::to_string(points_per_axis) +
                                ", N = " + std::to_string(cutoff) + ")");
  }
  // beta_sq == 0 is admitted as the degenerate free-field case.
  if (!(beta_sq >= 0.0) || !std::isfinite(beta_sq)) {
    throw std::invalid_argument("beta_sq must be finite and non-negative");
  }
  if (!std::isfinite(coupling)) {
    throw std::invalid_argument("coupling must be finite");
  }
}

std::size_t GridSpec::conjugate_index(std::size_t idx) const {
  const auto m = static_cast<std::size_t>(points_per_axis);
  const std::size_t k1 = idx / m;
  const std::size_t k2 = idx % m;
  return ((m - k1) % m) * m + (m - k2) % m;
}

double GridSpec::mode_norm_sq(std::size_t idx) const {
  const auto m = static_cast<std::size_t>(points_per_axis);
  const double n1 = wavenumber(static_cast<int>(idx / m));
  const double n2 = wavenumber(static_cast<int>(idx % m));
  return n1 * n1 + n2 * n2;
}

bool GridSpec::touches_nyquist(std::size_t idx) const {
  const auto m = static_cast<std::size_t>(points_per_axis);
  return is_nyquist(static_cast<int>(idx / m)) || is_nyquist(static_cast<int>(idx % m));
}

}  // namespace sg2d
