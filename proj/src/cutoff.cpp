#include "sg2d/cutoff.hpp"

#include <cmath>

namespace sg2d {

namespace {

double exp_bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double CutoffProfile::operator()(double r) const {
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  const double t = 2.0 * r - 1.0;
  switch (bridge_) {
    case CutoffBridge::smooth_exponential: {
      const double a = exp_bump(1.0 - t);
      const double b = exp_bump(t);
      return a / (a + b);
    }
    case CutoffBridge::quintic_polynomial:
      return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }
  return 0.0;
}

double CutoffProfile::at_mode(double n_norm_sq, int cutoff) const {
  return (*this)(std::sqrt(n_norm_sq) / cutoff);
}

std::vector<double> cutoff_symbol(const GridSpec& grid, int cutoff) {
  const CutoffProfile chi(grid.bridge);
  std::vector<double> symbol(grid.size());
  for (std::size_t idx = 0; idx < symbol.size(); ++idx) {
    symbol[idx] = grid.touches_nyquist(idx) ? 0.0 : chi.at_mode(grid.mode_norm_sq(idx), cutoff);
  }
  return symbol;
}

}  // namespace sg2d
