#include "sg2d/green.hpp"

#include <cmath>

#include "sg2d/cutoff.hpp"
#include "sg2d/fourier_field.hpp"

namespace sg2d {

double truncated_green(double x1, double x2, int cutoff, CutoffBridge bridge) {
  const CutoffProfile chi(bridge);
  double sum = 0.0;
  for (int n1 = -cutoff; n1 <= cutoff; ++n1) {
    for (int n2 = -cutoff; n2 <= cutoff; ++n2) {
      const double nsq = static_cast<double>(n1 * n1 + n2 * n2);
      const double c = chi.at_mode(nsq, cutoff);
      if (c == 0.0) continue;
      sum += c * c / (1.0 + nsq) * std::cos(n1 * x1 + n2 * x2);
    }
  }
  return sum / kTorusArea;
}

std::vector<double> truncated_green_grid(const GridSpec& grid, int cutoff) {
  const auto chi = cutoff_symbol(grid, cutoff);
  FourierField kernel(grid);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    kernel[i] = chi[i] * chi[i] / (1.0 + grid.mode_norm_sq(i)) / kTwoPi;
  }
  return inverse_transform(kernel);
}

}  // namespace sg2d
