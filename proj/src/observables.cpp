#include "sg2d/observables.hpp"

#include <algorithm>
#include <cmath>

#include "sg2d/cutoff.hpp"
#include "sg2d/stats.hpp"

namespace sg2d {

ObservableSet::ObservableSet(const GridSpec& grid, bool with_velocity, double epsilon)
    : grid_(grid),
      with_velocity_(with_velocity),
      epsilon_(epsilon),
      projector_(cutoff_symbol(grid, grid.cutoff)),
      half_projector_(cutoff_symbol(grid, std::max(1, grid.cutoff / 2))) {
  names_ = {"cos_integral", "low_band_l2"};
  if (with_velocity_) names_.push_back("velocity_neg");
  for (int n1 = 0; n1 <= 2; ++n1) {
    for (int n2 = (n1 == 0 ? 0 : -2); n2 <= 2; ++n2) {
      if (n1 * n1 + n2 * n2 > 4) continue;
      low_modes_.emplace_back(n1, n2);
      const std::string tag = "u(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
      names_.push_back(tag + ".re");
      if (n1 != 0 || n2 != 0) names_.push_back(tag + ".im");
    }
  }
}

std::vector<double> ObservableSet::evaluate(const FourierField& u, const FourierField& v) const {
  std::vector<double> out;
  out.reserve(names_.size());

  const auto values = inverse_transform(apply_symbol(u, projector_));
  const double beta = grid_.beta();
  CompensatedSum cos_sum;
  for (double x : values) cos_sum.add(std::cos(beta * x));
  out.push_back(grid_.cell_area() * cos_sum.value());

  const double low = sobolev_norm(apply_symbol(u, half_projector_), 0.0);
  out.push_back(low * low);

  if (with_velocity_) {
    const double vn = sobolev_norm(v, -epsilon_);
    out.push_back(vn * vn);
  }
  for (const auto& [n1, n2] : low_modes_) {
    const Complex c = u.mode(n1, n2);
    out.push_back(c.real());
    if (n1 != 0 || n2 != 0) out.push_back(c.imag());
  }
  return out;
}

}  // namespace sg2d
