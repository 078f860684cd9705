#pragma once

#include <string>
#include <vector>

#include "sg2d/chaos.hpp"
#include "sg2d/fourier_field.hpp"

namespace sg2d {

/// Witness functionals for invariance tests:
///   cos_integral   int cos(beta P_N u) dx
///   low_band_l2    ||P_{N/2} u||_{L^2}^2
///   velocity_neg   ||v||_{H^{-epsilon}}^2       (hyperbolic only)
///   u(n)           real and imaginary parts for |n| <= 2, upper half plane
class ObservableSet {
 public:
  ObservableSet(const GridSpec& grid, bool with_velocity, double epsilon = 0.1);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  double epsilon() const { return epsilon_; }
  bool with_velocity() const { return with_velocity_; }

  /// v is ignored (may be empty) when the set has no velocity observable.
  std::vector<double> evaluate(const FourierField& u, const FourierField& v) const;
  std::vector<double> evaluate(const FourierField& u) const { return evaluate(u, FourierField()); }

 private:
  GridSpec grid_;
  bool with_velocity_;
  double epsilon_;
  std::vector<double> projector_;
  std::vector<double> half_projector_;
  std::vector<std::pair<int, int>> low_modes_;
  std::vector<std::string> names_;
};

}  // namespace sg2d
