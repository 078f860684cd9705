#include "sg2d/fourier_field.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "sg2d/cutoff.hpp"

namespace sg2d {

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.points_per_axis != b.points_per_axis) {
    throw std::invalid_argument("fields live on different grids");
  }
}

void require_size(std::size_t got, const GridSpec& grid) {
  if (got != grid.size()) {
    throw std::invalid_argument("array has " + std::to_string(got) + " entries, grid expects " +
                                std::to_string(grid.size()));
  }
}

}  // namespace

void FourierField::set_real_mode(int n1, int n2, Complex value) {
  const std::size_t idx = grid_.index_of_mode(n1, n2);
  const std::size_t conj_idx = grid_.conjugate_index(idx);
  if (idx == conj_idx) {
    coeffs_[idx] = Complex(value.real(), 0.0);
  } else {
    coeffs_[idx] = value;
    coeffs_[conj_idx] = std::conj(value);
  }
}

double FourierField::hermitian_defect() const {
  double defect = 0.0;
  for (std::size_t idx = 0; idx < coeffs_.size(); ++idx) {
    defect = std::max(defect, std::abs(coeffs_[idx] - std::conj(coeffs_[grid_.conjugate_index(idx)])));
  }
  return defect;
}

FourierField& FourierField::operator+=(const FourierField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

FourierField& FourierField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

FourierField forward_transform(std::span<const double> point_values, const GridSpec& grid) {
  require_size(point_values.size(), grid);
  FourierField field(grid);
  detail::fft_forward_real(grid.points_per_axis, point_values.data(), field.coefficients().data());
  const double scale = grid.cell_area() / kTwoPi;
  for (auto& c : field.coefficients()) c *= scale;
  return field;
}

std::vector<double> inverse_transform(const FourierField& field) {
  std::vector<double> values(field.size());
  detail::fft_inverse_real(field.grid().points_per_axis, field.coefficients().data(), values.data());
  const double scale = 1.0 / kTwoPi;
  for (auto& v : values) v *= scale;
  return values;
}

FourierField forward_transform_complex(std::span<const Complex> point_values, const GridSpec& grid) {
  require_size(point_values.size(), grid);
  FourierField field(grid);
  detail::fft_complex(grid.points_per_axis, point_values.data(), field.coefficients().data(), -1);
  const double scale = grid.cell_area() / kTwoPi;
  for (auto& c : field.coefficients()) c *= scale;
  return field;
}

std::vector<Complex> inverse_transform_complex(const FourierField& field) {
  std::vector<Complex> values(field.size());
  detail::fft_complex(field.grid().points_per_axis, field.coefficients().data(), values.data(), +1);
  const double scale = 1.0 / kTwoPi;
  for (auto& v : values) v *= scale;
  return values;
}

FourierField apply_symbol(const FourierField& field, std::span<const double> symbol) {
  require_size(symbol.size(), field.grid());
  FourierField out = field;
  auto coeffs = out.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= symbol[i];
  return out;
}

FourierField apply_cutoff_projector(const FourierField& field, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("projector cutoff must be >= 1");
  return apply_symbol(field, cutoff_symbol(field.grid(), cutoff));
}

FourierField apply_bessel_potential(const FourierField& field, double s) {
  FourierField out = field;
  const GridSpec& grid = field.grid();
  auto coeffs = out.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] *= std::pow(1.0 + grid.mode_norm_sq(i), 0.5 * s);
  }
  return out;
}

double sobolev_norm(const FourierField& field, double s) {
  const GridSpec& grid = field.grid();
  const auto coeffs = field.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    sum += std::pow(1.0 + grid.mode_norm_sq(i), s) * std::norm(coeffs[i]);
  }
  return std::sqrt(sum);
}

double neg_sobolev_sup_norm(const FourierField& field, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("neg_sobolev_sup_norm requires alpha > 0");
  const auto smoothed = inverse_transform_complex(apply_bessel_potential(field, -alpha));
  double sup = 0.0;
  for (const auto& v : smoothed) sup = std::max(sup, std::abs(v));
  return sup;
}

double grid_l2_norm(std::span<const double> point_values, const GridSpec& grid) {
  require_size(point_values.size(), grid);
  double sum = 0.0;
  for (double v : point_values) sum += v * v;
  return std::sqrt(grid.cell_area() * sum);
}

}  // namespace sg2d
