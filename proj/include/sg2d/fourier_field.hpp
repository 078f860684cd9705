#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sg2d/grid.hpp"

namespace sg2d {

using Complex = std::complex<double>;

/// Fourier coefficients of a field on T^2 in the orthonormal basis
/// e_n(x) = (2pi)^{-1} exp(i n.x), stored in FFT order (see GridSpec).
///
/// Real fields satisfy u(-n) = conj(u(n)); complex fields such as the chaos
/// are representable too, they are simply not Hermitian.
class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(const GridSpec& grid) : grid_(grid), coeffs_(grid.size()) {}

  const GridSpec& grid() const { return grid_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  std::span<Complex> coefficients() { return coeffs_; }
  std::span<const Complex> coefficients() const { return coeffs_; }

  Complex& operator[](std::size_t idx) { return coeffs_[idx]; }
  const Complex& operator[](std::size_t idx) const { return coeffs_[idx]; }

  Complex mode(int n1, int n2) const { return coeffs_[grid_.index_of_mode(n1, n2)]; }
  /// Sets u(n) = value and u(-n) = conj(value); value must be real when n = -n.
  void set_real_mode(int n1, int n2, Complex value);

  /// Largest |u(n) - conj(u(-n))|; exactly zero for fields built by this library.
  double hermitian_defect() const;
  bool is_hermitian(double tolerance = 0.0) const { return hermitian_defect() <= tolerance; }

  FourierField& operator+=(const FourierField& other);
  FourierField& operator-=(const FourierField& other);
  FourierField& operator*=(double scale);

  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(double s, FourierField a) { return a *= s; }

 private:
  GridSpec grid_{};
  std::vector<Complex> coeffs_;
};

/// Point values on the M x M grid (row-major, x_j = 2pi j / M) to coefficients.
/// Throws std::invalid_argument when the array size does not match the grid.
FourierField forward_transform(std::span<const double> point_values, const GridSpec& grid);
std::vector<double> inverse_transform(const FourierField& field);

FourierField forward_transform_complex(std::span<const Complex> point_values, const GridSpec& grid);
std::vector<Complex> inverse_transform_complex(const FourierField& field);

/// Multiplies by chi_N(n). Output vanishes for |n| >= N, unchanged for |n| <= N/2.
FourierField apply_cutoff_projector(const FourierField& field, int cutoff);
/// Multiplies by an arbitrary per-index symbol.
FourierField apply_symbol(const FourierField& field, std::span<const double> symbol);
/// Multiplies by <n>^s.
FourierField apply_bessel_potential(const FourierField& field, double s);

/// ( sum_n <n>^{2s} |u(n)|^2 )^{1/2}
double sobolev_norm(const FourierField& field, double s);

/// Grid sup of |<grad>^{-alpha} u|; proxy for the W^{-alpha,infty} norm.
double neg_sobolev_sup_norm(const FourierField& field, double alpha);

/// ( cell_area * sum_j |f(x_j)|^2 )^{1/2}
double grid_l2_norm(std::span<const double> point_values, const GridSpec& grid);

}  // namespace sg2d
