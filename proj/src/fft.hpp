#pragma once

#include <complex>

// Thin wrapper over FFTW. Plans are created once per (size, kind) behind a
// mutex and never mutated afterwards; execution uses the new-array interface,
// which FFTW guarantees to be thread-safe.
namespace sg2d::detail {

using Complex = std::complex<double>;

/// Unnormalized forward DFT of a real M x M array into the full M x M spectrum.
void fft_forward_real(int m, const double* in, Complex* full_out);

/// Unnormalized inverse DFT of a Hermitian M x M spectrum into real values.
/// Only the non-redundant half of the spectrum is read.
void fft_inverse_real(int m, const Complex* full_in, double* out);

/// Unnormalized complex DFT; sign = -1 forward, +1 backward.
void fft_complex(int m, const Complex* in, Complex* out, int sign);

}  // namespace sg2d::detail
