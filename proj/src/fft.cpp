#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace sg2d::detail {

namespace {

enum class PlanKind { r2c, c2r, c2c_forward, c2c_backward };

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int m, PlanKind kind) {
    const std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(m, kind);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const auto n = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    auto* real = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* a = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* b = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::r2c:
        plan = fftw_plan_dft_r2c_2d(m, m, real, a, flags);
        break;
      case PlanKind::c2r:
        plan = fftw_plan_dft_c2r_2d(m, m, a, real, flags);
        break;
      case PlanKind::c2c_forward:
        plan = fftw_plan_dft_2d(m, m, a, b, FFTW_FORWARD, flags);
        break;
      case PlanKind::c2c_backward:
        plan = fftw_plan_dft_2d(m, m, a, b, FFTW_BACKWARD, flags);
        break;
    }
    fftw_free(real);
    fftw_free(a);
    fftw_free(b);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, PlanKind>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void fft_forward_real(int m, const double* in, Complex* full_out) {
  const auto mm = static_cast<std::size_t>(m);
  const std::size_t half = mm / 2 + 1;
  thread_local std::vector<double> input;
  thread_local std::vector<Complex> packed;
  input.assign(in, in + mm * mm);
  packed.resize(mm * half);
  fftw_execute_dft_r2c(cache().get(m, PlanKind::r2c), input.data(), as_fftw(packed.data()));
  for (std::size_t k1 = 0; k1 < mm; ++k1) {
    for (std::size_t k2 = 0; k2 < half; ++k2) full_out[k1 * mm + k2] = packed[k1 * half + k2];
    for (std::size_t k2 = half; k2 < mm; ++k2) {
      full_out[k1 * mm + k2] = std::conj(packed[((mm - k1) % mm) * half + (mm - k2)]);
    }
  }
}

void fft_inverse_real(int m, const Complex* full_in, double* out) {
  const auto mm = static_cast<std::size_t>(m);
  const std::size_t half = mm / 2 + 1;
  thread_local std::vector<Complex> packed;
  packed.resize(mm * half);
  for (std::size_t k1 = 0; k1 < mm; ++k1) {
    for (std::size_t k2 = 0; k2 < half; ++k2) packed[k1 * half + k2] = full_in[k1 * mm + k2];
  }
  fftw_execute_dft_c2r(cache().get(m, PlanKind::c2r), as_fftw(packed.data()), out);
}

void fft_complex(int m, const Complex* in, Complex* out, int sign) {
  const auto mm = static_cast<std::size_t>(m);
  thread_local std::vector<Complex> input;
  input.assign(in, in + mm * mm);
  const PlanKind kind = sign < 0 ? PlanKind::c2c_forward : PlanKind::c2c_backward;
  fftw_execute_dft(cache().get(m, kind), as_fftw(input.data()), as_fftw(out));
}

}  // namespace sg2d::detail
