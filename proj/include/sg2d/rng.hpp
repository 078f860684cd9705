#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace sg2d {

/// Reproducible random stream identified by (seed, replica index).
///
/// The pair is expanded through std::seed_seq into the full Mersenne Twister
/// state, so distinct pairs give unrelated streams and the same pair replays
/// the identical sample path.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t replica = 0);

  double normal() {
    ++draws_;
    return normal_(engine_);
  }
  double uniform() {
    ++draws_;
    return uniform_(engine_);
  }
  /// Standard complex Gaussian: independent real and imaginary parts of variance 1/2.
  std::complex<double> complex_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica() const { return replica_; }
  /// Number of variates drawn so far.
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t replica_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

}  // namespace sg2d
