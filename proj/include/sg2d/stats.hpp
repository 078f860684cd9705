#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sg2d {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Neumaier-compensated sum. Reductions are always performed in replica order
/// so serial and OpenMP runs agree to the last bit.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

class RunningMoments {
 public:
  void add(double x);
  std::size_t count() const { return count_; }
  double mean() const;
  /// Unbiased sample variance.
  double variance() const;
  double std_error() const;
  Estimate estimate() const { return {mean(), std_error()}; }

 private:
  std::size_t count_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum_sq_;
};

Estimate mean_estimate(std::span<const double> values);

/// Weighted least squares y = intercept + slope * x with weights 1/se^2.
/// The slope standard error is the model-based one, sqrt(1 / S_xx).
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> y_se);
/// Ordinary least squares; slope_se from residual scatter (zero when n <= 2).
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// sup_x |F_n(x) - F(x)| for a sample and a continuous reference CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Potential scale reduction factor for m >= 2 chains of equal length.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

/// log(mean(exp(values))) with the delta-method standard error.
Estimate log_mean_exp(std::span<const double> values);

}  // namespace sg2d
