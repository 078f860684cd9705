#include "sg2d/stats.hpp"
#include "sg2d/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sg2d {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

void RunningMoments::add(double x) {
  ++count_;
  sum_.add(x);
  sum_sq_.add(x * x);
}

double RunningMoments::mean() const { return count_ ? sum_.value() / count_ : 0.0; }

double RunningMoments::variance() const {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double m = mean();
  return std::max(0.0, (sum_sq_.value() - n * m * m) / (n - 1.0));
}

double RunningMoments::std_error() const {
  return count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

Estimate mean_estimate(std::span<const double> values) {
  // Two-pass for accuracy on large offsets.
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double n = static_cast<double>(values.size());
  const double mean = sum.value() / n;
  CompensatedSum dev;
  for (double v : values) dev.add((v - mean) * (v - mean));
  const double var = values.size() > 1 ? dev.value() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> y_se) {
  if (x.size() != y.size() || x.size() != y_se.size() || x.size() < 2) {
    throw std::invalid_argument("weighted_linear_fit needs matching arrays of length >= 2");
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (y_se[i] * y_se[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (y_se[i] * y_se[i]);
    sxx += w * (x[i] - xm) * (x[i] - xm);
    sxy += w * (x[i] - xm) * (y[i] - ym);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  fit.slope_se = std::sqrt(1.0 / sxx);
  return fit;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_fit needs matching arrays of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_distance on empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("gelman_rubin needs >= 2 chains");
  const std::size_t n = chains.front().size();
  if (n < 2) throw std::invalid_argument("gelman_rubin needs chains of length >= 2");
  const double m = static_cast<double>(chains.size());
  std::vector<double> means;
  double within = 0.0;
  for (const auto& chain : chains) {
    if (chain.size() != n) throw std::invalid_argument("gelman_rubin chains differ in length");
    const Estimate e = mean_estimate(chain);
    means.push_back(e.value);
    within += e.std_error * e.std_error * static_cast<double>(n);
  }
  within /= m;
  const Estimate grand = mean_estimate(means);
  const double between = grand.std_error * grand.std_error * m * static_cast<double>(n);
  const double nn = static_cast<double>(n);
  const double pooled = (nn - 1.0) / nn * within + between / nn;
  return std::sqrt(pooled / within);
}

Estimate log_mean_exp(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("log_mean_exp on empty input");
  const double shift = *std::max_element(values.begin(), values.end());
  std::vector<double> w(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) w[i] = std::exp(values[i] - shift);
  const Estimate m = mean_estimate(w);
  return {shift + std::log(m.value), m.std_error / m.value};
}

}  // namespace sg2d

namespace sg2d {

std::string to_string(Execution exec) { return exec == Execution::serial ? "serial" : "parallel"; }

}  // namespace sg2d
