#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lplab {

struct ProportionEstimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double frequency = 0;
  double wilson_lo = 0;
  double wilson_hi = 1;
};

/// Wilson score interval at z standard deviations (default 95%).
ProportionEstimate wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov distribution survival function Q(lambda) = P{K > lambda}.
double kolmogorov_survival(double lambda);

/// Pearson correlation of two equally long samples.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace lplab
