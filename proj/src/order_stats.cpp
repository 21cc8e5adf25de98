#include "lplab/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "lplab/gauss.hpp"

namespace lplab {

namespace {

// log sum exp over terms spanning hundreds of e-folds: shift by the max and
// add the small terms first with Neumaier compensation.
double log_sum_exp_sorted(std::vector<double> logs) {
  const double lmax = *std::max_element(logs.begin(), logs.end());
  if (lmax == -kInf) return -kInf;
  for (double& l : logs) l = std::exp(l - lmax);
  std::sort(logs.begin(), logs.end());
  double sum = 0, comp = 0;
  for (double t : logs) {
    const double s = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return lmax + std::log(sum + comp);
}

void check_n_i(std::int64_t n, std::int64_t i) {
  if (n < 1 || i < 1 || i > n) throw DomainError("order statistic: need 1 <= i <= n");
}

}  // namespace

double log_orderstat_cdf_exact(std::int64_t n, std::int64_t i, double beta) {
  check_n_i(n, i);
  if (!(beta > 0 && beta < 1)) throw DomainError("orderstat_cdf_exact: beta must lie in (0, 1)");
  const double lb = std::log(beta);
  const double l1b = std::log1p(-beta);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(i));
  double log_choose = 0;  // log C(n, j), by C(n, j+1) = C(n, j) (n-j)/(j+1)
  for (std::int64_t j = 0; j < i; ++j) {
    terms.push_back(log_choose + static_cast<double>(j) * lb + static_cast<double>(n - j) * l1b);
    log_choose += std::log(static_cast<double>(n - j) / static_cast<double>(j + 1));
  }
  return std::min(0.0, log_sum_exp_sorted(std::move(terms)));
}

double chernoff_bound(std::int64_t n, std::int64_t i, double beta) {
  return std::exp(log_chernoff_bound(n, i, beta));
}

double log_chernoff_bound(std::int64_t n, std::int64_t i, double beta) {
  check_n_i(n, i);
  if (!(beta > 0 && beta < 1)) throw DomainError("chernoff_bound: beta must lie in (0, 1)");
  const double bn = beta * static_cast<double>(n);
  if (static_cast<double>(i) > bn * (1 + 1e-12)) throw DomainError("chernoff_bound: requires i <= beta n");
  const double gap = bn - static_cast<double>(i) + 1;
  return -gap * gap / (2 * bn);
}

LogValue deviation_bound_initial(std::int64_t n, std::int64_t i, double u, double c, double C) {
  check_n_i(n, i);
  const double nn = static_cast<double>(n);
  const double ii = static_cast<double>(i);
  if (ii * ii > nn) throw DomainError("deviation_bound_initial: requires i <= sqrt(n)");
  const double logn = std::log(nn);
  if (!(u >= 1 / std::sqrt(logn) && u <= 1 - C / logn))
    throw DomainError("deviation_bound_initial: requires 1/sqrt(log n) <= u <= 1 - C/log n");
  const double base = nn / (ii * std::sqrt(logn));
  const double exponent = -(c * ii / u) * std::exp((1 - u * u) * std::log(base));
  return LogValue::from_log(std::min(0.0, exponent));
}

LogValue deviation_bound_intermediate(std::int64_t n, std::int64_t i, double u, double c) {
  check_n_i(n, i);
  if (2 * i > n) throw DomainError("deviation_bound_intermediate: requires i <= n/2");
  if (!(u > 0 && u <= 1)) throw DomainError("deviation_bound_intermediate: requires 0 < u <= 1");
  const double ii = static_cast<double>(i);
  return LogValue::from_log(-c * (1 - u) * (1 - u) * ii * std::log(static_cast<double>(n) / ii));
}

LogValue deviation_bound_crude(std::int64_t n, double u) {
  if (n < 1) throw DomainError("deviation_bound_crude: n must be >= 1");
  if (!(u >= 0)) throw DomainError("deviation_bound_crude: u must be >= 0");
  if (u == 0) return LogValue::zero();
  return LogValue::from_log(std::min(0.0, 0.5 * static_cast<double>(n) * std::log(4 * u)));
}

Eigen::VectorXd sample_top_orderstats(std::int64_t n, std::int64_t k_top, RngStream& rng) {
  if (n < 1 || k_top < 1 || k_top > n) throw DomainError("sample_top_orderstats: need 1 <= k_top <= n");
  Eigen::VectorXd out(k_top);
  // 1 - u is tracked as its logarithm so that the largest mass fractions keep
  // full precision when n is large.
  double log_survivor = 0;  // log(1 - U_(j))
  for (std::int64_t j = 0; j < k_top; ++j) {
    const double remaining = static_cast<double>(n - j);
    // Minimum of `remaining` uniforms on the leftover interval:
    // 1 - U_(j+1) = (1 - U_(j)) V^{1/remaining}.
    log_survivor += std::log(rng.uniform()) / remaining;
    const double tail_mass = -std::expm1(log_survivor);
    out[j] = quantile_from_tail(std::max(tail_mass, std::numeric_limits<double>::denorm_min()));
  }
  return out;
}

Eigen::VectorXd sample_top_orderstats_naive(std::int64_t n, std::int64_t k_top, RngStream& rng) {
  if (n < 1 || k_top < 1 || k_top > n) throw DomainError("sample_top_orderstats_naive: need 1 <= k_top <= n");
  std::vector<double> all(static_cast<std::size_t>(n));
  for (double& x : all) x = rng.abs_gaussian();
  std::partial_sort(all.begin(), all.begin() + k_top, all.end(), std::greater<>());
  return Eigen::Map<Eigen::VectorXd>(all.data(), k_top);
}


double log_quantile_power_sum(std::int64_t n, double q) {
  if (n < 2) throw DomainError("log_quantile_power_sum: n must be >= 2");
  if (!(q > 0)) throw DomainError("log_quantile_power_sum: q must be > 0");
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n - 1));
  const double nn = static_cast<double>(n);
  for (std::int64_t i = 1; i < n; ++i) {
    logs.push_back(q * std::log(quantile_from_tail(static_cast<double>(i) / nn)));
  }
  return log_sum_exp_sorted(std::move(logs));
}

}  // namespace lplab
