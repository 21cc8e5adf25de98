#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "lplab/log_value.hpp"
#include "lplab/rng.hpp"

namespace lplab {

// g_i^* denotes the i-th largest of |g_1|, ..., |g_n|.

/// log P{g_i^* <= xi_{1-beta}} = log sum_{j<i} C(n,j) beta^j (1-beta)^{n-j}.
double log_orderstat_cdf_exact(std::int64_t n, std::int64_t i, double beta);
inline double orderstat_cdf_exact(std::int64_t n, std::int64_t i, double beta) {
  return std::exp(log_orderstat_cdf_exact(n, i, beta));
}

/// exp(-(beta n - i + 1)^2 / (2 beta n)), valid for 1 <= i <= beta n.
double chernoff_bound(std::int64_t n, std::int64_t i, double beta);
/// Natural log of chernoff_bound; finite where the bound underflows.
double log_chernoff_bound(std::int64_t n, std::int64_t i, double beta);

/// Bound on P{g_i^* <= u xi_{1-i/n}} for 1 <= i <= sqrt(n) and
/// 1/sqrt(log n) <= u <= 1 - C/log n:
/// exp(-(c i / u) (n / (i sqrt(log n)))^{1-u^2}).
LogValue deviation_bound_initial(std::int64_t n, std::int64_t i, double u, double c, double C);

/// Bound exp(-c (1-u)^2 i log(n/i)) on P{g_i^* <= u xi_{1-i/n}}, i <= n/2.
LogValue deviation_bound_intermediate(std::int64_t n, std::int64_t i, double u, double c);

/// min(1, (4u)^{n/2}), a bound on P{g_i^* <= u} for every i <= n/2.
LogValue deviation_bound_crude(std::int64_t n, double u);

/// g_1^* >= ... >= g_k^* of a fresh standard Gaussian n-vector.
///
/// Draws the k smallest of n uniform tail masses sequentially,
/// U_(j+1) = U_(j) + (1 - U_(j)) (1 - V^{1/(n-j)}), and maps each through
/// the |g| tail quantile. O(k) work; no length-n buffer.
Eigen::VectorXd sample_top_orderstats(std::int64_t n, std::int64_t k_top, RngStream& rng);

/// Reference sampler: draws all n coordinates and sorts.
Eigen::VectorXd sample_top_orderstats_naive(std::int64_t n, std::int64_t k_top, RngStream& rng);

/// log sum_{i=1}^{n} xi_{1-i/n}^q (the i = n term is zero).
double log_quantile_power_sum(std::int64_t n, double q);

}  // namespace lplab
