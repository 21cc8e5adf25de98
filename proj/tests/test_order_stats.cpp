#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lplab/constants.hpp"
#include "lplab/gauss.hpp"
#include "lplab/order_stats.hpp"
#include "lplab/stats.hpp"

using namespace lplab;

TEST_CASE("exact order statistic cdf") {
  CHECK(orderstat_cdf_exact(100, 1, 0.1) == doctest::Approx(0.000026561398887587476934).epsilon(1e-13));
  CHECK(orderstat_cdf_exact(2, 1, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(orderstat_cdf_exact(20, 20, 0.3) == doctest::Approx(1 - std::pow(0.3, 20)).epsilon(1e-15));
  CHECK(log_orderstat_cdf_exact(1000, 3, 0.001) == doctest::Approx(-0.083609181397134636841).epsilon(1e-13));
  CHECK(log_orderstat_cdf_exact(10000, 10, 0.01) == doctest::Approx(-71.679442563365865836).epsilon(1e-12));
  CHECK(log_orderstat_cdf_exact(50, 50, 0.5) <= 0);
}

TEST_CASE("chernoff_bound") {
  CHECK(chernoff_bound(100, 1, 0.1) == doctest::Approx(std::exp(-5.0)).epsilon(1e-15));
  CHECK(chernoff_bound(100, 1, 0.1) == doctest::Approx(0.006738).epsilon(1e-4));
  CHECK(chernoff_bound(1000, 100, 0.1) == doctest::Approx(std::exp(-1.0 / 200)).epsilon(1e-15));
  CHECK(std::log(chernoff_bound(10000, 10, 0.01)) == doctest::Approx(-91.0 * 91.0 / 200).epsilon(1e-13));
  CHECK(log_orderstat_cdf_exact(10000, 10, 0.01) < std::log(chernoff_bound(10000, 10, 0.01)));
  CHECK_THROWS_AS(chernoff_bound(100, 11, 0.1), DomainError);
}

TEST_CASE("deviation bounds") {
  const double n = 1e4;
  const double expected = -2 * std::pow(n / std::sqrt(std::log(n)), 0.75);
  CHECK(deviation_bound_initial(10000, 1, 0.5, 1, 1).log() == doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(deviation_bound_initial(10000, 1, 0.1, 1, 1), DomainError);
  CHECK_THROWS_AS(deviation_bound_initial(10000, 1, 0.99, 1, 1), DomainError);

  CHECK(deviation_bound_intermediate(1000, 10, 1, 0.3).log() == 0);
  CHECK(deviation_bound_intermediate(1000, 500, 0.5, 0.3).log() ==
        doctest::Approx(-0.3 * 0.25 * 500 * std::log(2.0)).epsilon(1e-13));

  CHECK(deviation_bound_crude(10, 0).is_zero());
  CHECK(deviation_bound_crude(10, 0.25).log() == 0);
  CHECK(deviation_bound_crude(10, 0.1).value() == doctest::Approx(0.01024).epsilon(1e-13));
  CHECK(deviation_bound_crude(10, 0.9).log() == 0);
}

TEST_CASE("top order statistics sampler") {
  RngStream one(3, 0);
  const Eigen::VectorXd single = sample_top_orderstats(1, 1, one);
  CHECK(single.size() == 1);
  CHECK(single(0) > 0);

  RngStream rng(5, 1);
  const Eigen::VectorXd top = sample_top_orderstats(1000, 20, rng);
  for (Eigen::Index j = 1; j < top.size(); ++j) CHECK(top(j) <= top(j - 1));

  // P{g_1^* <= xi_{1-beta}} = (1-beta)^n.
  const std::int64_t n = 1000;
  const double beta = 1e-3;
  const double level = quantile_from_tail(beta);
  const int trials = 100000;
  int below = 0;
  RngStream s(17, 2);
  for (int t = 0; t < trials; ++t) below += sample_top_orderstats(n, 1, s)(0) <= level;
  const double p = std::pow(1 - beta, n);
  const double freq = static_cast<double>(below) / trials;
  CHECK(std::abs(freq - p) <= 3 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("sampler agrees in law with the full sort") {
  RngStream a(21, 0);
  RngStream b(21, 1);
  std::vector<double> fast, naive;
  for (int t = 0; t < 4000; ++t) {
    fast.push_back(sample_top_orderstats(500, 3, a)(2));
    naive.push_back(sample_top_orderstats_naive(500, 3, b)(2));
  }
  CHECK(ks_two_sample(fast, naive).p_value > 1e-3);
}

TEST_CASE("calibrated deviation constants dominate Monte Carlo") {
  const Constants k = Constants::defaults();
  {
    const std::int64_t n = 1000;
    const double level = 0.5 * quantile_from_tail(1.0 / n);
    RngStream rng(8, 0);
    const int trials = 100000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) hits += sample_top_orderstats(n, 1, rng)(0) <= level;
    const double bound = deviation_bound_initial(n, 1, 0.5, k.get("dev_initial_c"), k.get("dev_initial_C")).value();
    CHECK(wilson_interval(hits, trials).wilson_lo <= bound);
  }

  const std::int64_t n = 1000;
  const std::int64_t i = 32;
  const double u = 0.8;
  const double level = u * quantile_from_tail(static_cast<double>(i) / n);
  RngStream rng(9, 0);
  const int trials = 20000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) hits += sample_top_orderstats(n, i, rng)(i - 1) <= level;
  const double bound = deviation_bound_intermediate(n, i, u, k.get("dev_intermediate_c")).value();
  CHECK(wilson_interval(hits, trials).wilson_lo <= bound);
}

TEST_CASE("log_quantile_power_sum") {
  CHECK(log_quantile_power_sum(1000, 2) == doctest::Approx(6.9005977497459541502).epsilon(1e-12));
  CHECK_THROWS_AS(log_quantile_power_sum(1, 2), DomainError);
}
