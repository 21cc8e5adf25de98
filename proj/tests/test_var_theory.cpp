#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lplab/order_stats.hpp"
#include "lplab/trunc_moments.hpp"
#include "lplab/var_theory.hpp"

using namespace lplab;

namespace {

const std::vector<std::int64_t> kNs = {1000, 10000, 1000000, 100000000};

}  // namespace

TEST_CASE("classify") {
  const RegimePoint a = classify(10000, 2);
  CHECK(a.regime == Regime::Low);
  CHECK(a.p1 == doctest::Approx(10.88).epsilon(1e-3));
  CHECK(a.xi == doctest::Approx(3.890591886413093967).epsilon(1e-14));
  CHECK(classify(10000, 15).regime == Regime::Mid);
  CHECK(a.p2 == doctest::Approx(15.137).epsilon(1e-4));
  CHECK(classify(10000, 20).regime == Regime::High);
  CHECK(classify(10000, kInf).regime == Regime::High);
  CHECK(classify(10000, a.p1).regime == Regime::Low);
  CHECK(classify(10000, a.p2).regime == Regime::Mid);
  CHECK_THROWS_AS(classify(50, 2), DomainError);
  CHECK_THROWS_AS(classify(1000, 0.5), DomainError);

  for (const auto n : kNs) {
    const RegimePoint r = classify(n, 2);
    CHECK(r.p1 < r.p2);
    CHECK(r.p2 < 2 * std::log(static_cast<double>(n)));
    int last = 0;
    for (double p = 1; p < 4 * std::log(static_cast<double>(n)); p += 0.25) {
      const int now = static_cast<int>(classify(n, p).regime);
      CHECK(now >= last);
      last = now;
    }
  }
}

TEST_CASE("truncation level M") {
  CHECK(truncation_level_M(100, 2).value() == doctest::Approx(std::sqrt(200 / std::numbers::e)).epsilon(1e-14));
  CHECK(truncation_level_M(100, 2).value() == doctest::Approx(8.578).epsilon(1e-3));
  CHECK(truncation_level_M(10000, 4).value() == doctest::Approx(12.130613194252668472).epsilon(1e-13));
  // n^{2/p} p/e equals 2 log n at p = 2 log n.
  for (const auto n : kNs) {
    const double ln = std::log(static_cast<double>(n));
    const double p = 2 * ln;
    CHECK(std::exp(2 * ln / p) * p / std::numbers::e == doctest::Approx(2 * ln).epsilon(1e-14));
    for (double q : auto_p_grid(n)) CHECK(truncation_level_M(n, q).log() >= std::log(classify(n, q).xi) - 1e-12);
  }
  CHECK(truncation_level_M(10000, kInf).value() == doctest::Approx(3.890591886413093967).epsilon(1e-14));
  CHECK(truncation_level_M(10000, 1).log() == doctest::Approx(std::log(10000.0) - 0.5).epsilon(1e-14));
}

TEST_CASE("predict_variance formulas") {
  CHECK(predict_variance(10000, 2).variance.value() == doctest::Approx(2).epsilon(1e-14));
  CHECK(predict_variance(1000, 2).variance.value() == doctest::Approx(2).epsilon(1e-14));
  for (const auto n : kNs) {
    const double ln = std::log(static_cast<double>(n));
    CHECK(predict_variance(n, kInf).variance.value() == doctest::Approx(1 / ln).epsilon(1e-14));
    const RegimePoint r = classify(n, 2);
    // -p1 + log n = p1 log 2 - log n exactly.
    CHECK(-r.p1 + ln == doctest::Approx(r.p1 * std::numbers::ln2 - ln).epsilon(1e-13));
  }
}

TEST_CASE("boundary continuity") {
  for (const auto n : kNs) {
    const RegimePoint r = classify(n, 2);
    const double slack = 3 + std::log(std::log(static_cast<double>(n)));
    CHECK(std::abs(log_variance_low(n, r.p1) - log_variance_mid(n, r.p1)) <= slack);
    CHECK(std::abs(log_variance_mid(n, r.p2) - log_variance_high(n, r.p2, r.xi)) <= slack);
  }
}

TEST_CASE("predicted variance shape") {
  // Low piece: decreasing up to its minimum, the root of
  // log 2 - 1/p - 2 log n / p^2, then
  // increasing towards p1; Mid piece: increasing on [p1, p2]; High piece:
  // increasing to 1/log n.
  for (const auto n : kNs) {
    const RegimePoint r = classify(n, 2);
    const double ln = std::log(static_cast<double>(n));
    const double pmin = (1 + std::sqrt(1 + 8 * std::numbers::ln2 * ln)) / (2 * std::numbers::ln2);
    double prev = log_variance_low(n, 1);
    for (double p = 1.1; p <= r.p1; p += 0.1) {
      const double now = log_variance_low(n, p);
      if (p < pmin - 0.05) CHECK(now < prev);
      if (p > pmin + 0.15) CHECK(now > prev);
      prev = now;
    }
    // Mid piece: the exponent -(p/2e) n^{2/p} + log n increases on [p1, p2].
    auto exponent = [&](double p) { return -p / (2 * std::numbers::e) * std::exp(2 * ln / p) + ln; };
    prev = exponent(r.p1);
    for (double p = r.p1 + 0.1; p <= r.p2; p += 0.1) {
      const double now = exponent(p);
      CHECK(now > prev);
      prev = now;
    }
    CHECK(log_variance_mid(n, r.p2) > log_variance_mid(n, r.p1));
    prev = log_variance_high(n, r.p2 + 1e-9, r.xi);
    for (double p = r.p2 + 0.5; p <= 10 * ln; p += 0.5) {
      const double now = log_variance_high(n, p, r.xi);
      CHECK(now > prev);
      CHECK(now < -std::log(ln));
      prev = now;
    }
  }
}

TEST_CASE("small_ball_bound") {
  Constants k;
  k.set("small_ball_c", 1);
  k.set("small_ball_Cprime", 1);
  const double n = 1e4;
  const double first = -std::pow(n, (1 - std::pow(0.5, 1.0)) / 4);
  const double second = std::log(n) + n / 2 * std::log(4 * std::sqrt(0.5) * std::sqrt(2 * std::log(n)));
  CHECK(small_ball_bound(10000, 2, 0.25, k).log() == doctest::Approx(std::min({first, second, 0.0})).epsilon(1e-13));
  CHECK(small_ball_bound(1000, 1, 1e-12).log() < -1000);
  CHECK(small_ball_bound(1000, 1, 1e-200).log() < small_ball_bound(1000, 1, 1e-12).log());
  CHECK(small_ball_bound(1000, 3, 0.49).log() <= 0);
  CHECK_THROWS_AS(small_ball_bound(1000, 1, 0.5), DomainError);
  CHECK_THROWS_AS(small_ball_bound(1000, 0.5, 0.1), DomainError);
}

TEST_CASE("negative_moment_bound") {
  const NegativeMomentBound b = negative_moment_bound(1000, 2, 1);
  CHECK(b.direct.log() == doctest::Approx(-6.9005977497459541502).epsilon(1e-12));
  CHECK(b.integral.value() == doctest::Approx(1 / 998.13178148363659765).epsilon(1e-11));
  CHECK(negative_moment_bound(1000, 2, 1e-12).direct.value() == doctest::Approx(1).epsilon(1e-10));
  CHECK(trunc_moment_min({2, classify(10000, 2).xi}).value() == doctest::Approx(0.99981019637917885124).epsilon(1e-11));
  const double ln = std::log(1e4);
  for (double q : {1.0, ln, 2 * ln}) {
    const NegativeMomentBound r = negative_moment_bound(10000, q, 1);
    CHECK(r.ratio >= 0.5);
    CHECK(r.ratio <= 2);
  }
  CHECK_THROWS_AS(negative_moment_bound(1000, 10, 10), DomainError);
  CHECK_THROWS_AS(negative_moment_bound(1000, 2, 0), DomainError);
}

TEST_CASE("tail_term") {
  for (const auto n : kNs) {
    const double xi = classify(n, 2).xi;
    const double t = tail_term(n, xi).value();
    CHECK(t * xi * xi >= 1.0);
    CHECK(t * xi * xi <= 1.6);
  }
  CHECK(tail_term(10000, kInf).is_zero());
  CHECK(tail_term(10000, 40).value() < 1e-300);
  const double M = truncation_level_M(10000, 12).value();
  CHECK(tail_term(10000, M).log() == doctest::Approx(std::log(1e4) - 3 * std::log(M) - M * M / 2).epsilon(1e-14));
  CHECK_THROWS_AS(tail_term(10000, 2), DomainError);
}

TEST_CASE("a_quantity and combined_upper") {
  const double M = truncation_level_M(10000, 4).value();
  CHECK(a_quantity(10000, 4, M).value() == doctest::Approx(3.6395842232228241616).epsilon(1e-9));
  CHECK(combined_upper(10000, 4, M).value() == doctest::Approx(0.012636473978173384127).epsilon(1e-9));
  for (double p : auto_p_grid(1000)) {
    if (std::isinf(p)) continue;
    CHECK(a_quantity(1000, p, truncation_level_M(1000, p).value()).log() >= 0);
  }
  CHECK_THROWS_AS(a_quantity(10000, 3 * std::log(1e4) + 0.1, 10), DomainError);
  CHECK_THROWS_AS(a_quantity(10000, 4, 3), DomainError);
}

TEST_CASE("combined_upper at T = M follows the upper envelope") {
  for (const std::int64_t n : {1000LL, 10000LL, 1000000LL}) {
    double lo = kInf, hi = -kInf;
    for (double p : auto_p_grid(n)) {
      if (std::isinf(p) || p > 3 * std::log(static_cast<double>(n))) continue;
      const double r = combined_upper(n, p, truncation_level_M(n, p).value()).log() - upper_envelope(n, p).log();
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi - lo <= std::log(50.0));
  }
}

TEST_CASE("T = M is near optimal on a T grid") {
  const std::int64_t n = 10000;
  const double xi = classify(n, 2).xi;
  for (double p : {2.0, 6.0, 12.0, 18.0, 25.0}) {
    const double M = truncation_level_M(n, p).value();
    const double at_m = combined_upper(n, p, M).log();
    double best = kInf;
    for (double f = 0.5; f <= 2.0; f += 0.05) {
      const double T = std::max(xi, f * M);
      best = std::min(best, combined_upper(n, p, T).log());
    }
    CHECK(at_m - best <= std::log(10.0));
  }
  const double p = 2 * std::log(1e4);
  CHECK(combined_upper(n, p, xi) > combined_upper(n, p, truncation_level_M(n, p).value()));
}

TEST_CASE("envelopes") {
  for (const auto n : kNs) {
    const double ln = std::log(static_cast<double>(n));
    for (double p : auto_p_grid(n)) {
      const LogValue lo = lower_envelope(n, p);
      const LogValue up = upper_envelope(n, p);
      const LogValue mid = predict_variance(n, p).variance;
      CHECK(lo <= up);
      CHECK(lo <= mid);
      CHECK(mid <= up);
    }
    CHECK(upper_envelope(n, 3.5 * ln).value() == doctest::Approx(1 / ln).epsilon(1e-14));
    CHECK(upper_envelope(n, kInf).value() == doctest::Approx(1 / ln).epsilon(1e-14));
    CHECK(lower_envelope(n, 2).value() == doctest::Approx(2).epsilon(1e-14));
    // The High lower piece is within a bounded factor of 1/log n on [xi^2, 3 log n].
    const RegimePoint r = classify(n, 2);
    for (double p = r.p2 + 0.5; p <= 3 * ln; p += 0.5) {
      const double ratio = lower_envelope(n, p).log() - log_variance_high(n, p, r.xi);
      CHECK(ratio >= std::log(0.05));
      CHECK(ratio <= std::log(4.0));
    }
  }
  // Continuity of the upper envelope at the transition points, n = 10^4.
  const RegimePoint r = classify(10000, 2);
  CHECK(std::abs(upper_envelope(10000, r.p1).log() - upper_envelope(10000, r.p1 + 1e-9).log()) <= 3);
  CHECK(std::abs(upper_envelope(10000, r.p2).log() - upper_envelope(10000, r.p2 + 1e-9).log()) <= 3);
}

TEST_CASE("auto p grid") {
  for (const auto n : kNs) {
    const std::vector<double> g = auto_p_grid(n);
    const RegimePoint r = classify(n, 2);
    CHECK(g.front() == 1);
    CHECK(std::isinf(g.back()));
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(std::find(g.begin(), g.end(), r.p1) != g.end());
    CHECK(std::find(g.begin(), g.end(), r.p2) != g.end());
    CHECK(g.size() >= 20);
    CHECK(g.size() <= 40);
  }
}

TEST_CASE("lemma checks pass at the shipped constants") {
  const std::int64_t ns[] = {1000, 10000, 1000000, 100000000};
  const LemmaReport rep = lemma_checks(ns, {});
  for (const auto& c : rep.rows) {
    INFO(c.name, " n=", c.n, " p=", c.p, " value=", c.value, " range=[", c.lo, ", ", c.hi, "]");
    CHECK(c.pass);
  }
  CHECK(rep.all_pass());

  // The computational inequality is an equality at p1; M^2 = 2p there.
  const RegimePoint r = classify(10000, 2);
  const double p1 = r.p1;
  const double expr = p1 * std::numbers::ln2 + std::exp(2 * std::log(1e4) / p1) * p1 / (2 * std::numbers::e);
  CHECK(expr == doctest::Approx(2 * std::log(1e4)).epsilon(1e-14));
  CHECK(std::exp(2 * truncation_level_M(10000, p1).log()) == doctest::Approx(2 * p1).epsilon(1e-13));

  Constants strict;
  strict.set("c_A", 10);
  const std::int64_t one[] = {1000};
  const double ps[] = {5.0};
  CHECK_FALSE(lemma_checks(one, ps, strict).all_pass());
}
