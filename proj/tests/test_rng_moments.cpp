#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "lplab/mc_lab.hpp"
#include "lplab/moments.hpp"
#include "lplab/rng.hpp"
#include "lplab/stats.hpp"

using namespace lplab;

TEST_CASE("philox4x32-10 known answers") {
  using C = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and addressable") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int j = 0; j < 100; ++j) CHECK(a() == b());
  CHECK(a.position() == 50);

  RngStream c(42, 7);
  for (int j = 0; j < 20; ++j) c();
  RngStream d(42, 7, 10);
  CHECK(c() == d());

  RngStream e(42, 8);
  RngStream f(43, 7);
  RngStream g(42, 7);
  const auto first = g();
  CHECK(e() != first);
  CHECK(f() != first);
}

TEST_CASE("uniform and gaussian marginals") {
  RngStream rng(1, 0);
  RunningMoments<double> u, z, a, x;
  for (int j = 0; j < 200000; ++j) {
    const double v = rng.uniform();
    CHECK_UNARY(v > 0);
    CHECK_UNARY(v < 1);
    u.push(v);
    z.push(rng.gaussian());
    a.push(rng.abs_gaussian());
    x.push(rng.exponential());
  }
  CHECK(std::abs(u.mean() - 0.5) < 4 * u.stderr_mean());
  CHECK(std::abs(u.variance() - 1.0 / 12) < 4 * u.stderr_variance());
  CHECK(std::abs(z.mean()) < 4 * z.stderr_mean());
  CHECK(std::abs(z.variance() - 1) < 4 * z.stderr_variance());
  CHECK(std::abs(a.mean() - std::sqrt(2 / std::numbers::pi)) < 4 * a.stderr_mean());
  CHECK(std::abs(x.mean() - 1) < 4 * x.stderr_mean());
}

TEST_CASE("stream independence") {
  const int streams = 256;
  const int draws = 2000;
  std::vector<double> means_a(streams), means_b(streams);
  for (int s = 0; s < streams; ++s) {
    RngStream r(99, static_cast<std::uint64_t>(s));
    RngStream next(99, static_cast<std::uint64_t>((s + 1) % streams));
    double sa = 0, sb = 0;
    for (int j = 0; j < draws; ++j) {
      sa += r.gaussian();
      sb += next.gaussian();
    }
    means_a[s] = sa / draws;
    means_b[s] = sb / draws;
  }
  CHECK(std::abs(pearson_correlation(means_a, means_b)) < 4 / std::sqrt(double(streams)));
}

TEST_CASE("running moments equal two-pass values") {
  const std::vector<double> data = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100, -3.5};
  RunningMoments<double> acc;
  for (double x : data) acc.push(x);
  const double n = static_cast<double>(data.size());
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : data) {
    m2 += (x - mean) * (x - mean);
    m3 += std::pow(x - mean, 3);
    m4 += std::pow(x - mean, 4);
  }
  CHECK(acc.mean() == doctest::Approx(mean).epsilon(1e-15));
  CHECK(acc.variance() == doctest::Approx(m2 / (n - 1)).epsilon(1e-14));
  CHECK(acc.central_moment3() == doctest::Approx(m3 / n).epsilon(1e-13));
  CHECK(acc.central_moment4() == doctest::Approx(m4 / n).epsilon(1e-13));

  // Small integers: every intermediate is exact, so merge equals sequential.
  const std::vector<double> ints = {1, 2, 3, 4, 5, 6, 7, 8};
  RunningMoments<double> all, left, right;
  for (double x : ints) all.push(x);
  for (int j = 0; j < 4; ++j) left.push(ints[j]);
  for (int j = 4; j < 8; ++j) right.push(ints[j]);
  left.merge(right);
  CHECK(left.mean() == all.mean());
  CHECK(left.variance() == all.variance());
  CHECK(left.central_moment4() == all.central_moment4());

  std::vector<RunningMoments<double>> parts(5);
  for (std::size_t j = 0; j < data.size(); ++j) parts[j % 5].push(data[j]);
  const auto merged = merge_tree(std::span<const RunningMoments<double>>(parts));
  CHECK(merged.count() == acc.count());
  CHECK(merged.variance() == doctest::Approx(acc.variance()).epsilon(1e-13));
  CHECK(merged.central_moment4() == doctest::Approx(acc.central_moment4()).epsilon(1e-12));
}

TEST_CASE("stream engine is deterministic") {
  const McLayout layout{10001, 5, 7};
  auto make = [] { return [](RngStream& r, std::span<double> out) { out[0] = r.gaussian(); }; };
  const auto a = detail::run_streams(layout, 1, make);
  const auto b = detail::run_streams(layout, 1, make);
  CHECK(a[0].count() == 10001);
  CHECK(a[0].mean() == b[0].mean());
  CHECK(a[0].variance() == b[0].variance());
  CHECK(a[0].central_moment4() == b[0].central_moment4());
}

TEST_CASE("wilson interval") {
  const ProportionEstimate e = wilson_interval(50, 100);
  CHECK(e.frequency == 0.5);
  CHECK(e.wilson_lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(e.wilson_hi == doctest::Approx(0.5962).epsilon(1e-3));
  const ProportionEstimate z = wilson_interval(0, 400);
  CHECK(z.wilson_lo == 0);
  CHECK(z.wilson_hi < 0.01);
  CHECK_THROWS_AS(wilson_interval(5, 4), DomainError);
}

TEST_CASE("kolmogorov-smirnov") {
  CHECK(kolmogorov_survival(0.1) == 1);
  CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(1e-2));
  RngStream r(3, 0);
  std::vector<double> a, b, c;
  for (int j = 0; j < 3000; ++j) {
    a.push_back(r.gaussian());
    b.push_back(r.gaussian());
    c.push_back(r.gaussian() + 0.3);
  }
  CHECK(ks_two_sample(a, b).p_value > 1e-3);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
}
