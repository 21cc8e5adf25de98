// Prints the observed value behind each calibrated constant next to the
// committed default. `lplab-calibrate [--quick]`.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "lplab/constants.hpp"
#include "lplab/gauss.hpp"
#include "lplab/mc_lab.hpp"
#include "lplab/order_stats.hpp"
#include "lplab/stats.hpp"
#include "lplab/trunc_moments.hpp"
#include "lplab/var_theory.hpp"

using namespace lplab;

namespace {

const Constants kDefaults = Constants::defaults();

/// Kind "lower": the committed value may not exceed `observed`; "upper": it
/// may not fall below it.
void report(const char* key, const char* kind, double observed) {
  const double committed = kDefaults.get(key);
  const bool ok = std::string(kind) == "lower" ? committed <= observed : committed >= observed;
  std::printf("%-20s %-6s observed %-12.5g committed %-10.4g %s\n", key, kind, observed, committed,
              ok ? "ok" : "VIOLATED");
}

struct Range {
  double lo = kInf, hi = -kInf;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

void deterministic(const std::vector<std::int64_t>& ns) {
  Range feller;
  for (double n = 100; n <= 1e8; n *= 10) {
    const double xi = quantile_from_tail(1 / n);
    feller.add(std::exp(-0.5 * xi * xi) / xi * n);
  }
  report("feller_lo", "lower", feller.lo);
  report("feller_hi", "upper", feller.hi);

  Range lo_side, hi_side;
  for (double q : {1.0, 2.0, 5.0, 10.0, 30.0, 80.0}) {
    for (double a : {1.0, 2.0, 3.0, 5.0, 9.0, 15.0}) {
      const MomentOrder m = moment_order({q, a});
      const double l = incomplete_integral({q, a}).log();
      lo_side.add(std::exp(l - m.order.log()));
      hi_side.add(std::exp(l - m.upper_order.log()));
    }
  }
  report("moment_bracket_lo", "lower", lo_side.lo);
  report("moment_bracket_hi", "upper", hi_side.hi);

  Constants unit = kDefaults;
  for (const char* key : {"twop_low_lo", "twop_low_hi", "twop_mid_lo", "twop_mid_hi", "twop_high_lo", "twop_high_hi",
                          "mexpm_high_lo", "mexpm_high_hi", "c_A"}) {
    unit.set(key, 1);
  }
  Range low, mid, high_lo, high_hi, mexpm;
  double c_a = kInf;
  const LemmaReport r = lemma_checks(ns, {}, unit);
  for (const LemmaCheck& row : r.rows) {
    if (row.name == "2p_moment_low" || row.name == "2p_moment_mid") {
      (row.name == "2p_moment_low" ? low : mid).add(std::exp(row.value - row.lo));
    } else if (row.name == "2p_moment_high") {
      high_lo.add(std::exp(row.value - row.lo));
      high_hi.add(std::exp(row.value - row.hi));
    } else if (row.name == "MexpM_high") {
      mexpm.add(std::exp(row.value - row.lo));
    } else if (row.name == "logA") {
      c_a = std::min(c_a, row.value / row.lo);
    }
  }
  report("twop_low_lo", "lower", low.lo);
  report("twop_low_hi", "upper", low.hi);
  report("twop_mid_lo", "lower", mid.lo);
  report("twop_mid_hi", "upper", mid.hi);
  report("twop_high_lo", "lower", high_lo.lo);
  report("twop_high_hi", "upper", high_hi.hi);
  report("mexpm_high_lo", "lower", mexpm.lo);
  report("mexpm_high_hi", "upper", mexpm.hi);
  report("c_A", "lower", c_a);
}

void monte_carlo(std::int64_t samples) {
  const std::int64_t n = 1000;
  const double logn = std::log(static_cast<double>(n));
  const RegimePoint pt = classify(n, 2);
  const McLayout layout{samples, 1, 16};

  double tails = 0;
  for (double p : {pt.p1, 2 * logn}) {
    for (double T : {pt.xi, truncation_level_M(n, p).value()}) {
      tails = std::max(tails, mc_truncated_stats(n, p, T, layout).gap_sq.mean / tail_term(n, T).value());
    }
  }
  report("tails_c", "upper", tails);

  double neg = 0;
  for (double q : {1.0, logn, 2 * logn}) {
    for (double L : {0.5, 1.0, 2.0}) {
      const double bound = negative_moment_bound(n, q, L).direct.log();
      for (double T : {pt.xi, kInf}) neg = std::max(neg, std::exp(mc_negative_moment(n, q, L, T, layout).log_mean() - bound));
    }
  }
  report("negative_v", "upper", neg);

  // Floor of the lower envelope: Var log n for p >= pvz_lower_C log n, both n.
  double floor_c = kInf;
  for (std::int64_t m : {std::int64_t{1000}, std::int64_t{10000}}) {
    const double lm = std::log(static_cast<double>(m));
    const std::vector<double> ps = {kDefaults.get("pvz_lower_C") * lm, 4 * lm, 8 * lm, kInf};
    const std::vector<MCEstimate> e = mc_norm_stats_grid(m, ps, {m == 1000 ? samples : samples / 10, 1, 16});
    for (const MCEstimate& x : e) floor_c = std::min(floor_c, x.variance * lm);
  }
  report("pvz_lower_c", "lower", floor_c);

  const std::vector<double> grid = auto_p_grid(n);
  const std::vector<MCEstimate> est = mc_norm_stats_grid(n, grid, layout);
  double c_lo = kInf, c_hi = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    c_lo = std::min(c_lo, est[j].variance / lower_envelope(n, grid[j]).value());
    c_hi = std::max(c_hi, est[j].variance / upper_envelope(n, grid[j]).value());
  }
  report("mc_c_lo", "lower", c_lo);
  report("mc_c_hi", "upper", c_hi);

  // Largest constants consistent with the Wilson upper edge of the observed frequency.
  {
    const double u = 0.5;
    const double level = u * pt.xi;
    RngStream rng(8, 0);
    const std::int64_t trials = samples;
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) hits += sample_top_orderstats(n, 1, rng)(0) <= level;
    const double base = std::pow(n / std::sqrt(logn), 1 - u * u);
    report("dev_initial_c", "lower", -std::log(wilson_interval(hits, trials).wilson_hi) * u / base);
  }
  {
    const std::int64_t i = 32;
    const double u = 0.8;
    const double level = u * quantile_from_tail(static_cast<double>(i) / n);
    RngStream rng(9, 0);
    const std::int64_t trials = samples / 5;
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) hits += sample_top_orderstats(n, i, rng)(i - 1) <= level;
    const double scale = (1 - u) * (1 - u) * i * std::log(static_cast<double>(n) / i);
    report("dev_intermediate_c", "lower", -std::log(wilson_interval(hits, trials).wilson_hi) / scale);
  }

  // Small ball: the bound must stay above the Wilson lower edge.
  double sb = 0;
  for (double q : {1.0, 2.0, 4.0}) {
    for (double tau : {0.3, 0.45}) {
      const SmallBallEstimate f = mc_small_ball(n, q, tau, pt.xi, {samples / 5, 8, 8});
      sb = std::max(sb, f.proportion.wilson_lo / small_ball_bound(n, q, tau).value());
    }
  }
  std::printf("%-20s %-6s observed %-12.5g (Wilson lo / bound, must be <= 1) %s\n", "small_ball_c,Cprime", "upper", sb,
              sb <= 1 ? "ok" : "VIOLATED");
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  deterministic({1000, 10000, 1000000, 100000000});
  monte_carlo(quick ? 20000 : 100000);
  return 0;
}
