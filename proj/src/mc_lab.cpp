#include "lplab/mc_lab.hpp"

#include <cmath>
#include <limits>

#include "lplab/gauss.hpp"
#include "lplab/order_stats.hpp"
#include "lplab/trunc_moments.hpp"

namespace lplab {

MCEstimate MCEstimate::from(const RunningMoments<double>& acc, const McLayout& layout) {
  MCEstimate e;
  e.mean = acc.mean();
  e.variance = acc.variance();
  e.stderr_mean = acc.stderr_mean();
  e.stderr_variance = acc.stderr_variance();
  e.samples = acc.count();
  e.seed = layout.seed;
  e.streams = layout.streams;
  return e;
}

double NegativeMomentEstimate::log_mean() const {
  return scaled.mean > 0 ? log_scale + std::log(scaled.mean) : -kInf;
}

namespace {

void check_n(std::int64_t n) {
  if (n < 1) throw DomainError("Monte Carlo: n must be >= 1");
}

void check_p(double p) {
  if (!(p >= 1)) throw DomainError("Monte Carlo: p must be >= 1");
}

// log(sum exp(v_i)) over a buffer with known maximum.
double log_sum_shifted(const std::vector<double>& v, double m) {
  if (std::isinf(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

std::vector<MCEstimate> mc_norm_stats_grid(std::int64_t n, std::span<const double> ps, const McLayout& layout) {
  check_n(n);
  if (ps.empty()) throw DomainError("mc_norm_stats_grid: empty p grid");
  for (double p : ps) check_p(p);
  const std::vector<double> grid(ps.begin(), ps.end());
  auto make = [&] {
    return [&grid, n, a = std::vector<double>(static_cast<std::size_t>(n)),
            la = std::vector<double>(static_cast<std::size_t>(n))](RngStream& rng, std::span<double> out) mutable {
      double m = 0;
      for (auto& x : a) {
        x = rng.abs_gaussian();
        m = std::max(m, x);
      }
      bool have_logs = false;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double p = grid[j];
        if (std::isinf(p)) {
          out[j] = m;
        } else if (p == 1) {
          double s = 0;
          for (double x : a) s += x;
          out[j] = s;
        } else if (p == 2) {
          double s = 0;
          for (double x : a) s += (x / m) * (x / m);
          out[j] = m * std::sqrt(s);
        } else {
          if (!have_logs) {
            for (std::size_t k = 0; k < a.size(); ++k) la[k] = std::log(a[k] / m);
            have_logs = true;
          }
          double s = 0;
          for (double l : la) s += std::exp(p * l);
          out[j] = m * std::exp(std::log(s) / p);
        }
      }
    };
  };
  const auto acc = detail::run_streams(layout, grid.size(), make);
  std::vector<MCEstimate> result;
  result.reserve(acc.size());
  for (const auto& a : acc) result.push_back(MCEstimate::from(a, layout));
  return result;
}

MCEstimate mc_norm_stats(std::int64_t n, double p, const McLayout& layout) {
  const double ps[] = {p};
  return mc_norm_stats_grid(n, ps, layout).front();
}

TruncatedStats mc_truncated_stats(std::int64_t n, double p, double T, const McLayout& layout) {
  check_n(n);
  check_p(p);
  if (std::isinf(p)) throw DomainError("mc_truncated_stats: p must be finite");
  if (!(T > 0)) throw DomainError("mc_truncated_stats: T must be > 0");
  const double log_t = std::log(T);
  auto make = [&] {
    return [n, p, log_t, la = std::vector<double>(static_cast<std::size_t>(n)),
            lt = std::vector<double>(static_cast<std::size_t>(n))](RngStream& rng, std::span<double> out) mutable {
      double m = -kInf;
      for (std::size_t k = 0; k < la.size(); ++k) {
        la[k] = p * std::log(rng.abs_gaussian());
        lt[k] = std::min(la[k], p * log_t);
        m = std::max(m, la[k]);
      }
      const double mt = std::min(m, p * log_t);
      const double norm = std::exp(log_sum_shifted(la, m) / p);
      const double trunc = std::exp(log_sum_shifted(lt, mt) / p);
      out[0] = norm;
      out[1] = trunc;
      out[2] = (norm - trunc) * (norm - trunc);
    };
  };
  const auto acc = detail::run_streams(layout, 3, make);
  return {MCEstimate::from(acc[0], layout), MCEstimate::from(acc[1], layout), MCEstimate::from(acc[2], layout)};
}

NegativeMomentEstimate mc_negative_moment(std::int64_t n, double q, double L, double T, const McLayout& layout,
                                          const Constants& constants) {
  if (n < 3) throw DomainError("mc_negative_moment: n must be >= 3");
  if (!(q > 0)) throw DomainError("mc_negative_moment: q must be > 0");
  if (!(L >= 0)) throw DomainError("mc_negative_moment: L must be >= 0");
  const double K = constants.get("negative_K");
  if (q * L > K * std::log(static_cast<double>(n))) {
    throw DomainError("mc_negative_moment: q L exceeds K log n");
  }
  const double xi = quantile_from_tail(1.0 / static_cast<double>(n));
  if (!(T >= xi)) throw DomainError("mc_negative_moment: T must be >= xi_{1-1/n} or infinite");
  NegativeMomentEstimate est;
  est.log_scale = L == 0 ? 0.0 : -L * (std::log(static_cast<double>(n)) + trunc_moment_min({q, T}).log());
  const double log_t = std::log(T);
  const double shift = est.log_scale;
  auto make = [&] {
    return [q, L, log_t, shift, lv = std::vector<double>(static_cast<std::size_t>(n))](RngStream& rng,
                                                                                      std::span<double> out) mutable {
      if (L == 0) {
        out[0] = 1;
        return;
      }
      double m = -kInf;
      for (auto& l : lv) {
        l = q * std::min(std::log(rng.abs_gaussian()), log_t);
        m = std::max(m, l);
      }
      out[0] = std::exp(-L * log_sum_shifted(lv, m) - shift);
    };
  };
  est.scaled = MCEstimate::from(detail::run_streams(layout, 1, make).front(), layout);
  return est;
}

MCEstimate mc_lower_identity(std::int64_t n, double p, const McLayout& layout) {
  check_n(n);
  check_p(p);
  if (std::isinf(p)) throw DomainError("mc_lower_identity: p must be finite");
  const double factor = static_cast<double>(n) / (2 * p * p);
  auto make = [&] {
    return [n, p, factor, lv = std::vector<double>(static_cast<std::size_t>(2 * n))](RngStream& rng,
                                                                                    std::span<double> out) mutable {
      double m = -kInf;
      for (auto& l : lv) {
        l = p * std::log(rng.abs_gaussian());
        m = std::max(m, l);
      }
      const double a = lv[0];
      const double b = lv[static_cast<std::size_t>(n)];
      if (a == b) {
        out[0] = 0;
        return;
      }
      const double hi = std::max(a, b);
      const double log_diff = hi + std::log(-std::expm1(-std::abs(a - b)));
      const double log_s = log_sum_shifted(lv, m);
      out[0] = factor * std::exp(2 * log_diff + (2 / p - 2) * log_s);
    };
  };
  return MCEstimate::from(detail::run_streams(layout, 1, make).front(), layout);
}

SmallBallEstimate mc_small_ball(std::int64_t n, double q, double tau, double T, const McLayout& layout) {
  if (n < 2) throw DomainError("mc_small_ball: n must be >= 2");
  if (!(q > 0)) throw DomainError("mc_small_ball: q must be > 0");
  if (!(tau > 0)) throw DomainError("mc_small_ball: tau must be > 0");
  if (!(T > 0)) throw DomainError("mc_small_ball: T must be > 0");
  SmallBallEstimate est;
  est.log_threshold = std::log(tau) + log_quantile_power_sum(n, q);
  const double log_t = std::log(T);
  const double threshold = est.log_threshold;
  auto make = [&] {
    return [q, log_t, threshold, lv = std::vector<double>(static_cast<std::size_t>(n))](RngStream& rng,
                                                                                       std::span<double> out) mutable {
      double m = -kInf;
      for (auto& l : lv) {
        l = q * std::min(std::log(rng.abs_gaussian()), log_t);
        m = std::max(m, l);
      }
      out[0] = log_sum_shifted(lv, m) <= threshold ? 1.0 : 0.0;
    };
  };
  const auto acc = detail::run_streams(layout, 1, make).front();
  const auto successes = static_cast<std::int64_t>(std::llround(acc.mean() * static_cast<double>(acc.count())));
  est.proportion = wilson_interval(successes, acc.count());
  return est;
}

}  // namespace lplab
