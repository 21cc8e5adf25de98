#include "lplab/var_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lplab/order_stats.hpp"
#include "lplab/trunc_moments.hpp"

namespace lplab {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kCheckTol = 1e-10;

double log_n(std::int64_t n) { return std::log(static_cast<double>(n)); }

double xi_of(std::int64_t n) { return quantile_from_tail(1.0 / static_cast<double>(n)); }

double log_add(double a, double b) {
  const double m = std::max(a, b);
  if (std::isinf(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log of (p/2e) n^{2/p}.
double log_mid_exponent(std::int64_t n, double p) { return std::log(p / (2 * kE)) + 2 * log_n(n) / p; }

void check_p(double p) {
  if (!(p >= 1)) throw DomainError("p must be >= 1");
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Low:
      return "LOW";
    case Regime::Mid:
      return "MID";
    case Regime::High:
      return "HIGH";
  }
  return "?";
}

RegimePoint classify(std::int64_t n, double p, const Constants& constants) {
  if (static_cast<double>(n) < constants.get("n_min")) throw DomainError("classify: n below n_min");
  check_p(p);
  RegimePoint r;
  r.n = n;
  r.p = p;
  r.xi = xi_of(n);
  r.p1 = 2 * log_n(n) / std::log(2 * kE);
  r.p2 = r.xi * r.xi;
  r.regime = p <= r.p1 ? Regime::Low : (p <= r.p2 ? Regime::Mid : Regime::High);
  return r;
}

LogValue truncation_level_M(std::int64_t n, double p, const Constants& constants) {
  const RegimePoint r = classify(n, p, constants);
  if (std::isinf(p)) return LogValue::from_value(r.xi);
  if (p <= r.p2) return LogValue::from_log((log_n(n) + 0.5 * p * std::log(p / kE)) / p);
  return LogValue::from_log(std::log(r.xi) + std::log(p / (r.xi + p - r.p2)) / p);
}

double log_variance_low(std::int64_t n, double p) {
  return p * std::numbers::ln2 - std::log(p) + (2 / p - 1) * log_n(n);
}

double log_variance_mid(std::int64_t n, double p) {
  const double ln = log_n(n);
  const double p1 = 2 * ln / std::log(2 * kE);
  const double s = std::sqrt(ln);
  if (!(s + p - p1 > 0)) throw DomainError("log_variance_mid: p too far below p1");
  return -std::exp(log_mid_exponent(n, p)) + ln - std::log(s * (s + p - p1));
}

double log_variance_high(std::int64_t n, double p, double xi) {
  const double ln = log_n(n);
  if (std::isinf(p)) return -std::log(ln);
  const double f = 1 - (xi * xi - xi) / p;
  if (!(f > 0)) throw DomainError("log_variance_high: p must exceed xi^2 - xi");
  return -std::log(ln) + std::log(f);
}

Prediction predict_variance(std::int64_t n, double p, const Constants& constants) {
  Prediction out;
  out.point = classify(n, p, constants);
  double lv = 0;
  switch (out.point.regime) {
    case Regime::Low:
      lv = log_variance_low(n, p);
      break;
    case Regime::Mid:
      lv = log_variance_mid(n, p);
      break;
    case Regime::High:
      lv = log_variance_high(n, p, out.point.xi);
      break;
  }
  out.variance = LogValue::from_log(lv);
  return out;
}

LogValue small_ball_bound(std::int64_t n, double q, double tau, const Constants& constants) {
  if (n < 2) throw DomainError("small_ball_bound: n must be >= 2");
  if (!(tau > 0 && tau < 0.5)) throw DomainError("small_ball_bound: tau must lie in (0, 1/2)");
  if (!(q >= 1)) throw DomainError("small_ball_bound: q must be >= 1");
  const double c = constants.get("small_ball_c");
  const double Cp = constants.get("small_ball_Cprime");
  const double nn = static_cast<double>(n);
  const double first = std::log(Cp) - c * std::pow(nn, (1 - std::pow(2 * tau, 2 / q)) / 4);
  const double second =
      std::log(nn) + 0.5 * nn * (std::log(4.0) + std::log(2 * tau) / q + 0.5 * std::log(2 * std::log(nn)));
  return LogValue::from_log(std::min({first, second, 0.0}));
}

NegativeMomentBound negative_moment_bound(std::int64_t n, double q, double L, const Constants& constants) {
  if (n < 3) throw DomainError("negative_moment_bound: n must be >= 3");
  if (!(q >= 1)) throw DomainError("negative_moment_bound: q must be >= 1");
  if (!(L > 0)) throw DomainError("negative_moment_bound: L must be > 0");
  if (q * L > constants.get("negative_K") * log_n(n)) throw DomainError("negative_moment_bound: q L exceeds K log n");
  const double xi = xi_of(n);
  const double log_direct = log_quantile_power_sum(n, q);
  const double log_integral = log_n(n) + trunc_moment_min({q, xi}).log();
  NegativeMomentBound b;
  b.direct = LogValue::from_log(-L * log_direct);
  b.integral = LogValue::from_log(-L * log_integral);
  b.ratio = std::exp(-L * (log_direct - log_integral));
  return b;
}

LogValue tail_term(std::int64_t n, double T, const Constants& constants) {
  const RegimePoint r = classify(n, 2, constants);
  if (!(T >= r.xi)) throw DomainError("tail_term: T must be >= xi_{1-1/n}");
  if (std::isinf(T)) return LogValue::zero();
  return LogValue::from_log(log_n(n) - 3 * std::log(T) - 0.5 * T * T);
}

namespace {

struct AParts {
  double log_A = 0;
  double log_e2 = 0;   // log E(|g|^{2p-2} 1{|g|<=T})
  double log_mxi = 0;  // log E min(xi, |g|)^p
};

AParts a_parts(std::int64_t n, double p, double T, const Constants& constants) {
  const RegimePoint r = classify(n, p, constants);
  if (std::isinf(p) || p > 3 * log_n(n)) throw DomainError("a_quantity: p must lie in [1, 3 log n]");
  if (!(T >= r.xi)) throw DomainError("a_quantity: T must be >= xi_{1-1/n}");
  AParts a;
  const double k = 2 - 2 / p;
  a.log_e2 = trunc_moment_chi({2 * p - 2, T}).log();
  const double log_e1 = trunc_moment_chi({p - 1, T}).log();
  a.log_mxi = trunc_moment_min({p, r.xi}).log();
  const double log_mt = trunc_moment_min({p, T}).log();
  const double log_tpow = std::isinf(T) ? (p > 1 ? kInf : 0.0) : (2 * p - 2) * std::log(T);
  const double denom = log_add(log_tpow, k * (log_n(n) + log_mt));
  a.log_A = std::max(0.0, a.log_e2 - 2 * log_e1 + k * (log_n(n) + a.log_mxi) - denom);
  return a;
}

}  // namespace

LogValue a_quantity(std::int64_t n, double p, double T, const Constants& constants) {
  return LogValue::from_log(a_parts(n, p, T, constants).log_A);
}

LogValue combined_upper(std::int64_t n, double p, double T, const Constants& constants) {
  const AParts a = a_parts(n, p, T, constants);
  const double main =
      (2 / p - 1) * log_n(n) - std::log1p(a.log_A) + a.log_e2 - (2 - 2 / p) * a.log_mxi;
  return tail_term(n, T, constants) + LogValue::from_log(main);
}

LogValue upper_envelope(std::int64_t n, double p, const Constants& constants) {
  const RegimePoint r = classify(n, p, constants);
  const double cap = -std::log(log_n(n));
  if (std::isinf(p) || p > 3 * log_n(n)) return LogValue::from_log(cap);
  switch (r.regime) {
    case Regime::Low:
      return LogValue::from_log(log_variance_low(n, p));
    case Regime::Mid:
      return LogValue::from_log(log_variance_mid(n, p));
    case Regime::High:
      break;
  }
  return LogValue::from_log(std::min(log_variance_high(n, p, r.xi), cap));
}

LogValue lower_envelope(std::int64_t n, double p, const Constants& constants) {
  const RegimePoint r = classify(n, p, constants);
  const double floor = std::log(constants.get("pvz_lower_c") / log_n(n));
  const bool floored = p >= constants.get("pvz_lower_C") * log_n(n);
  if (std::isinf(p)) return LogValue::from_log(floor);
  switch (r.regime) {
    case Regime::Low:
      return LogValue::from_log(log_variance_low(n, p));
    case Regime::Mid:
      return LogValue::from_log(log_variance_mid(n, p));
    case Regime::High:
      break;
  }
  const double high = 4 * std::log(r.xi) - 3 * std::log(p) + std::log(1 - (r.p2 - r.xi) / p);
  return LogValue::from_log(floored ? std::max(high, floor) : high);
}

std::vector<double> auto_p_grid(std::int64_t n, const Constants& constants) {
  const RegimePoint r = classify(n, 2, constants);
  const double top = 3 * log_n(n);
  std::vector<double> grid;
  constexpr int kLow = 16;
  for (int j = 0; j < kLow; ++j) grid.push_back(1 + (r.p1 - 1) * j / (kLow - 1));
  const double step = std::sqrt(log_n(n));
  for (double p = r.p1 + step; p < r.p2; p += step) grid.push_back(p);
  grid.push_back(r.p2);
  constexpr int kHigh = 8;
  for (int j = 1; j <= kHigh; ++j) grid.push_back(r.p2 + (top - r.p2) * j / kHigh);
  grid.push_back(kInf);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

bool LemmaReport::all_pass() const { return failures() == 0; }

std::size_t LemmaReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const LemmaCheck& c) { return !c.pass; }));
}

namespace {

LemmaCheck make_check(std::string name, std::int64_t n, double p, double value, double lo, double hi,
                      std::string detail) {
  LemmaCheck c{std::move(name), n, p, value, lo, hi, false, std::move(detail)};
  const double slack = kCheckTol * std::max(1.0, std::abs(value));
  c.pass = std::isfinite(value) && value >= lo - slack && value <= hi + slack;
  return c;
}

void check_point(std::int64_t n, double p, const Constants& k, std::vector<LemmaCheck>& out) {
  const RegimePoint r = classify(n, p, k);
  const double ln = log_n(n);
  const double xi = r.xi;
  const double log_m = truncation_level_M(n, p, k).log();
  const double m2 = std::exp(2 * log_m);

  out.push_back(make_check("M>=xi", n, p, log_m, std::log(xi), kInf, "log M vs log xi"));
  switch (r.regime) {
    case Regime::Low:
      out.push_back(make_check("M2_low", n, p, m2, 2 * p - 2, kInf, "M^2 >= 2p-2"));
      break;
    case Regime::Mid:
      out.push_back(make_check("M2_mid", n, p, m2, p, 2 * p, "p <= M^2 <= 2p"));
      break;
    case Regime::High:
      out.push_back(make_check("M2_high", n, p, m2, 0, std::pow(p, 1 + 1 / p), "M^2 <= p^{1+1/p}"));
      break;
  }
  if (p <= 2 * ln) {
    const double expr = p * std::numbers::ln2 + std::exp(log_mid_exponent(n, p));
    out.push_back(make_check("computational", n, p, expr, 2 * ln, kInf, "p log 2 + n^{2/p} p/(2e) >= 2 log n"));
  }

  const double log_e2 = trunc_moment_chi({2 * p - 2, std::exp(log_m)}).log();
  switch (r.regime) {
    case Regime::Low: {
      const double form = (p - 1) * std::log(2 * p / kE);
      out.push_back(make_check("2p_moment_low", n, p, log_e2, form + std::log(k.get("twop_low_lo")),
                               form + std::log(k.get("twop_low_hi")), "log E(|g|^{2p-2};|g|<=M)"));
      break;
    }
    case Regime::Mid: {
      const double s = std::sqrt(ln);
      const double form = -0.5 * std::log(ln) + 2 * ln + p * std::log(p / kE) - std::log(s + p - r.p1) -
                          std::exp(log_mid_exponent(n, p));
      out.push_back(make_check("2p_moment_mid", n, p, log_e2, form + std::log(k.get("twop_mid_lo")),
                               form + std::log(k.get("twop_mid_hi")), "log E(|g|^{2p-2};|g|<=M)"));
      break;
    }
    case Regime::High: {
      const double d = std::log(n * (xi + p - r.p2));
      const double lower = 2 * p * std::log(xi) - d;
      const double upper = std::log(p) + (2 * p - 2) * std::log(xi) - d;
      out.push_back(make_check("2p_moment_high", n, p, log_e2, lower + std::log(k.get("twop_high_lo")),
                               upper + std::log(k.get("twop_high_hi")), "log E(|g|^{2p-2};|g|<=M)"));
      break;
    }
  }

  const double log_mexp = -log_m - 0.5 * m2;
  if (r.regime != Regime::High) {
    const double form = -ln / p - 0.5 * std::log(p) - std::exp(log_mid_exponent(n, p)) + 0.5;
    out.push_back(make_check("MexpM", n, p, log_mexp, form, form, "log M^-1 e^{-M^2/2} = log sqrt(e) x form"));
  } else {
    const double form = -ln + std::log(1 - (r.p2 - xi) / p);
    out.push_back(make_check("MexpM_high", n, p, log_mexp, form + std::log(k.get("mexpm_high_lo")),
                             form + std::log(k.get("mexpm_high_hi")), "log M^-1 e^{-M^2/2}"));
  }

  if (p <= 3 * ln) {
    const double one_plus = 1 + a_quantity(n, p, std::exp(log_m), k).log();
    out.push_back(make_check("logA", n, p, one_plus, k.get("c_A") * p, kInf, "1 + log A at T = M"));
  }
}

}  // namespace

LemmaReport lemma_checks(std::span<const std::int64_t> n_grid, std::span<const double> p_grid,
                         const Constants& constants) {
  LemmaReport report;
  for (const std::int64_t n : n_grid) {
    const std::vector<double> ps = p_grid.empty() ? auto_p_grid(n, constants)
                                                  : std::vector<double>(p_grid.begin(), p_grid.end());
    for (const double p : ps) {
      if (std::isinf(p)) continue;
      check_point(n, p, constants, report.rows);
    }
  }
  return report;
}

}  // namespace lplab
