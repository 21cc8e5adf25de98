#include "lplab/trunc_moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace lplab {

namespace {

constexpr double kLogHalf = -std::numbers::ln2;
// The integration window extends until the integrand drops below f_max * 1e-18.
constexpr double kWindowDrop = 41.44653167389282;  // log(1e18)

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
};

template <typename F>
Panel gauss_kronrod(F&& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {lo, hi, kronrod * h, std::abs((kronrod - gauss) * h)};
}

// Adaptive refinement: repeatedly bisects the panel with the largest error
// estimate until the total estimate meets the relative tolerance.
template <typename F>
double adaptive_integrate(F&& f, const std::vector<double>& breaks, double rel_tol) {
  std::vector<Panel> panels;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] > breaks[k]) panels.push_back(gauss_kronrod(f, breaks[k], breaks[k + 1]));
  }
  auto by_error = [](const Panel& a, const Panel& b) { return a.error < b.error; };
  std::make_heap(panels.begin(), panels.end(), by_error);
  for (int it = 0; it < 4000 && !panels.empty(); ++it) {
    double total = 0, err = 0;
    for (const auto& p : panels) {
      total += p.value;
      err += p.error;
    }
    if (err <= rel_tol * std::abs(total)) break;
    std::pop_heap(panels.begin(), panels.end(), by_error);
    const Panel worst = panels.back();
    panels.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      panels.push_back({worst.lo, worst.hi, worst.value, 0.0});
      std::push_heap(panels.begin(), panels.end(), by_error);
      continue;
    }
    panels.push_back(gauss_kronrod(f, worst.lo, mid));
    std::push_heap(panels.begin(), panels.end(), by_error);
    panels.push_back(gauss_kronrod(f, mid, worst.hi));
    std::push_heap(panels.begin(), panels.end(), by_error);
  }
  double total = 0;
  for (const auto& p : panels) total += p.value;
  return total;
}

// Root of g(x) = target on [lo, hi] where g is monotone (increasing if
// `increasing`), by bisection to full double precision.
template <typename G>
double bisect(G&& g, double target, double lo, double hi, bool increasing) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const bool below = g(mid) < target;
    if (below == increasing) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

void check_spec(const TruncationSpec& spec) {
  if (!(spec.q >= 0)) throw DomainError("truncated moment: q must be >= 0");
  if (!(spec.a > 0)) throw DomainError("truncated moment: a must be > 0");
}

// Finite right end for searches when a = infinity.
double search_right_end(double x_max) { return std::max(1.0, x_max) + 12.0 * std::sqrt(1.0 + x_max) + 10.0; }

}  // namespace

double log_gauss_power(double q, double x) {
  if (x == 0) return q > 0 ? -kInf : 0.0;
  return (q == 0 ? 0.0 : q * std::log(x)) - 0.5 * x * x;
}

HalfMaxWindow half_max_window(const TruncationSpec& spec) {
  check_spec(spec);
  const double q = spec.q;
  HalfMaxWindow w;
  w.x_max = std::min(std::sqrt(q), spec.a);
  const double lf_max = log_gauss_power(q, w.x_max);
  w.f_max = LogValue::from_log(lf_max);
  w.degenerate = q == 0;
  auto lf = [q](double x) { return log_gauss_power(q, x); };
  const double target = lf_max + kLogHalf;
  w.x_left = w.degenerate ? 0.0 : bisect(lf, target, 0.0, w.x_max, true);
  const double right_end = std::isinf(spec.a) ? search_right_end(w.x_max) : spec.a;
  if (lf(right_end) >= target) {
    w.x_right = right_end;
  } else {
    w.x_right = bisect(lf, target, w.x_max, right_end, false);
  }
  return w;
}

LogValue incomplete_integral(const TruncationSpec& spec) {
  check_spec(spec);
  const double q = spec.q;
  const double a = spec.a;
  const double x_max = std::min(std::sqrt(q), a);
  const double lf_max = log_gauss_power(q, x_max);
  auto lf = [q](double x) { return log_gauss_power(q, x); };
  const double floor = lf_max - kWindowDrop;

  const double x_lo = (q == 0 || lf(0.0) >= floor) ? 0.0 : bisect(lf, floor, 0.0, x_max, true);
  double x_hi;
  if (std::isinf(a)) {
    // Beyond x_max + 12 sqrt(1 + x_max) the integrand is below e^{-72} f_max.
    x_hi = x_max + 12.0 * std::sqrt(1.0 + x_max);
  } else {
    x_hi = lf(a) >= floor ? a : bisect(lf, floor, x_max, a, false);
  }

  std::vector<double> breaks = {x_lo};
  if (spec.regime() == TruncationRegime::HighQ && x_hi == a) {
    // Mass is piled against the right endpoint: panels shrink geometrically toward a.
    double width = a - x_lo;
    std::vector<double> right;
    for (int j = 0; j < 30 && width > 1e-12 * std::max(1.0, a); ++j) {
      width *= 0.5;
      right.push_back(a - width);
    }
    breaks.insert(breaks.end(), right.begin(), right.end());
  } else {
    const double half_width = 1.0;  // half-max window has width O(1)
    for (double b : {x_max - 2 * half_width, x_max - half_width, x_max, x_max + half_width, x_max + 2 * half_width}) {
      if (b > x_lo && b < x_hi) breaks.push_back(b);
    }
  }
  breaks.push_back(x_hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto scaled = [&](double x) { return std::exp(lf(x) - lf_max); };
  double integral = adaptive_integrate(scaled, breaks, 1e-13);
  if (std::isinf(a)) {
    // Analytic remainder: log f is concave with slope s = q/x - x < 0 past
    // x_hi, so int_{x_hi}^inf f <= f(x_hi) / |s|.
    const double slope = q / x_hi - x_hi;
    integral += std::exp(lf(x_hi) - lf_max) / -slope;
  }
  return LogValue::from_log(lf_max + std::log(integral));
}

LogValue trunc_moment_chi(const TruncationSpec& spec) {
  return LogValue::from_log(0.5 * std::log(2.0 / std::numbers::pi)) * incomplete_integral(spec);
}

LogValue trunc_moment_min(const TruncationSpec& spec) {
  const LogValue chi = trunc_moment_chi(spec);
  if (std::isinf(spec.a)) return chi;
  const double log_cap = (spec.q == 0 ? 0.0 : spec.q * std::log(spec.a)) + log_abs_tail(spec.a);
  return chi + LogValue::from_log(log_cap);
}

MomentOrder moment_order(const TruncationSpec& spec) {
  if (!(spec.q >= 1) || !(spec.a >= 1)) throw DomainError("moment_order: requires q >= 1 and a >= 1");
  const double q = spec.q;
  const double a = spec.a;
  MomentOrder m{spec.regime(), {}, {}};
  if (m.regime == TruncationRegime::LowQ) {
    m.order = LogValue::from_log(0.5 * q * (std::log(q) - 1.0));
    m.upper_order = m.order;
  } else {
    const double denom = std::log(a + q - a * a);
    m.order = LogValue::from_log((q + 1) * std::log(a) - 0.5 * a * a - denom);
    m.upper_order = LogValue::from_log(std::log(q) + (q - 1) * std::log(a) - 0.5 * a * a - denom);
  }
  return m;
}

BoundBracket moment_bracket(const TruncationSpec& spec, const Constants& constants) {
  const MomentOrder m = moment_order(spec);
  const double lo = constants.get("moment_bracket_lo");
  const double hi = constants.get("moment_bracket_hi");
  BoundBracket b;
  b.lower = m.order * LogValue::from_value(lo);
  b.upper = m.upper_order * LogValue::from_value(hi);
  b.constants_used = {{"moment_bracket_lo", lo}, {"moment_bracket_hi", hi}};
  return b;
}

}  // namespace lplab
