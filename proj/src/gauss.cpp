#include "lplab/gauss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace lplab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLogSqrt2OverPi = -0.22579135264472743;  // log sqrt(2/pi)

// Beyond this point erfc(t/sqrt2) is replaced by the Mills-ratio continued
// fraction, which stays finite where erfc underflows.
constexpr double kTailSwitch = 26.0;

// R(t) = P{g > t} / phi(t), Lentz evaluation of
// 1/(t + 1/(t + 2/(t + 3/(t + ...)))).
double mills_ratio_cf(double t) {
  constexpr double tiny = 1e-300;
  double f = t;
  double c = t;
  double d = 0;
  for (int k = 1; k < 500; ++k) {
    d = t + k * d;
    if (d == 0) d = tiny;
    c = t + k / c;
    if (c == 0) c = tiny;
    d = 1 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1) < 1e-16) break;
  }
  return 1 / f;
}

}  // namespace

double abs_cdf(double t) {
  if (std::isnan(t) || t < 0) throw DomainError("abs_cdf: t must be >= 0");
  if (std::isinf(t)) return 1.0;
  if (t < 1.5) return std::erf(t / kSqrt2);
  return 1.0 - abs_tail(t);
}

double abs_tail(double t) {
  if (std::isnan(t) || t < 0) throw DomainError("abs_tail: t must be >= 0");
  if (std::isinf(t)) return 0.0;
  if (t < kTailSwitch) return std::erfc(t / kSqrt2);
  return std::exp(log_abs_tail(t));
}

double log_abs_tail(double t) {
  if (std::isnan(t) || t < 0) throw DomainError("log_abs_tail: t must be >= 0");
  if (std::isinf(t)) return -kInf;
  if (t < 1.5) return std::log1p(-std::erf(t / kSqrt2));
  if (t < kTailSwitch) return std::log(std::erfc(t / kSqrt2));
  return kLogSqrt2OverPi - 0.5 * t * t + std::log(mills_ratio_cf(t));
}

double normal_quantile(double u) {
  if (!(u > 0 && u < 1)) throw DomainError("normal_quantile: u must lie in (0, 1)");
  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852854561 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0 ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + .0227238449892691845833) * r + .24178072517745061177) * r +
               1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + .0151986665636164571966) * r +
               .14810397642748007459) * r + .68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + .0012426609473880784386) * r +
               .026532189526576123093) * r + .29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
               7.868691311456132591e-4) * r + .0148753612908506148525) * r + .13692988092273580531) * r +
            .59983220655588793769) * r + 1.0);
  }
  return q < 0 ? -val : val;
}

double log_gamma(double x) {
  if (!(x > 0)) throw DomainError("log_gamma: x must be > 0");
  if (std::isinf(x)) return kInf;
  static constexpr double g = 607.0 / 128.0;
  static constexpr std::array<double, 15> c = {
      0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
      14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
      .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
      -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
      .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};
  if (x < 0.5) {
    // Reflection; sin(pi x) > 0 on (0, 1/2).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = c[0];
  for (std::size_t k = 1; k < c.size(); ++k) sum += c[k] / (z + static_cast<double>(k));
  const double t = z + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace {

// Safeguarded Newton: keeps a bracket [lo, hi] around the root of a
// decreasing (sign = -1) or increasing (sign = +1) residual and bisects
// whenever the Newton step leaves it.
template <typename Residual>
double safeguarded_newton(Residual&& residual, double lo, double hi, double x0) {
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const auto [f, df] = residual(x);
    if (f == 0) return x;
    if (f > 0) hi = x; else lo = x;
    double next = (df != 0 && std::isfinite(df)) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-16 * hi) return next;
    x = next;
  }
  return x;
}

}  // namespace

double quantile_from_tail(double tail) {
  if (!(tail > 0 && tail <= 1)) throw DomainError("quantile_from_tail: tail must lie in (0, 1]");
  if (tail == 1) return 0.0;
  if (tail > 0.5) return quantile(1.0 - tail).value;
  const double log_target = std::log(tail);
  // Residual log(target) - log P{|g| > x} increases in x.
  auto residual = [&](double x) {
    const double lt = log_abs_tail(x);
    // d/dx log P{|g| > x} = -2 phi(x) / P{|g| > x}
    const double dlt = -std::exp(std::numbers::ln2 - 0.5 * x * x - 0.5 * std::log(2 * std::numbers::pi) - lt);
    return std::pair{log_target - lt, -dlt};
  };
  const double hi = 40.0;
  const double guess = -normal_quantile(0.5 * tail);
  return safeguarded_newton(residual, 0.0, hi, guess);
}

Quantile quantile(double alpha) {
  if (!(alpha >= 0 && alpha < 1)) throw DomainError("quantile: alpha must lie in [0, 1)");
  if (alpha == 0) return {0.0, 0.0};
  if (alpha > 0.5) return {alpha, quantile_from_tail(1.0 - alpha)};
  auto residual = [&](double x) { return std::pair{abs_cdf(x) - alpha, 2.0 * normal_pdf(x)}; };
  const double guess = normal_quantile(0.5 + 0.5 * alpha);
  return {alpha, safeguarded_newton(residual, 0.0, 10.0, guess)};
}

double quantile_approx(std::int64_t n, std::int64_t i) {
  if (i < 1 || 2 * i > n) throw DomainError("quantile_approx: need 1 <= i <= n/2");
  const double l = std::log(static_cast<double>(n) / static_cast<double>(i));
  if (!(l > 1)) throw DomainError("quantile_approx: log log(n/i) undefined or negative (n/i <= e)");
  const double s = std::sqrt(2 * l);
  return s - 0.5 * std::log(l) / s;
}

BoundBracket mills_bounds(double t) {
  if (!(t > 0)) throw DomainError("mills_bounds: t must be > 0");
  BoundBracket b;
  if (std::isinf(t)) return b;
  const double base = kLogSqrt2OverPi - 0.5 * t * t;
  b.upper = LogValue::from_log(base - std::log(t));
  const double factor = 1.0 / t - 1.0 / (t * t * t);
  b.lower = factor > 0 ? LogValue::from_log(base + std::log(factor)) : LogValue::zero();
  return b;
}

LogValue abs_moment(double p) {
  if (!(p > -1)) throw DomainError("abs_moment: p must be > -1");
  return LogValue::from_log(-0.5 * std::log(std::numbers::pi) + 0.5 * p * std::numbers::ln2 +
                            log_gamma(0.5 * (p + 1)));
}

double log_sum_pow(std::span<const double> log_abs, double p) {
  if (log_abs.empty()) throw DomainError("log_sum_pow: empty input");
  const double lmax = *std::max_element(log_abs.begin(), log_abs.end());
  if (lmax == -kInf) return -kInf;
  double s = 0;
  for (double la : log_abs) s += std::exp(p * (la - lmax));
  return p * lmax + std::log(s);
}

}  // namespace lplab
