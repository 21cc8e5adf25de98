#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

#include <Eigen/Core>

#include "lplab/bracket.hpp"
#include "lplab/errors.hpp"
#include "lplab/log_value.hpp"

namespace lplab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal density.
inline double normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

/// P{|g| <= t} for a standard Gaussian g.
double abs_cdf(double t);
/// P{|g| > t}, with full relative precision deep into the tail.
double abs_tail(double t);
/// log P{|g| > t}; finite for every finite t >= 0.
double log_abs_tail(double t);

/// Inverse of the standard normal CDF, Wichura's AS 241 rational
/// approximation (about 1e-16 relative). u must lie in (0, 1).
double normal_quantile(double u);

/// log Gamma(x) for x > 0 (Lanczos, g = 607/128).
double log_gamma(double x);

struct Quantile {
  double alpha = 0;  ///< P{|g| <= value}
  double value = 0;  ///< xi_alpha
};

/// xi_alpha with P{|g| <= xi_alpha} = alpha, 0 <= alpha < 1.
Quantile quantile(double alpha);
/// xi_{1 - tail} computed from the tail mass directly, so that tails far
/// below machine epsilon are still resolved. 0 < tail <= 1.
double quantile_from_tail(double tail);

/// sqrt(2 log(n/i)) - (1/2) log log(n/i) / sqrt(2 log(n/i)), the standard
/// asymptotic form of xi_{1-i/n}. Requires 1 <= i <= n/2 and n/i > e.
double quantile_approx(std::int64_t n, std::int64_t i);

/// Two-sided Mills-ratio bracket for P{|g| >= t}, t > 0.
BoundBracket mills_bounds(double t);

/// E|g|^p, p > -1.
LogValue abs_moment(double p);

/// log of sum_i |x_i|^p given the values log|x_i|; the max is factored out.
double log_sum_pow(std::span<const double> log_abs, double p);

/// ||x||_p for p >= 1 or p = infinity, evaluated as m (sum (|x_i|/m)^p)^{1/p}
/// with m = max |x_i| so that large p cannot overflow.
template <typename Derived>
typename Derived::Scalar lp_norm(const Eigen::DenseBase<Derived>& x, double p) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) throw DomainError("lp_norm: empty vector");
  if (!(p >= 1)) throw DomainError("lp_norm: p must be >= 1");
  const auto a = x.derived().array().abs();
  const Scalar m = a.maxCoeff();
  if (m == Scalar(0) || std::isinf(p)) return m;
  if (p == 1) return a.sum();
  if (p == 2) return m * std::sqrt((a / m).square().sum());
  const Scalar s = (a / m).pow(Scalar(p)).sum();
  return m * std::pow(s, Scalar(1) / Scalar(p));
}

}  // namespace lplab
