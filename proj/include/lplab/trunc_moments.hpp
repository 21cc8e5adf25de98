#pragma once

#include "lplab/bracket.hpp"
#include "lplab/constants.hpp"
#include "lplab/gauss.hpp"
#include "lplab/log_value.hpp"

namespace lplab {

enum class TruncationRegime { LowQ, HighQ };

/// Exponent q and truncation point a (a may be infinite) of the integral
/// int_0^a x^q exp(-x^2/2) dx.
struct TruncationSpec {
  double q = 0;
  double a = kInf;

  /// LowQ iff the peak sqrt(q) of the integrand lies inside [0, a].
  TruncationRegime regime() const { return q <= a * a ? TruncationRegime::LowQ : TruncationRegime::HighQ; }
};

/// Points where x^q exp(-x^2/2) falls to half its maximum on [0, a].
struct HalfMaxWindow {
  double x_left = 0;
  double x_max = 0;
  double x_right = 0;
  LogValue f_max;
  bool degenerate = false;  ///< q = 0: the maximum sits at the origin
};

/// log of x^q exp(-x^2/2); -inf at x = 0 when q > 0.
double log_gauss_power(double q, double x);

HalfMaxWindow half_max_window(const TruncationSpec& spec);

/// int_0^a x^q exp(-x^2/2) dx, relative error below 1e-10.
LogValue incomplete_integral(const TruncationSpec& spec);

/// E(|g|^q 1{|g| <= a}).
LogValue trunc_moment_chi(const TruncationSpec& spec);
/// E min(|g|, a)^q.
LogValue trunc_moment_min(const TruncationSpec& spec);

struct MomentOrder {
  TruncationRegime regime;
  /// (q/e)^{q/2} for q <= a^2, a^{q+1} e^{-a^2/2} / (a + q - a^2) otherwise.
  LogValue order;
  /// Upper-side expression: equals `order` for q <= a^2 and
  /// q a^{q-1} e^{-a^2/2} / (a + q - a^2) for q > a^2.
  LogValue upper_order;
};

/// Closed-form order of the truncated integral. Requires q, a >= 1.
MomentOrder moment_order(const TruncationSpec& spec);

/// moment_order scaled by the calibrated factors moment_bracket_lo/hi; the
/// quadrature value of the integral lies inside.
BoundBracket moment_bracket(const TruncationSpec& spec, const Constants& constants = Constants::defaults());

}  // namespace lplab
