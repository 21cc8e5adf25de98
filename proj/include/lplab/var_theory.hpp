#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lplab/bracket.hpp"
#include "lplab/constants.hpp"
#include "lplab/gauss.hpp"
#include "lplab/log_value.hpp"

namespace lplab {

enum class Regime { Low, Mid, High };

std::string_view to_string(Regime r);

/// n, p and the two transition points of the variance formula:
/// p1 = 2 log n / log(2e) and p2 = xi^2, xi = xi_{1-1/n}.
/// Ties go left: p = p1 is Low, p = p2 is Mid.
struct RegimePoint {
  std::int64_t n = 0;
  double p = 0;
  double xi = 0;
  double p1 = 0;
  double p2 = 0;
  Regime regime = Regime::Low;
};

/// Requires n >= n_min and p >= 1 (p = inf allowed).
RegimePoint classify(std::int64_t n, double p, const Constants& constants = Constants::defaults());

/// M(p): M^p = n (p/e)^{p/2} for p <= xi^2, xi^p p / (xi + p - xi^2) beyond.
LogValue truncation_level_M(std::int64_t n, double p, const Constants& constants = Constants::defaults());

// The three pieces of the variance formula, as natural logs.
double log_variance_low(std::int64_t n, double p);
double log_variance_mid(std::int64_t n, double p);
double log_variance_high(std::int64_t n, double p, double xi);

struct Prediction {
  LogValue variance;
  RegimePoint point;
};

/// Order of Var ||G||_p: (2^p/p) n^{2/p-1} (Low),
/// n exp(-(p/2e) n^{2/p}) / (sqrt(log n)(sqrt(log n) + p - p1)) (Mid),
/// (1/log n)(1 - (xi^2 - xi)/p) (High); 1/log n at p = inf.
Prediction predict_variance(std::int64_t n, double p, const Constants& constants = Constants::defaults());

/// min(C' exp(-c n^{(1-(2 tau)^{2/q})/4}), n (4 (2 tau)^{1/q} sqrt(2 log n))^{n/2}),
/// capped at 1. tau in (0, 1/2), q >= 1.
LogValue small_ball_bound(std::int64_t n, double q, double tau, const Constants& constants = Constants::defaults());

struct NegativeMomentBound {
  LogValue direct;    ///< (sum_i xi_{1-i/n}^q)^{-L}
  LogValue integral;  ///< (n E min(|g|, xi)^q)^{-L}
  double ratio = 1;   ///< direct / integral
};

/// Requires q >= 1, L > 0 and q L <= K log n.
NegativeMomentBound negative_moment_bound(std::int64_t n, double q, double L,
                                          const Constants& constants = Constants::defaults());

/// n T^{-3} exp(-T^2/2); T >= xi.
LogValue tail_term(std::int64_t n, double T, const Constants& constants = Constants::defaults());

/// Talagrand-type quantity A(n, p, T) >= 1. Requires p in [1, 3 log n], T >= xi.
LogValue a_quantity(std::int64_t n, double p, double T, const Constants& constants = Constants::defaults());

/// tail_term + n^{2/p-1} / (1 + log A) E(|g|^{2p-2} 1{|g|<=T}) / (E min(xi, |g|)^p)^{2-2/p}.
LogValue combined_upper(std::int64_t n, double p, double T, const Constants& constants = Constants::defaults());

/// Piecewise upper bound on Var ||G||_p; 1/log n cap in the High regime and
/// for p > 3 log n.
LogValue upper_envelope(std::int64_t n, double p, const Constants& constants = Constants::defaults());

/// Piecewise lower bound; High piece (xi^4/p^3)(1 - (xi^2 - xi)/p), floored
/// at pvz_lower_c / log n once p >= pvz_lower_C log n.
LogValue lower_envelope(std::int64_t n, double p, const Constants& constants = Constants::defaults());

/// About 12 points on [1, p1], sqrt(log n) steps on (p1, p2], about 8 points
/// on (p2, 3 log n], then inf. Sorted, p1 and p2 included.
std::vector<double> auto_p_grid(std::int64_t n, const Constants& constants = Constants::defaults());

struct LemmaCheck {
  std::string name;
  std::int64_t n = 0;
  double p = 0;
  double value = 0;  ///< checked quantity (log where stated in `detail`)
  double lo = 0;     ///< admissible range for `value`
  double hi = 0;
  bool pass = false;
  std::string detail;
};

struct LemmaReport {
  std::vector<LemmaCheck> rows;
  bool all_pass() const;
  std::size_t failures() const;
};

/// Pointwise checks of the truncation-level properties on the grids. An
/// empty p grid means auto_p_grid(n) for each n; infinite p is skipped.
LemmaReport lemma_checks(std::span<const std::int64_t> n_grid, std::span<const double> p_grid,
                         const Constants& constants = Constants::defaults());

}  // namespace lplab
