#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <type_traits>

namespace lplab {

/// One-pass accumulator of count, mean and central moments up to order 4.
///
/// push() is Welford's update extended to M3 and M4; merge() is the pairwise
/// combination of two partial accumulators (Chan et al., Pebay).
template <typename Scalar = double>
class RunningMoments {
  static_assert(std::is_floating_point_v<Scalar>);

 public:
  void push(Scalar x) {
    const Scalar n1 = static_cast<Scalar>(n_);
    ++n_;
    const Scalar n = static_cast<Scalar>(n_);
    const Scalar delta = x - mean_;
    const Scalar delta_n = delta / n;
    const Scalar delta_n2 = delta_n * delta_n;
    const Scalar term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3 * n + 3) + 6 * delta_n2 * m2_ - 4 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2) - 3 * delta_n * m2_;
    m2_ += term1;
  }

  void merge(const RunningMoments& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const Scalar na = static_cast<Scalar>(n_);
    const Scalar nb = static_cast<Scalar>(o.n_);
    const Scalar n = na + nb;
    const Scalar delta = o.mean_ - mean_;
    const Scalar d2 = delta * delta;
    const Scalar d3 = d2 * delta;
    const Scalar d4 = d2 * d2;
    const Scalar m2 = m2_ + o.m2_ + d2 * na * nb / n;
    const Scalar m3 = m3_ + o.m3_ + d3 * na * nb * (na - nb) / (n * n) + 3 * delta * (na * o.m2_ - nb * m2_) / n;
    const Scalar m4 = m4_ + o.m4_ + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) + 4 * delta * (na * o.m3_ - nb * m3_) / n;
    mean_ += delta * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += o.n_;
  }

  std::int64_t count() const { return n_; }
  Scalar mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  Scalar variance() const { return n_ > 1 ? std::max(Scalar(0), m2_ / static_cast<Scalar>(n_ - 1)) : Scalar(0); }
  /// Biased central moments m_k / n.
  Scalar central_moment2() const { return n_ > 0 ? m2_ / static_cast<Scalar>(n_) : Scalar(0); }
  Scalar central_moment3() const { return n_ > 0 ? m3_ / static_cast<Scalar>(n_) : Scalar(0); }
  Scalar central_moment4() const { return n_ > 0 ? m4_ / static_cast<Scalar>(n_) : Scalar(0); }

  Scalar stderr_mean() const { return n_ > 1 ? std::sqrt(variance() / static_cast<Scalar>(n_)) : Scalar(0); }
  /// Standard error of variance(): sqrt((mu4 - s^4 (n-3)/(n-1)) / n).
  Scalar stderr_variance() const {
    if (n_ < 4) return Scalar(0);
    const Scalar n = static_cast<Scalar>(n_);
    const Scalar s2 = variance();
    const Scalar v = (central_moment4() - s2 * s2 * (n - 3) / (n - 1)) / n;
    return std::sqrt(std::max(Scalar(0), v));
  }

 private:
  std::int64_t n_ = 0;
  Scalar mean_ = 0;
  Scalar m2_ = 0;
  Scalar m3_ = 0;
  Scalar m4_ = 0;
};

/// Combines per-stream accumulators by a balanced pairwise tree whose shape
/// depends only on the number of parts, never on execution order.
template <typename Scalar>
RunningMoments<Scalar> merge_tree(std::span<const RunningMoments<Scalar>> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts.front();
  const std::size_t half = parts.size() / 2;
  RunningMoments<Scalar> left = merge_tree(parts.first(half));
  left.merge(merge_tree(parts.subspan(half)));
  return left;
}

}  // namespace lplab
