#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>
#include <type_traits>

#include "lplab/errors.hpp"

namespace lplab {

/// A nonnegative real stored as its natural logarithm.
///
/// Products, quotients and powers are exact operations on the exponent; sums
/// go through log-sum-exp. Zero is tracked by a flag so that it never has to
/// be confused with an underflowed value.
template <typename Scalar>
class BasicLogValue {
  static_assert(std::is_floating_point_v<Scalar>);

 public:
  using scalar_type = Scalar;

  constexpr BasicLogValue() = default;

  static BasicLogValue from_log(Scalar log_magnitude) {
    if (std::isnan(log_magnitude)) throw DomainError("LogValue: NaN log magnitude");
    BasicLogValue v;
    if (log_magnitude == -std::numeric_limits<Scalar>::infinity()) return v;
    v.log_ = log_magnitude;
    v.zero_ = false;
    return v;
  }

  static BasicLogValue from_value(Scalar value) {
    if (!(value >= 0)) throw DomainError("LogValue: negative or NaN value");
    if (value == 0) return BasicLogValue{};
    return from_log(std::log(value));
  }

  static BasicLogValue zero() { return BasicLogValue{}; }
  static BasicLogValue one() { return from_log(0); }
  static BasicLogValue infinity() { return from_log(std::numeric_limits<Scalar>::infinity()); }

  bool is_zero() const { return zero_; }
  bool is_infinite() const { return !zero_ && std::isinf(log_); }

  /// Natural log; -inf for zero.
  Scalar log() const { return zero_ ? -std::numeric_limits<Scalar>::infinity() : log_; }
  Scalar log10() const { return log() / std::log(Scalar(10)); }
  /// The represented value; may over- or underflow.
  Scalar value() const { return zero_ ? Scalar(0) : std::exp(log_); }

  BasicLogValue pow(Scalar exponent) const {
    if (zero_) {
      if (exponent > 0) return zero();
      if (exponent == 0) return one();
      throw DomainError("LogValue: zero raised to a negative power");
    }
    if (exponent == 0) return one();
    return from_log(log_ * exponent);
  }
  BasicLogValue sqrt() const { return pow(Scalar(0.5)); }

  BasicLogValue& operator*=(const BasicLogValue& o) {
    if (zero_ || o.zero_) {
      if (is_infinite() || o.is_infinite()) throw DomainError("LogValue: 0 * inf");
      *this = zero();
    } else {
      log_ += o.log_;
    }
    return *this;
  }
  BasicLogValue& operator/=(const BasicLogValue& o) {
    if (o.zero_) throw DomainError("LogValue: division by zero");
    if (!zero_) {
      if (is_infinite() && o.is_infinite()) throw DomainError("LogValue: inf / inf");
      log_ -= o.log_;
    }
    return *this;
  }
  BasicLogValue& operator+=(const BasicLogValue& o) {
    if (o.zero_) return *this;
    if (zero_) return *this = o;
    const Scalar hi = std::max(log_, o.log_);
    const Scalar lo = std::min(log_, o.log_);
    if (std::isinf(hi)) {
      log_ = hi;
    } else {
      log_ = hi + std::log1p(std::exp(lo - hi));
    }
    return *this;
  }
  /// Requires *this >= o.
  BasicLogValue& operator-=(const BasicLogValue& o) {
    if (o.zero_) return *this;
    if (o > *this) throw DomainError("LogValue: subtraction would be negative");
    if (o.log_ == log_) return *this = zero();
    log_ += std::log(-std::expm1(o.log_ - log_));
    return *this;
  }

  friend BasicLogValue operator*(BasicLogValue a, const BasicLogValue& b) { return a *= b; }
  friend BasicLogValue operator/(BasicLogValue a, const BasicLogValue& b) { return a /= b; }
  friend BasicLogValue operator+(BasicLogValue a, const BasicLogValue& b) { return a += b; }
  friend BasicLogValue operator-(BasicLogValue a, const BasicLogValue& b) { return a -= b; }

  friend bool operator==(const BasicLogValue& a, const BasicLogValue& b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.log_ == b.log_);
  }
  friend std::partial_ordering operator<=>(const BasicLogValue& a, const BasicLogValue& b) {
    return a.log() <=> b.log();
  }

 private:
  Scalar log_ = -std::numeric_limits<Scalar>::infinity();
  bool zero_ = true;
};

using LogValue = BasicLogValue<double>;

template <typename Scalar>
BasicLogValue<Scalar> min(const BasicLogValue<Scalar>& a, const BasicLogValue<Scalar>& b) {
  return b < a ? b : a;
}
template <typename Scalar>
BasicLogValue<Scalar> max(const BasicLogValue<Scalar>& a, const BasicLogValue<Scalar>& b) {
  return a < b ? b : a;
}

}  // namespace lplab
