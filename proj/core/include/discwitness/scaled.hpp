#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace discwitness {

/// Complex number stored as mantissa * exp(log_scale).
///
/// The mantissa is kept at unit magnitude (or exactly zero) so that values
/// like f(x)^500 stay representable. Zero is stored as (0, 0).
class ScaledComplex {
 public:
  using complex = std::complex<double>;

  ScaledComplex() = default;
  explicit ScaledComplex(complex value) : ScaledComplex(value, 0.0) {}
  ScaledComplex(complex mantissa, double log_scale) { assign(mantissa, log_scale); }

  /// Value with magnitude exp(log_abs) and the given phase.
  static ScaledComplex polar(double log_abs, double phase) {
    return ScaledComplex(std::polar(1.0, phase), log_abs);
  }

  complex mantissa() const { return mantissa_; }
  double log_scale() const { return log_scale_; }
  bool is_zero() const { return mantissa_ == complex{}; }

  /// ln|z|; -inf for zero.
  double log_abs() const {
    return is_zero() ? -std::numeric_limits<double>::infinity() : log_scale_;
  }

  /// Plain value; overflows to inf or underflows to 0 when the scale is extreme.
  complex value() const { return is_zero() ? complex{} : mantissa_ * std::exp(log_scale_); }
  double abs() const { return is_zero() ? 0.0 : std::exp(log_scale_); }

  /// Value multiplied by exp(-reference_log); used to compare terms on a common scale.
  complex value_relative_to(double reference_log) const {
    return is_zero() ? complex{} : mantissa_ * std::exp(log_scale_ - reference_log);
  }

  friend ScaledComplex operator*(const ScaledComplex& lhs, const ScaledComplex& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return {};
    return ScaledComplex(lhs.mantissa_ * rhs.mantissa_, lhs.log_scale_ + rhs.log_scale_);
  }

  friend ScaledComplex operator/(const ScaledComplex& lhs, const ScaledComplex& rhs) {
    if (lhs.is_zero()) return {};
    return ScaledComplex(lhs.mantissa_ / rhs.mantissa_, lhs.log_scale_ - rhs.log_scale_);
  }

  friend ScaledComplex operator+(const ScaledComplex& lhs, const ScaledComplex& rhs) {
    if (lhs.is_zero()) return rhs;
    if (rhs.is_zero()) return lhs;
    const double ref = std::max(lhs.log_scale_, rhs.log_scale_);
    return ScaledComplex(lhs.value_relative_to(ref) + rhs.value_relative_to(ref), ref);
  }

  friend ScaledComplex operator-(const ScaledComplex& lhs, const ScaledComplex& rhs) {
    return lhs + ScaledComplex(-rhs.mantissa_, rhs.log_scale_);
  }

  ScaledComplex& operator*=(double factor) {
    *this = *this * ScaledComplex(complex(factor, 0.0));
    return *this;
  }

 private:
  void assign(complex mantissa, double log_scale) {
    const double magnitude = std::abs(mantissa);
    if (magnitude == 0.0 || !std::isfinite(magnitude)) {
      mantissa_ = magnitude == 0.0 ? complex{} : mantissa;
      log_scale_ = magnitude == 0.0 ? 0.0 : log_scale;
      return;
    }
    mantissa_ = mantissa / magnitude;
    log_scale_ = log_scale + std::log(magnitude);
  }

  complex mantissa_{};
  double log_scale_ = 0.0;
};

}  // namespace discwitness
