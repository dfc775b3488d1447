#pragma once

// Overflow-free real arithmetic for quantities that behave like e^{+-z}.
//
// A ScaledReal stores value = mantissa * exp(log_scale) with |mantissa| in
// [1, e) and log_scale an integer-valued double. Keeping the exponent integral
// lets products, quotients and sums align exponents through a table of exact
// integer powers of e instead of calling exp/log on every operation.

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace casimir {

class ScaledReal {
 public:
  constexpr ScaledReal() = default;

  /// Exact conversion of a plain double (up to rounding of one table lookup).
  explicit ScaledReal(double value);

  /// value = mantissa * exp(log_scale) for arbitrary finite inputs; the
  /// fractional part of log_scale is folded into the mantissa.
  static ScaledReal from_parts(double mantissa, double log_scale);

  /// exp(x) without overflow.
  static ScaledReal exp(double x);

  double mantissa() const { return mantissa_; }
  double log_scale() const { return log_scale_; }

  bool is_zero() const { return mantissa_ == 0.0; }
  int sign() const { return (mantissa_ > 0.0) - (mantissa_ < 0.0); }

  /// Plain double; saturates to +-inf or 0 outside the double range.
  double to_double() const;

  /// ln|value|; -inf for zero.
  double log_abs() const;

  ScaledReal abs() const { return from_normalized(std::fabs(mantissa_), log_scale_); }
  ScaledReal operator-() const { return from_normalized(-mantissa_, log_scale_); }

  ScaledReal& operator*=(const ScaledReal& rhs);
  ScaledReal& operator/=(const ScaledReal& rhs);
  ScaledReal& operator+=(const ScaledReal& rhs);
  ScaledReal& operator-=(const ScaledReal& rhs) { return *this += -rhs; }
  ScaledReal& operator*=(double rhs) { return *this *= ScaledReal(rhs); }
  ScaledReal& operator/=(double rhs) { return *this /= ScaledReal(rhs); }

  friend ScaledReal operator*(ScaledReal a, const ScaledReal& b) { return a *= b; }
  friend ScaledReal operator/(ScaledReal a, const ScaledReal& b) { return a /= b; }
  friend ScaledReal operator+(ScaledReal a, const ScaledReal& b) { return a += b; }
  friend ScaledReal operator-(ScaledReal a, const ScaledReal& b) { return a -= b; }
  friend ScaledReal operator*(ScaledReal a, double b) { return a *= b; }
  friend ScaledReal operator*(double a, ScaledReal b) { return b *= a; }
  friend ScaledReal operator/(ScaledReal a, double b) { return a /= b; }

  /// Exact representation equality (same mantissa and exponent).
  friend bool operator==(const ScaledReal&, const ScaledReal&) = default;
  /// Numeric ordering of the represented values.
  friend std::partial_ordering operator<=>(const ScaledReal& a, const ScaledReal& b);

  /// Scientific-notation rendering with 17 significant digits.
  std::string to_string() const;

 private:
  static ScaledReal from_normalized(double m, double s) {
    ScaledReal r;
    r.mantissa_ = m;
    r.log_scale_ = m == 0.0 ? 0.0 : s;
    return r;
  }
  void normalize();

  double mantissa_ = 0.0;
  double log_scale_ = 0.0;
};

/// exp(-k) for integer k >= 0; 0 beyond the double range.
double exp_neg_int(std::int64_t k);
/// exp(k) for integer k >= 0; +inf beyond the double range.
double exp_pos_int(std::int64_t k);

}  // namespace casimir
