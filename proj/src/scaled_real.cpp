#include "casimir/scaled_real.hpp"

#include <array>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace casimir {

namespace {

constexpr double kE = 2.718281828459045235360287;
constexpr double kLn10 = 2.302585092994045684017991;
constexpr int kTableMax = 708;  // e^708 < DBL_MAX

struct ExpTable {
  std::array<double, kTableMax + 1> pos{};
  std::array<double, kTableMax + 1> neg{};
  ExpTable() {
    for (int k = 0; k <= kTableMax; ++k) {
      pos[k] = std::exp(static_cast<double>(k));
      neg[k] = std::exp(-static_cast<double>(k));
    }
  }
};

const ExpTable& table() {
  static const ExpTable t;
  return t;
}

// m * e^k for integer k, applied in table-sized chunks.
double scale_by_exp(double m, std::int64_t k) {
  const auto& t = table();
  while (k > kTableMax) {
    m *= t.pos[kTableMax];
    k -= kTableMax;
  }
  while (k < -kTableMax) {
    m *= t.neg[kTableMax];
    k += kTableMax;
  }
  return k >= 0 ? m * t.pos[static_cast<std::size_t>(k)] : m * t.neg[static_cast<std::size_t>(-k)];
}

}  // namespace

double exp_neg_int(std::int64_t k) {
  if (k > 745) return 0.0;
  return scale_by_exp(1.0, -k);
}

double exp_pos_int(std::int64_t k) {
  if (k > 709) return std::numeric_limits<double>::infinity();
  return scale_by_exp(1.0, k);
}

ScaledReal::ScaledReal(double value) : mantissa_(value), log_scale_(0.0) {
  if (!std::isfinite(value)) throw std::domain_error("ScaledReal: non-finite input");
  normalize();
}

ScaledReal ScaledReal::from_parts(double mantissa, double log_scale) {
  if (!std::isfinite(mantissa) || !std::isfinite(log_scale))
    throw std::domain_error("ScaledReal: non-finite input");
  ScaledReal r;
  if (mantissa == 0.0) return r;
  const double k = std::floor(log_scale);
  r.mantissa_ = mantissa * std::exp(log_scale - k);
  r.log_scale_ = k;
  r.normalize();
  return r;
}

ScaledReal ScaledReal::exp(double x) { return from_parts(1.0, x); }

void ScaledReal::normalize() {
  double a = std::fabs(mantissa_);
  if (a == 0.0) {
    log_scale_ = 0.0;
    return;
  }
  if (a >= 1.0 && a < kE) return;
  if (a >= kE && a < kE * kE) {
    mantissa_ /= kE;
    log_scale_ += 1.0;
  } else {
    const auto k = static_cast<std::int64_t>(std::floor(std::log(a)));
    mantissa_ = scale_by_exp(mantissa_, -k);
    log_scale_ += static_cast<double>(k);
  }
  // Rounding can leave the mantissa a hair outside [1, e).
  a = std::fabs(mantissa_);
  if (a >= kE) {
    mantissa_ /= kE;
    log_scale_ += 1.0;
  } else if (a < 1.0) {
    mantissa_ *= kE;
    log_scale_ -= 1.0;
  }
}

double ScaledReal::to_double() const {
  if (mantissa_ == 0.0) return 0.0;
  if (log_scale_ > 710.0) return mantissa_ * std::numeric_limits<double>::infinity();
  if (log_scale_ < -746.0) return mantissa_ * 0.0;
  return scale_by_exp(mantissa_, static_cast<std::int64_t>(log_scale_));
}

double ScaledReal::log_abs() const {
  if (mantissa_ == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::fabs(mantissa_)) + log_scale_;
}

ScaledReal& ScaledReal::operator*=(const ScaledReal& rhs) {
  if (mantissa_ == 0.0 || rhs.mantissa_ == 0.0) {
    mantissa_ = 0.0;
    log_scale_ = 0.0;
    return *this;
  }
  mantissa_ *= rhs.mantissa_;
  log_scale_ += rhs.log_scale_;
  if (std::fabs(mantissa_) >= kE) {
    mantissa_ /= kE;
    log_scale_ += 1.0;
  }
  return *this;
}

ScaledReal& ScaledReal::operator/=(const ScaledReal& rhs) {
  if (rhs.mantissa_ == 0.0) throw std::domain_error("ScaledReal: division by zero");
  if (mantissa_ == 0.0) return *this;
  mantissa_ /= rhs.mantissa_;
  log_scale_ -= rhs.log_scale_;
  if (std::fabs(mantissa_) < 1.0) {
    mantissa_ *= kE;
    log_scale_ -= 1.0;
  }
  return *this;
}

ScaledReal& ScaledReal::operator+=(const ScaledReal& rhs) {
  if (rhs.mantissa_ == 0.0) return *this;
  if (mantissa_ == 0.0) {
    *this = rhs;
    return *this;
  }
  const double d = log_scale_ - rhs.log_scale_;
  if (d >= 0.0) {
    mantissa_ += d > 745.0 ? 0.0 : scale_by_exp(rhs.mantissa_, -static_cast<std::int64_t>(d));
  } else {
    mantissa_ = rhs.mantissa_ + (-d > 745.0 ? 0.0 : scale_by_exp(mantissa_, static_cast<std::int64_t>(d)));
    log_scale_ = rhs.log_scale_;
  }
  normalize();
  return *this;
}

std::partial_ordering operator<=>(const ScaledReal& a, const ScaledReal& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::partial_ordering::equivalent;
  // Same sign, both normalized: order by exponent then mantissa magnitude.
  std::partial_ordering mag = a.log_scale_ != b.log_scale_
                                  ? a.log_scale_ <=> b.log_scale_
                                  : std::fabs(a.mantissa_) <=> std::fabs(b.mantissa_);
  if (sa > 0) return mag;
  if (mag == std::partial_ordering::less) return std::partial_ordering::greater;
  if (mag == std::partial_ordering::greater) return std::partial_ordering::less;
  return mag;
}

std::string ScaledReal::to_string() const {
  if (mantissa_ == 0.0) return "0";
  const double log10v = log_abs() / kLn10;
  const double e10 = std::floor(log10v);
  double m10 = std::pow(10.0, log10v - e10);
  if (m10 >= 10.0) m10 /= 10.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.16fe%+.0f", mantissa_ < 0 ? "-" : "", m10, e10);
  return buf;
}

}  // namespace casimir
