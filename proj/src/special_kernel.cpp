#include "casimir/special_kernel.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace casimir {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// A positive double carried together with an integer power of e. Used inside
// the series and recurrences, where rescaling by exact table powers is much
// cheaper than a ScaledReal operation per term.
struct ScaledAccumulator {
  static constexpr double kHigh = 1e200;
  static constexpr double kLow = 1e-200;
  static constexpr std::int64_t kShift = 460;  // e^460 ~ 1e200

  double value = 1.0;
  std::int64_t exponent = 0;

  void rebalance() {
    if (value > kHigh) {
      value *= exp_neg_int(kShift);
      exponent += kShift;
    } else if (value < kLow && value > 0.0) {
      value *= exp_pos_int(kShift);
      exponent -= kShift;
    }
  }

  ScaledReal to_scaled() const { return ScaledReal::from_parts(value, static_cast<double>(exponent)); }
};

void check_args(int l, double z, const char* what) {
  if (l < 0) throw DomainError(std::string(what) + ": negative order l=" + std::to_string(l));
  if (!(z > 0.0) || !std::isfinite(z))
    throw DomainError(std::string(what) + ": argument must be positive and finite, got z=" + std::to_string(z));
}

// e^{-z} split as integer exponent plus mantissa so large z loses no digits.
ScaledReal exp_neg(double z) {
  const double n = std::floor(z);
  return ScaledReal::from_parts(std::exp(-(z - n)), -n);
}

// sinh z = e^z (1 - e^{-2z}) / 2, accurate for both tiny and huge z.
ScaledReal sinh_scaled(double z) { return ScaledReal::from_parts(-0.5 * std::expm1(-2.0 * z), z); }

// cosh z = e^z (1 + e^{-2z}) / 2.
ScaledReal cosh_scaled(double z) { return ScaledReal::from_parts(0.5 * (1.0 + std::exp(-2.0 * z)), z); }

// e^{z} e_l(z) = sum_{k=0}^{l} (l+k)!/(k!(l-k)!) (2z)^{-k}; all terms positive.
ScaledAccumulator e_sum(int l, double z) {
  ScaledAccumulator sum;
  double term = 1.0;
  const double two_z = 2.0 * z;
  for (int k = 0; k < l; ++k) {
    term *= (static_cast<double>(l + k + 1) * static_cast<double>(l - k)) / (static_cast<double>(k + 1) * two_z);
    sum.value += term;
    if (sum.value > ScaledAccumulator::kHigh) {
      const double shrink = exp_neg_int(ScaledAccumulator::kShift);
      sum.value *= shrink;
      term *= shrink;
      sum.exponent += ScaledAccumulator::kShift;
    }
  }
  return sum;
}

// s_{n}/s_{n-1} at n = l+1 by the continued fraction
//   rho_n = 1 / ((2n+1)/z + rho_{n+1})
// evaluated with the modified Lentz algorithm.
double s_ratio_cf(int n, double z) {
  constexpr double tiny = 1e-300;
  const int max_iter = 50000 + 4 * static_cast<int>(z);
  double f = (2.0 * n + 1.0) / z;
  double c = f;
  double d = 0.0;
  for (int j = 1; j < max_iter; ++j) {
    const double b = (2.0 * (n + j) + 1.0) / z;
    d = b + d;
    if (d == 0.0) d = tiny;
    d = 1.0 / d;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 0.5 * kEps) return 1.0 / f;
  }
  throw ConvergenceError("s_l continued fraction did not converge at n=" + std::to_string(n) +
                         " z=" + std::to_string(z));
}

struct SPair {
  ScaledReal s;       // s_l
  ScaledReal s_prev;  // s_{l-1}
};

// s_l and s_{l-1} (l >= 1) from the downward ratio chain, normalized by
// s_0 = sinh z.
SPair s_pair_recurrence(int l, double z) {
  double rho = s_ratio_cf(l + 1, z);
  ScaledAccumulator prod;  // prod_{n=1}^{l-1} rho_n
  double rho_l = 0.0;
  for (int n = l; n >= 1; --n) {
    rho = 1.0 / ((2.0 * n + 1.0) / z + rho);
    if (n == l) {
      rho_l = rho;
    } else {
      prod.value *= rho;
      prod.rebalance();
    }
  }
  SPair out;
  out.s_prev = sinh_scaled(z) * prod.to_scaled();
  out.s = out.s_prev * rho_l;
  return out;
}

}  // namespace

namespace detail {

// s_l(z) = z^{l+1}/(2l+1)!! * sum_k t_k, t_{k+1}/t_k = z^2 / (2(k+1)(2k+2l+3)).
ScaledReal s_series(int l, double z) {
  check_args(l, z, "s_series");
  ScaledAccumulator prefactor;
  for (int k = 0; k <= l; ++k) {
    prefactor.value *= z / (2.0 * k + 1.0);
    prefactor.rebalance();
  }
  ScaledAccumulator sum;
  double term = 1.0;
  const double z2 = z * z;
  const int max_terms = 100000;
  for (int k = 0; k < max_terms; ++k) {
    const double ratio = z2 / (2.0 * (k + 1.0) * (2.0 * k + 2.0 * l + 3.0));
    term *= ratio;
    sum.value += term;
    if (sum.value > ScaledAccumulator::kHigh) {
      const double shrink = exp_neg_int(ScaledAccumulator::kShift);
      sum.value *= shrink;
      term *= shrink;
      sum.exponent += ScaledAccumulator::kShift;
    }
    if (ratio < 1.0 && term < 0.25 * kEps * sum.value) {
      return prefactor.to_scaled() * sum.to_scaled();
    }
  }
  throw ConvergenceError("s_l power series did not converge at l=" + std::to_string(l) +
                         " z=" + std::to_string(z));
}

ScaledReal s_recurrence(int l, double z) {
  check_args(l, z, "s_recurrence");
  if (l == 0) return sinh_scaled(z);
  return s_pair_recurrence(l, z).s;
}

}  // namespace detail

ScaledReal eval_e(int l, double z) {
  check_args(l, z, "eval_e");
  return e_sum(l, z).to_scaled() * exp_neg(z);
}

ScaledReal eval_s(int l, double z) {
  check_args(l, z, "eval_s");
  return z <= series_switch(l) ? detail::s_series(l, z) : detail::s_recurrence(l, z);
}

namespace {

RBFamily assemble(int l, double z, ScaledReal s, ScaledReal s_prev, ScaledReal e, ScaledReal e_prev) {
  RBFamily f;
  f.l = l;
  f.z = z;
  const double l_over_z = l / z;
  f.s = s;
  f.e = e;
  f.s_prime = s_prev - s * l_over_z;
  f.e_prime = -(e_prev + e * l_over_z);
  f.s_tilde = f.s - f.s_prime * z;
  f.e_tilde = f.e - f.e_prime * z;
  return f;
}

}  // namespace

RBFamily eval_family(int l, double z) {
  check_args(l, z, "eval_family");
  ScaledReal s, s_prev, e, e_prev;
  if (l == 0) {
    s = sinh_scaled(z);
    s_prev = cosh_scaled(z);
    e = exp_neg(z);
    e_prev = e;
  } else {
    if (z <= series_switch(l)) {
      s = detail::s_series(l, z);
      s_prev = detail::s_series(l - 1, z);
    } else {
      const SPair p = s_pair_recurrence(l, z);
      s = p.s;
      s_prev = p.s_prev;
    }
    const ScaledReal decay = exp_neg(z);
    e = e_sum(l, z).to_scaled() * decay;
    e_prev = e_sum(l - 1, z).to_scaled() * decay;
  }
  return assemble(l, z, s, s_prev, e, e_prev);
}

std::vector<RBFamily> eval_batch(int l_max, double z) {
  check_args(l_max, z, "eval_batch");
  const auto n = static_cast<std::size_t>(l_max) + 1;

  // s: ratios rho_k = s_k/s_{k-1} downward from the continued fraction, then
  // the upward product from s_0 = sinh z.
  std::vector<double> rho(n + 1, 0.0);
  rho[n] = s_ratio_cf(l_max + 1, z);
  for (std::size_t k = n - 1; k >= 1; --k) rho[k] = 1.0 / ((2.0 * static_cast<double>(k) + 1.0) / z + rho[k + 1]);
  std::vector<ScaledReal> s(n);
  s[0] = sinh_scaled(z);
  for (std::size_t k = 1; k < n; ++k) s[k] = s[k - 1] * rho[k];

  // e: upward three-term recurrence e_{k+1} = e_{k-1} + (2k+1)/z e_k on the
  // e^{z}-scaled values; every term is positive.
  std::vector<ScaledReal> e(n);
  const ScaledReal decay = exp_neg(z);
  double e_lo = 1.0;  // e^{z} e_{k-1}
  double e_hi = 1.0;  // e^{z} e_k
  std::int64_t shift = 0;
  e[0] = decay;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double next = e_lo + (2.0 * static_cast<double>(k) + 1.0) / z * e_hi;
    e_lo = e_hi;
    e_hi = next;
    if (e_hi > ScaledAccumulator::kHigh) {
      const double shrink = exp_neg_int(ScaledAccumulator::kShift);
      e_lo *= shrink;
      e_hi *= shrink;
      shift += ScaledAccumulator::kShift;
    }
    e[k + 1] = ScaledReal::from_parts(e_hi, static_cast<double>(shift)) * decay;
  }

  std::vector<RBFamily> out;
  out.reserve(n);
  out.push_back(assemble(0, z, s[0], cosh_scaled(z), e[0], e[0]));
  for (std::size_t k = 1; k < n; ++k) out.push_back(assemble(static_cast<int>(k), z, s[k], s[k - 1], e[k], e[k - 1]));
  return out;
}

}  // namespace casimir
