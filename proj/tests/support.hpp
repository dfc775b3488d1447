#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "casimir/scaled_real.hpp"

namespace testing {

inline double rel_diff(const casimir::ScaledReal& a, const casimir::ScaledReal& b) {
  if (b.is_zero()) return a.is_zero() ? 0.0 : INFINITY;
  return std::fabs((a / b).to_double() - 1.0);
}

inline double rel_diff(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 0.0 : INFINITY;
  return std::fabs(a / b - 1.0);
}

inline std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return v;
}

}  // namespace testing
