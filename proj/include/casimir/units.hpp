#pragma once

#include <stdexcept>

namespace casimir {

/// hbar c in eV m (CODATA).
inline constexpr double kHbarCEvM = 1.973269804e-7;
/// Joules per eV (exact SI).
inline constexpr double kJoulePerEv = 1.602176634e-19;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Dimensionless {
  double ratio = 0.0;
  double mu = 0.0;
};

/// ratio = a2/a1, mu = mass_ev a1 / (hbar c). Throws UsageError on
/// a1 <= 0, a2 <= a1 or negative mass.
Dimensionless convert_units(double a1_m, double a2_m, double mass_ev);

/// E0 = hbar c / (2 pi a1) in joules.
double energy_unit_joules(double a1_m);

/// Force unit for -d(E/E0)/d ratio: E0 / a1 in newtons.
double force_unit_newtons(double a1_m);

}  // namespace casimir
