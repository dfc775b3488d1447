#include "casimir/units.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

namespace casimir {

namespace {

// x = mant * 10^exp with mant < 2^53, taken from the shortest round-trip
// decimal form of x.
struct Decimal {
  std::int64_t mant = 0;
  int exp = 0;
};

constexpr std::int64_t kExactLimit = std::int64_t{1} << 53;

std::optional<Decimal> decimal_of(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  const std::string s(buf, res.ptr);
  const auto epos = s.find('e');
  Decimal d;
  d.exp = std::stoi(s.substr(epos + 1));
  for (std::size_t i = 0; i < epos; ++i) {
    if (s[i] == '.') continue;
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    d.mant = d.mant * 10 + (s[i] - '0');
    if (d.mant >= kExactLimit) return std::nullopt;
    if (i > 1) --d.exp;  // digits after the point
  }
  return d;
}

std::optional<std::int64_t> scale_up(std::int64_t m, int k) {
  for (int i = 0; i < k; ++i) {
    if (m > kExactLimit / 10) return std::nullopt;
    m *= 10;
  }
  return m;
}

// Correctly rounded (num * 10^num_exp) / (den * 10^den_exp) when both sides
// fit into exact doubles after aligning the powers of ten.
std::optional<double> exact_quotient(Decimal num, Decimal den) {
  const int k = num.exp - den.exp;
  const auto n = k >= 0 ? scale_up(num.mant, k) : std::optional<std::int64_t>(num.mant);
  const auto d = k >= 0 ? std::optional<std::int64_t>(den.mant) : scale_up(den.mant, -k);
  if (!n || !d || *d == 0) return std::nullopt;
  return static_cast<double>(*n) / static_cast<double>(*d);
}

// hbar c = 1973269804 x 10^-16 eV m.
constexpr Decimal kHbarCDecimal{1973269804, -16};

}  // namespace

Dimensionless convert_units(double a1_m, double a2_m, double mass_ev) {
  if (!(a1_m > 0.0) || !std::isfinite(a1_m)) throw UsageError("a1 must be a positive length in meters");
  if (!(a2_m > a1_m) || !std::isfinite(a2_m)) {
    std::ostringstream os;
    os.precision(17);
    os << "outer radius a2=" << a2_m << " m must exceed inner radius a1=" << a1_m << " m";
    throw UsageError(os.str());
  }
  if (!(mass_ev >= 0.0) || !std::isfinite(mass_ev)) throw UsageError("mass must be a non-negative energy in eV");

  // The inputs are read as the decimals the user typed, so 0.011/0.01 gives
  // the double nearest 1.1 rather than the quotient of two rounded values.
  Dimensionless out{a2_m / a1_m, mass_ev * a1_m / kHbarCEvM};
  const auto d1 = decimal_of(a1_m);
  const auto d2 = decimal_of(a2_m);
  if (d1 && d2) {
    if (const auto q = exact_quotient(*d2, *d1)) out.ratio = *q;
  }
  const auto dm = decimal_of(mass_ev);
  if (mass_ev == 0.0) {
    out.mu = 0.0;
  } else if (d1 && dm && dm->mant < kExactLimit / d1->mant) {
    if (const auto q = exact_quotient({dm->mant * d1->mant, dm->exp + d1->exp}, kHbarCDecimal)) out.mu = *q;
  }
  return out;
}

double energy_unit_joules(double a1_m) { return kHbarCEvM * kJoulePerEv / (2.0 * std::numbers::pi * a1_m); }

double force_unit_newtons(double a1_m) { return energy_unit_joules(a1_m) / a1_m; }

}  // namespace casimir
