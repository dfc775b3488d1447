#pragma once

// Modified Riccati-Bessel functions on the positive real axis:
//
//   s_l(z) = sqrt(pi z / 2) I_{l+1/2}(z)     (grows like e^z / 2)
//   e_l(z) = sqrt(2 z / pi) K_{l+1/2}(z)     (decays like e^-z)
//
// together with their derivatives and the "tilde" combinations
// s~_l = s_l - z s_l', e~_l = e_l - z e_l'. All values are returned as
// ScaledReal so that neither the growth nor the decay ever leaves the double
// range.

#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/scaled_real.hpp"

namespace casimir {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an internal iteration fails to settle. Indicates a tolerance
/// bug rather than bad user input.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RBFamily {
  int l = 0;
  double z = 0.0;
  ScaledReal s;
  ScaledReal e;
  ScaledReal s_prime;
  ScaledReal e_prime;
  ScaledReal s_tilde;
  ScaledReal e_tilde;
};

/// e_l(z) from the terminating sum e^{-z} sum_k (l+k)!/(k!(l-k)!) (2z)^{-k}.
ScaledReal eval_e(int l, double z);

/// s_l(z). Power series for z <= series_switch(l), otherwise downward
/// ratio recurrence normalized against s_0(z) = sinh z.
ScaledReal eval_s(int l, double z);

/// Full bundle at one (l, z). Derivatives use
///   s_l' = s_{l-1} - (l/z) s_l,   e_l' = -e_{l-1} - (l/z) e_l
/// with s_{-1} = cosh z and e_{-1} = e_0.
RBFamily eval_family(int l, double z);

/// Families for l = 0..l_max at a single argument, sharing one recurrence.
std::vector<RBFamily> eval_batch(int l_max, double z);

/// Argument above which eval_s switches from the series to the recurrence.
inline double series_switch(int l) { return l > 20 ? static_cast<double>(l) : 20.0; }

namespace detail {
// Individual branches, exposed for the overlap tests.
ScaledReal s_series(int l, double z);
ScaledReal s_recurrence(int l, double z);
}  // namespace detail

}  // namespace casimir
