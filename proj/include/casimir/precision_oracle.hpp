#pragma once

// Slow extended-precision reference evaluations. Every fast-path value in the
// library has a counterpart here, computed by a different algorithm:
//
//   s_l   everywhere-convergent Taylor series
//   e_l   terminating sum with exact integer coefficients
//   TE    explicit ratio
//   TM    direct 4x4 cofactor expansion of Q and Q0 (closed-form minor expansion kept
//         as a second, independent path)
//   l_term tanh-sinh quadrature with a doubled-level agreement check
//
// Inputs are doubles; they are converted exactly into the working precision,
// so oracle and fast path evaluate at bit-identical arguments. Results are
// decimal strings. Single-threaded by contract.

#include <stdexcept>
#include <string>

namespace casimir::oracle {

struct PrecisionConfig {
  int decimal_digits = 40;        // >= 40
  int max_series_terms = 200000;  // per series evaluation
};

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { TE, TM };

/// Significant digits printed in results (decimal_digits - 10).
int output_digits(const PrecisionConfig& cfg);

std::string oracle_s(int l, double z, const PrecisionConfig& cfg = {});
std::string oracle_e(int l, double z, const PrecisionConfig& cfg = {});
std::string oracle_s_prime(int l, double z, const PrecisionConfig& cfg = {});
std::string oracle_e_prime(int l, double z, const PrecisionConfig& cfg = {});
std::string oracle_s_tilde(int l, double z, const PrecisionConfig& cfg = {});
std::string oracle_e_tilde(int l, double z, const PrecisionConfig& cfg = {});

/// s e' - s' e evaluated from the oracle values; -1 up to working precision.
std::string oracle_wronskian(int l, double z, const PrecisionConfig& cfg = {});

/// ln Delta^l for TE (explicit ratio) or TM (direct determinants).
std::string oracle_log_delta(int l, double xi_hat, double mu, double ratio, Mode mode,
                             const PrecisionConfig& cfg = {});

/// ln Delta^l_TM from the closed-form minor expansion of det Q and det Q0.
std::string oracle_log_delta_tm_expansion(int l, double xi_hat, double mu, double ratio,
                                          const PrecisionConfig& cfg = {});

/// Massless TM closed form.
std::string oracle_log_delta_tm_massless(int l, double xi_hat, double ratio, const PrecisionConfig& cfg = {});

/// det Q and det Q0 by direct cofactor expansion (a1 = 1 units).
std::string oracle_det_q(int l, double xi_hat, double mu, double ratio, const PrecisionConfig& cfg = {});
std::string oracle_det_q0(int l, double xi_hat, double mu, double ratio, const PrecisionConfig& cfg = {});

/// (2l+1) * integral_0^inf ln Delta^l d xi_hat.
std::string oracle_l_term(int l, double mu, double ratio, Mode mode, const PrecisionConfig& cfg = {});

}  // namespace casimir::oracle
