#pragma once

// TE and TM mode determinants on the imaginary frequency axis, in units where
// the inner radius a1 = 1:
//
//   gamma_hat  = sqrt(xi_hat^2 + mu^2)   (gamma a1)
//   gamma0_hat = xi_hat                  (gamma0 a1)
//   ratio      = a2 / a1
//
// The TM block matrix Q^l keeps the published layout
//
//   Q = | W1 W2 |      W1 = [gamma a_i s_l'(gamma a_i), gamma a_i e_l'(gamma a_i)]
//       | W3 W4 |      W2 = -mu^2 [s_l(gamma a_i), e_l(gamma a_i)]
//                      W3 = l(l+1) [s_l(gamma0 a1) | e_l(gamma0 a2)] x [s_l, e_l](gamma a_i)
//                      W4 = gamma^2 f(gamma a_i) g~(gamma0 a_i) - gamma0^2 g(gamma0 a_i) f~(gamma a_i)
//
// and Q0 is Q with the four entries (2,2), (2,4), (4,2), (4,4) set to zero.
// W2 and W4 carry a leftover a1^-2 per row; it cancels in det Q / det Q0.

#include <array>

#include "casimir/scaled_real.hpp"
#include "casimir/special_kernel.hpp"

namespace casimir {

struct SpectralPoint {
  int l = 1;
  double xi_hat = 0.0;
  double mu = 0.0;
  double ratio = 2.0;

  double gamma_hat() const;
  double gamma0_hat() const { return xi_hat; }
};

/// Throws DomainError unless l >= 1, xi_hat >= 0, mu >= 0 and ratio > 1.
void validate(const SpectralPoint& p);

using Block2 = std::array<std::array<ScaledReal, 2>, 2>;
using Matrix4 = std::array<std::array<ScaledReal, 4>, 4>;

struct QBlocks {
  Block2 w1, w2, w3, w4;

  /// 0-based entry of the assembled 4x4 matrix.
  const ScaledReal& at(int row, int col) const;
  Matrix4 matrix() const;
};

/// Coefficients of det = A + mu^2 l(l+1) B + mu^4 l^2(l+1)^2 C.
struct DetExpansion {
  ScaledReal a, b, c;
  ScaledReal weight;  // mu^2 l(l+1)

  ScaledReal value() const { return a + weight * (b + weight * c); }
};

/// ln Delta_TE = ln(1 - s_l(g)e_l(g r) / (e_l(g)s_l(g r))), g = gamma_hat.
double log_delta_te(const SpectralPoint& p);

/// Entries of Q^l. Requires xi_hat > 0 (row 3/4 factors are singular
/// at gamma0 = 0).
QBlocks build_q_blocks(const SpectralPoint& p);

/// Closed-form minor expansions of det Q^l and det Q0^l. Require xi_hat > 0.
DetExpansion det_q_expansion(const SpectralPoint& p);
DetExpansion det_q0_expansion(const SpectralPoint& p);

/// Laplace expansion of a 4x4 determinant over the 2x2 minors of rows
/// {0,1} and {2,3}.
ScaledReal det4(const Matrix4& m);

/// det Q0 = (Q12 Q34 - Q32 Q14)(Q21 Q43 - Q23 Q41), 1-based indices.
ScaledReal det_q0_factored(const Matrix4& q);

/// ln(det Q / det Q0) evaluated as log1p(-rho), rho = (det Q0 - det Q)/det Q0
/// assembled from the five Laplace terms that Q0 drops.
double log_delta_tm(const SpectralPoint& p);

/// Massless closed form ln(1 - s'(x)e'(x r)/(e'(x)s'(x r))), x = xi_hat.
double log_delta_tm_massless(int l, double xi_hat, double ratio);

/// ln(1 - Delta) in scaled arithmetic; finite where ln Delta itself has
/// underflowed to 0.
double log_rho_te(const SpectralPoint& p);
double log_rho_tm(const SpectralPoint& p);

struct ModeLogs {
  double te = 0.0;
  double tm = 0.0;
};

/// Both logs at one point, sharing the Riccati-Bessel evaluations. Equal to
/// log_delta_te / log_delta_tm bit for bit.
ModeLogs log_deltas(const SpectralPoint& p, bool want_te, bool want_tm);

}  // namespace casimir
