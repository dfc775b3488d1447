#include "casimir/mode_determinants.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace casimir {

namespace {

// ln(1 - rho) for rho in [0, 1). Saturates at the lowest finite double when
// rho rounds to 1 (touching shells); never NaN.
double log1m(double rho) {
  if (rho >= 1.0) return std::numeric_limits<double>::lowest();
  return std::log1p(-rho);
}

// Families at the four arguments gamma a1, gamma a2, gamma0 a1, gamma0 a2.
// The gamma0 pair is absent when xi_hat = 0.
struct PointFamilies {
  RBFamily in, out;                    // gamma a1, gamma a2
  std::optional<RBFamily> in0, out0;   // gamma0 a1, gamma0 a2
};

PointFamilies families(const SpectralPoint& p, bool need_zero_mass_args) {
  const double g = p.gamma_hat();
  PointFamilies f{eval_family(p.l, g), eval_family(p.l, g * p.ratio), std::nullopt, std::nullopt};
  if (need_zero_mass_args && p.xi_hat > 0.0) {
    if (p.mu == 0.0) {
      f.in0 = f.in;
      f.out0 = f.out;
    } else {
      f.in0 = eval_family(p.l, p.xi_hat);
      f.out0 = eval_family(p.l, p.xi_hat * p.ratio);
    }
  }
  return f;
}

ScaledReal te_rho(const PointFamilies& f) { return (f.in.s * f.out.e) / (f.in.e * f.out.s); }

double te_from(const PointFamilies& f) { return log1m(te_rho(f).to_double()); }

// Limit at xi_hat = mu = 0: both polarizations reduce to
// rho = ratio^{-(2l+1)}.
double static_log_rho(const SpectralPoint& p) { return -(2.0 * p.l + 1.0) * std::log(p.ratio); }

double static_limit(const SpectralPoint& p) { return log1m(std::exp(static_log_rho(p))); }

// Q with row 3 divided by s_l(gamma0 a1) and row 4 by e_l(gamma0 a2).
// Row scaling leaves det Q / det Q0 unchanged and keeps xi_hat = 0 finite,
// where s~/s -> -l and e~/e -> l+1.
Matrix4 normalized_q(const SpectralPoint& p, const PointFamilies& f) {
  const double g2 = p.gamma_hat() * p.gamma_hat();
  const double g02 = p.xi_hat * p.xi_hat;
  const double mu2 = p.mu * p.mu;
  const double ll1 = static_cast<double>(p.l) * (p.l + 1.0);
  const double z1 = p.gamma_hat();
  const double z2 = p.gamma_hat() * p.ratio;

  ScaledReal in_tilde_ratio, out_tilde_ratio;
  if (f.in0) {
    in_tilde_ratio = f.in0->s_tilde / f.in0->s;
    out_tilde_ratio = f.out0->e_tilde / f.out0->e;
  } else {
    in_tilde_ratio = ScaledReal(-static_cast<double>(p.l));
    out_tilde_ratio = ScaledReal(p.l + 1.0);
  }

  Matrix4 q;
  q[0] = {z1 * f.in.s_prime, z1 * f.in.e_prime, -mu2 * f.in.s, -mu2 * f.in.e};
  q[1] = {z2 * f.out.s_prime, z2 * f.out.e_prime, -mu2 * f.out.s, -mu2 * f.out.e};
  q[2] = {ll1 * f.in.s, ll1 * f.in.e, g2 * f.in.s * in_tilde_ratio - g02 * f.in.s_tilde,
          g2 * f.in.e * in_tilde_ratio - g02 * f.in.e_tilde};
  q[3] = {ll1 * f.out.s, ll1 * f.out.e, g2 * f.out.s * out_tilde_ratio - g02 * f.out.s_tilde,
          g2 * f.out.e * out_tilde_ratio - g02 * f.out.e_tilde};
  return q;
}

ScaledReal minor2(const Matrix4& m, int r0, int r1, int c0, int c1) {
  return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
}

ScaledReal tm_rho(const SpectralPoint& p, const PointFamilies& f) {
  const Matrix4 m = normalized_q(p, f);
  const ScaledReal f0 = det_q0_factored(m);
  if (f0.is_zero() || f0.sign() < 0)
    throw std::runtime_error("log_delta_tm: det Q0 not positive at l=" + std::to_string(p.l) +
                             " xi_hat=" + std::to_string(p.xi_hat) + " mu=" + std::to_string(p.mu) +
                             " ratio=" + std::to_string(p.ratio));
  // Laplace expansion along rows {1,3}; Q0 keeps only the column pair {0,2}.
  // The remaining five terms are det Q - det Q0.
  ScaledReal diff = minor2(m, 1, 3, 1, 3) * minor2(m, 0, 2, 0, 2);
  diff -= minor2(m, 1, 3, 0, 1) * minor2(m, 0, 2, 2, 3);
  diff -= minor2(m, 1, 3, 0, 3) * minor2(m, 0, 2, 1, 2);
  diff -= minor2(m, 1, 3, 1, 2) * minor2(m, 0, 2, 0, 3);
  diff -= minor2(m, 1, 3, 2, 3) * minor2(m, 0, 2, 0, 1);
  return -(diff / f0);
}

double tm_from(const SpectralPoint& p, const PointFamilies& f) { return log1m(tm_rho(p, f).to_double()); }

}  // namespace

double SpectralPoint::gamma_hat() const { return std::hypot(xi_hat, mu); }

void validate(const SpectralPoint& p) {
  if (p.l < 1) throw DomainError("spectral point: l must be >= 1, got " + std::to_string(p.l));
  if (!(p.xi_hat >= 0.0) || !std::isfinite(p.xi_hat))
    throw DomainError("spectral point: xi_hat must be finite and >= 0");
  if (!(p.mu >= 0.0) || !std::isfinite(p.mu)) throw DomainError("spectral point: mu must be finite and >= 0");
  if (!(p.ratio > 1.0) || !std::isfinite(p.ratio))
    throw DomainError("spectral point: ratio a2/a1 must exceed 1, got " + std::to_string(p.ratio));
}

const ScaledReal& QBlocks::at(int row, int col) const {
  const Block2& b = row < 2 ? (col < 2 ? w1 : w2) : (col < 2 ? w3 : w4);
  return b[static_cast<std::size_t>(row % 2)][static_cast<std::size_t>(col % 2)];
}

Matrix4 QBlocks::matrix() const {
  Matrix4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = at(r, c);
  return m;
}

double log_delta_te(const SpectralPoint& p) {
  validate(p);
  if (p.gamma_hat() == 0.0) return static_limit(p);
  return te_from(families(p, false));
}

QBlocks build_q_blocks(const SpectralPoint& p) {
  validate(p);
  if (!(p.xi_hat > 0.0)) throw DomainError("build_q_blocks: xi_hat must be > 0");
  const PointFamilies f = families(p, true);
  const RBFamily& A = f.in;
  const RBFamily& B = f.out;
  const RBFamily& C = *f.in0;
  const RBFamily& D = *f.out0;
  const double g = p.gamma_hat();
  const double g2 = g * g;
  const double g02 = p.xi_hat * p.xi_hat;
  const double a1 = 1.0;
  const double a2 = p.ratio;
  const double mu2 = p.mu * p.mu;
  const double ll1 = static_cast<double>(p.l) * (p.l + 1.0);

  QBlocks q;
  q.w1 = {{{g * a1 * A.s_prime, g * a1 * A.e_prime}, {g * a2 * B.s_prime, g * a2 * B.e_prime}}};
  q.w2 = {{{-mu2 * A.s, -mu2 * A.e}, {-mu2 * B.s, -mu2 * B.e}}};
  q.w3 = {{{ll1 * C.s * A.s, ll1 * C.s * A.e}, {ll1 * D.e * B.s, ll1 * D.e * B.e}}};
  q.w4 = {{{g2 * A.s * C.s_tilde - g02 * C.s * A.s_tilde, g2 * A.e * C.s_tilde - g02 * C.s * A.e_tilde},
           {g2 * B.s * D.e_tilde - g02 * D.e * B.s_tilde, g2 * B.e * D.e_tilde - g02 * D.e * B.e_tilde}}};
  return q;
}

DetExpansion det_q_expansion(const SpectralPoint& p) {
  validate(p);
  if (!(p.xi_hat > 0.0)) throw DomainError("det_q_expansion: xi_hat must be > 0");
  const PointFamilies f = families(p, true);
  const RBFamily& A = f.in;
  const RBFamily& B = f.out;
  const RBFamily& C = *f.in0;
  const RBFamily& D = *f.out0;
  const double g = p.gamma_hat();
  const double g0 = p.xi_hat;
  const double a1 = 1.0;
  const double a2 = p.ratio;
  const double ga1 = g * a1;
  const double ga2 = g * a2;

  const ScaledReal q33 = g * g * A.s * C.s_tilde - g0 * g0 * C.s * A.s_tilde;
  const ScaledReal q34 = g * g * A.e * C.s_tilde - g0 * g0 * C.s * A.e_tilde;
  const ScaledReal q43 = g * g * B.s * D.e_tilde - g0 * g0 * D.e * B.s_tilde;
  const ScaledReal q44 = g * g * B.e * D.e_tilde - g0 * g0 * D.e * B.e_tilde;

  DetExpansion x;
  x.a = (q34 * q43 - q33 * q44) * (ga1 * A.e_prime * ga2 * B.s_prime - ga1 * A.s_prime * ga2 * B.e_prime);
  x.b = C.s * (ga2 * B.s_prime * A.e - ga2 * B.e_prime * A.s) * (A.e * q43 - A.s * q44) +
        D.e * (ga1 * A.s_prime * B.e - ga1 * A.e_prime * B.s) * (B.e * q33 - B.s * q34) -
        2.0 * g * g * g0 * g0 * a1 * a2 * C.s * D.e;
  const ScaledReal cross = A.e * B.s - A.s * B.e;
  x.c = C.s * D.e * cross * cross;
  x.weight = ScaledReal(p.mu * p.mu * p.l * (p.l + 1.0));
  return x;
}

DetExpansion det_q0_expansion(const SpectralPoint& p) {
  validate(p);
  if (!(p.xi_hat > 0.0)) throw DomainError("det_q0_expansion: xi_hat must be > 0");
  const PointFamilies f = families(p, true);
  const RBFamily& A = f.in;
  const RBFamily& B = f.out;
  const RBFamily& C = *f.in0;
  const RBFamily& D = *f.out0;
  const double g = p.gamma_hat();
  const double g0 = p.xi_hat;
  const double ga1 = g;
  const double ga2 = g * p.ratio;

  const ScaledReal q34 = g * g * A.e * C.s_tilde - g0 * g0 * C.s * A.e_tilde;
  const ScaledReal q43 = g * g * B.s * D.e_tilde - g0 * g0 * D.e * B.s_tilde;

  DetExpansion x;
  x.a = ga1 * A.e_prime * ga2 * B.s_prime * q34 * q43;
  x.b = B.s * B.s * ga1 * A.e_prime * D.e * q34 + A.e * A.e * ga2 * B.s_prime * C.s * q43;
  x.c = B.s * B.s * A.e * A.e * C.s * D.e;
  x.weight = ScaledReal(p.mu * p.mu * p.l * (p.l + 1.0));
  return x;
}

ScaledReal det4(const Matrix4& m) {
  // Rows {0,1} against rows {2,3}; sign (-1)^(c0+c1+1) for 0-based columns.
  ScaledReal det;
  det += minor2(m, 0, 1, 0, 1) * minor2(m, 2, 3, 2, 3);
  det -= minor2(m, 0, 1, 0, 2) * minor2(m, 2, 3, 1, 3);
  det += minor2(m, 0, 1, 0, 3) * minor2(m, 2, 3, 1, 2);
  det += minor2(m, 0, 1, 1, 2) * minor2(m, 2, 3, 0, 3);
  det -= minor2(m, 0, 1, 1, 3) * minor2(m, 2, 3, 0, 2);
  det += minor2(m, 0, 1, 2, 3) * minor2(m, 2, 3, 0, 1);
  return det;
}

ScaledReal det_q0_factored(const Matrix4& q) {
  return minor2(q, 0, 2, 1, 3) * minor2(q, 1, 3, 0, 2);
}

double log_delta_tm(const SpectralPoint& p) {
  validate(p);
  if (p.gamma_hat() == 0.0) return static_limit(p);
  return tm_from(p, families(p, true));
}

double log_delta_tm_massless(int l, double xi_hat, double ratio) {
  if (l < 1) throw DomainError("log_delta_tm_massless: l must be >= 1");
  if (!(xi_hat > 0.0) || !std::isfinite(xi_hat)) throw DomainError("log_delta_tm_massless: xi_hat must be > 0");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw DomainError("log_delta_tm_massless: ratio must exceed 1");
  const RBFamily a = eval_family(l, xi_hat);
  const RBFamily b = eval_family(l, xi_hat * ratio);
  const ScaledReal rho = (a.s_prime * b.e_prime) / (a.e_prime * b.s_prime);
  return log1m(rho.to_double());
}

double log_rho_te(const SpectralPoint& p) {
  validate(p);
  if (p.gamma_hat() == 0.0) return static_log_rho(p);
  return te_rho(families(p, false)).log_abs();
}

double log_rho_tm(const SpectralPoint& p) {
  validate(p);
  if (p.gamma_hat() == 0.0) return static_log_rho(p);
  const ScaledReal rho = tm_rho(p, families(p, true));
  if (rho.sign() <= 0) throw std::runtime_error("log_rho_tm: non-positive 1 - Delta");
  return rho.log_abs();
}

ModeLogs log_deltas(const SpectralPoint& p, bool want_te, bool want_tm) {
  validate(p);
  ModeLogs out;
  if (p.gamma_hat() == 0.0) {
    const double v = static_limit(p);
    if (want_te) out.te = v;
    if (want_tm) out.tm = v;
    return out;
  }
  const PointFamilies f = families(p, want_tm);
  if (want_te) out.te = te_from(f);
  if (want_tm) out.tm = tm_from(p, f);
  return out;
}

}  // namespace casimir
