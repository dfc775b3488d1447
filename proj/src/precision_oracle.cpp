#include "casimir/precision_oracle.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <ios>
#include <map>
#include <type_traits>
#include <string>
#include <vector>

namespace casimir::oracle {

namespace {

namespace mp = boost::multiprecision;

template <unsigned Digits>
using BinFloat = mp::number<mp::cpp_bin_float<Digits>, mp::et_off>;

constexpr int kGuardDigits = 10;

template <class Real>
using Matrix4 = std::array<std::array<Real, 4>, 4>;

template <class Real>
class Engine {
 public:
  using real_type = Real;

  explicit Engine(const PrecisionConfig& cfg)
      : cfg_(cfg),
        working_digits_(std::numeric_limits<Real>::digits10),
        series_tol_(pow(Real(10), -(std::numeric_limits<Real>::digits10 + 10))) {}

  std::string str(const Real& x) const { return x.str(output_digits(cfg_), std::ios_base::scientific); }

  // s_{-1}(z) = cosh z closes the derivative identity at l = 0.
  Real s(int l, const Real& z) {
    if (l < 0) return cosh(z);
    const Real z2 = z * z;
    Real term = 1;
    Real sum = 1;
    for (int k = 0; k < cfg_.max_series_terms; ++k) {
      const Real ratio = z2 / (Real(2 * (k + 1)) * Real(2 * k + 2 * l + 3));
      term *= ratio;
      sum += term;
      if (ratio < 1 && term < series_tol_ * sum) return pow(z, l + 1) / Real(double_factorial(2 * l + 1)) * sum;
    }
    throw PrecisionError("oracle s_l series exhausted max_series_terms at l=" + std::to_string(l));
  }

  Real e(int l, const Real& z) {
    if (l < 0) l = 0;
    const auto& c = binomials(l);
    const Real inv = 1 / (2 * z);
    // Horner in 1/(2z).
    Real acc = 0;
    for (int k = l; k >= 0; --k) acc = acc * inv + c[static_cast<std::size_t>(k)];
    return exp(-z) * acc;
  }

  struct Family {
    Real s, e, sp, ep, st, et;
  };

  Family family(int l, const Real& z) {
    Family f;
    f.s = s(l, z);
    f.e = e(l, z);
    f.sp = s(l - 1, z) - Real(l) / z * f.s;
    f.ep = -e(l - 1, z) - Real(l) / z * f.e;
    f.st = f.s - z * f.sp;
    f.et = f.e - z * f.ep;
    return f;
  }

  struct Point {
    int l;
    Real xi, mu, ratio, gamma;
  };

  Point point(int l, double xi, double mu, double ratio) const {
    if (l < 1 || !(ratio > 1.0) || xi < 0.0 || mu < 0.0)
      throw std::domain_error("oracle: invalid spectral point");
    Point p{l, Real(xi), Real(mu), Real(ratio), Real(0)};
    p.gamma = sqrt(p.xi * p.xi + p.mu * p.mu);
    return p;
  }

  Real log_delta_te(const Point& p) {
    const Real z1 = p.gamma;
    const Real z2 = p.gamma * p.ratio;
    const Real rho = s(p.l, z1) * e(p.l, z2) / (e(p.l, z1) * s(p.l, z2));
    return log1p(-rho);
  }

  Real log_delta_tm_massless(int l, const Real& xi, const Real& ratio) {
    const Family a = family(l, xi);
    const Family b = family(l, xi * ratio);
    const Real rho = a.sp * b.ep / (a.ep * b.sp);
    return log1p(-rho);
  }

  // Q^l in a1 = 1 units, rows/columns as printed.
  Matrix4<Real> q_matrix(const Point& p) {
    const Real& g = p.gamma;
    const Real& g0 = p.xi;
    const Real a1 = 1;
    const Real& a2 = p.ratio;
    const Real mu2 = p.mu * p.mu;
    const Real L = Real(p.l) * Real(p.l + 1);
    const Family A = family(p.l, g * a1);
    const Family B = family(p.l, g * a2);
    const Family C = family(p.l, g0 * a1);
    const Family D = family(p.l, g0 * a2);
    Matrix4<Real> q;
    q[0] = {g * a1 * A.sp, g * a1 * A.ep, -mu2 * A.s, -mu2 * A.e};
    q[1] = {g * a2 * B.sp, g * a2 * B.ep, -mu2 * B.s, -mu2 * B.e};
    q[2] = {L * C.s * A.s, L * C.s * A.e, g * g * A.s * C.st - g0 * g0 * C.s * A.st,
            g * g * A.e * C.st - g0 * g0 * C.s * A.et};
    q[3] = {L * D.e * B.s, L * D.e * B.e, g * g * B.s * D.et - g0 * g0 * D.e * B.st,
            g * g * B.e * D.et - g0 * g0 * D.e * B.et};
    return q;
  }

  static Real det3(const std::array<std::array<Real, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  // Cofactor expansion along the first row.
  static Real det4(const Matrix4<Real>& m) {
    Real det = 0;
    for (int c = 0; c < 4; ++c) {
      std::array<std::array<Real, 3>, 3> minor;
      for (int r = 1; r < 4; ++r) {
        int cc = 0;
        for (int k = 0; k < 4; ++k) {
          if (k == c) continue;
          minor[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(cc++)] = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
        }
      }
      const Real term = m[0][static_cast<std::size_t>(c)] * det3(minor);
      det += (c % 2 == 0) ? term : -term;
    }
    return det;
  }

  static Matrix4<Real> q0_from(Matrix4<Real> q) {
    q[1][1] = 0;
    q[1][3] = 0;
    q[3][1] = 0;
    q[3][3] = 0;
    return q;
  }

  struct Expansion {
    Real a, b, c, a0, b0, c0, det_q, det_q0;
  };

  // Minor expansion, transcribed term by term.
  Expansion expansion(const Point& p) {
    const Real& g = p.gamma;
    const Real& g0 = p.xi;
    const Real a1 = 1;
    const Real& a2 = p.ratio;
    const Real L = Real(p.l) * Real(p.l + 1);
    const Real k = p.mu * p.mu * L;
    const Family A = family(p.l, g * a1);
    const Family B = family(p.l, g * a2);
    const Family C = family(p.l, g0 * a1);
    const Family D = family(p.l, g0 * a2);
    const Real q33 = g * g * A.s * C.st - g0 * g0 * C.s * A.st;
    const Real q34 = g * g * A.e * C.st - g0 * g0 * C.s * A.et;
    const Real q43 = g * g * B.s * D.et - g0 * g0 * D.e * B.st;
    const Real q44 = g * g * B.e * D.et - g0 * g0 * D.e * B.et;
    const Real ga1 = g * a1;
    const Real ga2 = g * a2;
    Expansion x;
    x.a = (q34 * q43 - q33 * q44) * (ga1 * A.ep * ga2 * B.sp - ga1 * A.sp * ga2 * B.ep);
    x.b = C.s * (ga2 * B.sp * A.e - ga2 * B.ep * A.s) * (A.e * q43 - A.s * q44) +
          D.e * (ga1 * A.sp * B.e - ga1 * A.ep * B.s) * (B.e * q33 - B.s * q34) -
          2 * g * g * g0 * g0 * a1 * a2 * C.s * D.e;
    x.c = C.s * D.e * pow(A.e * B.s - A.s * B.e, 2);
    x.a0 = ga1 * A.ep * ga2 * B.sp * q34 * q43;
    x.b0 = B.s * B.s * ga1 * A.ep * D.e * q34 + A.e * A.e * ga2 * B.sp * C.s * q43;
    x.c0 = B.s * B.s * A.e * A.e * C.s * D.e;
    x.det_q = x.a + k * x.b + k * k * x.c;
    x.det_q0 = x.a0 + k * x.b0 + k * k * x.c0;
    return x;
  }

  Real log_delta_tm(const Point& p) {
    const Matrix4<Real> q = q_matrix(p);
    return log(det4(q) / det4(q0_from(q)));
  }

  // Refuses results whose digits were consumed by 1 - Delta cancellation.
  void require_resolved(const Real& log_delta) const {
    const Real floor_value = pow(Real(10), -(working_digits_ - output_digits(cfg_) - 5));
    if (abs(log_delta) < floor_value)
      throw PrecisionError("oracle: |ln Delta| below resolvable level at " + std::to_string(cfg_.decimal_digits) +
                           " digits");
  }

  Real integrand(int l, const Real& xi, double mu, double ratio, Mode mode) {
    Point p{l, xi, Real(mu), Real(ratio), Real(0)};
    p.gamma = sqrt(p.xi * p.xi + p.mu * p.mu);
    return mode == Mode::TE ? log_delta_te(p) : log_delta_tm(p);
  }

  // Tanh-sinh on [0, X] with X pushed out until the integrand is negligible.
  Real l_term(int l, double mu, double ratio, Mode mode) {
    if (l < 1 || !(ratio > 1.0) || mu < 0.0) throw std::domain_error("oracle: invalid l_term input");
    const Real negligible = pow(Real(10), -(output_digits(cfg_) + 8));
    const Real pi = boost::math::constants::pi<Real>();
    const Real half_pi = pi / 2;

    Real peak = abs(integrand(l, Real(1e-3), mu, ratio, mode));
    Real x_max = Real(1) + Real(l) / Real(ratio - 1.0);
    for (int i = 0; i < 400; ++i) {
      const Real v = abs(integrand(l, x_max, mu, ratio, mode));
      peak = std::max(peak, v);
      if (v * x_max < negligible * std::max(peak, Real(1e-300))) break;
      x_max *= Real(1.25);
    }

    const Real half = x_max / 2;
    auto node = [&](const Real& t) -> Real {
      const Real u = half_pi * sinh(t);
      const Real x = x_max / (1 + exp(-2 * u));
      const Real w = half * half_pi * cosh(t) / pow(cosh(u), 2);
      if (w == 0 || x == 0 || x == x_max) return Real(0);
      return w * integrand(l, x, mu, ratio, mode);
    };
    const Real weight_floor = pow(Real(10), -(working_digits_ + 5));
    auto t_limit = [&]() {
      Real t = 1;
      while (half * half_pi * cosh(t) / pow(cosh(half_pi * sinh(t)), 2) > weight_floor) t += Real(0.25);
      return t;
    };
    const Real t_max = t_limit();

    Real h = 1;
    Real sum = node(Real(0));
    for (long j = 1; Real(j) * h <= t_max; ++j) sum += node(Real(j) * h) + node(-Real(j) * h);
    Real estimate = sum * h;
    for (int level = 1; level <= 14; ++level) {
      h /= 2;
      for (long j = 1; Real(j) * h <= t_max; j += 2) sum += node(Real(j) * h) + node(-Real(j) * h);
      const Real next = sum * h;
      const Real diff = abs(next - estimate);
      estimate = next;
      if (level >= 4 && diff <= pow(Real(10), -(output_digits(cfg_) + 3)) * abs(estimate)) {
        return Real(2 * l + 1) * estimate;
      }
    }
    throw PrecisionError("oracle: tanh-sinh levels exhausted for l_term l=" + std::to_string(l));
  }

 private:
  static mp::cpp_int double_factorial(int n) {
    mp::cpp_int r = 1;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
  }

  // (l+k)!/(k!(l-k)!) for k = 0..l, exact.
  const std::vector<Real>& binomials(int l) {
    auto it = coefficients_.find(l);
    if (it != coefficients_.end()) return it->second;
    std::vector<Real> c;
    mp::cpp_int v = 1;
    c.emplace_back(1);
    for (int k = 0; k < l; ++k) {
      v = v * (l + k + 1) * (l - k) / (k + 1);
      c.emplace_back(Real(v));
    }
    return coefficients_.emplace(l, std::move(c)).first->second;
  }

  PrecisionConfig cfg_;
  int working_digits_;
  Real series_tol_;
  std::map<int, std::vector<Real>> coefficients_;
};

void check_config(const PrecisionConfig& cfg) {
  if (cfg.decimal_digits < 40) throw std::invalid_argument("oracle: decimal_digits must be >= 40");
  if (cfg.max_series_terms < 1) throw std::invalid_argument("oracle: max_series_terms must be positive");
}

void check_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw std::domain_error("oracle: argument must be positive");
}

// Runs fn with an Engine whose working precision covers decimal_digits plus
// guard digits.
template <class Fn>
std::string dispatch(const PrecisionConfig& cfg, Fn&& fn) {
  check_config(cfg);
  const int working = cfg.decimal_digits + kGuardDigits;
  if (working <= 50) {
    Engine<BinFloat<50>> eng(cfg);
    return fn(eng);
  }
  if (working <= 100) {
    Engine<BinFloat<100>> eng(cfg);
    return fn(eng);
  }
  if (working <= 200) {
    Engine<BinFloat<200>> eng(cfg);
    return fn(eng);
  }
  throw std::invalid_argument("oracle: decimal_digits above 190 not supported");
}

}  // namespace

int output_digits(const PrecisionConfig& cfg) { return cfg.decimal_digits - kGuardDigits; }

std::string oracle_s(int l, double z, const PrecisionConfig& cfg) {
  check_z(z);
  return dispatch(cfg, [&](auto& eng) {
    using Real = typename std::decay_t<decltype(eng)>::real_type;
    return eng.str(eng.s(l, Real(z)));
  });
}

std::string oracle_e(int l, double z, const PrecisionConfig& cfg) {
  check_z(z);
  return dispatch(cfg, [&](auto& eng) {
    using Real = typename std::decay_t<decltype(eng)>::real_type;
    return eng.str(eng.e(l, Real(z)));
  });
}

#define CASIMIR_ORACLE_FAMILY_FIELD(name, field)                                  \
  std::string name(int l, double z, const PrecisionConfig& cfg) {                 \
    check_z(z);                                                                   \
    return dispatch(cfg, [&](auto& eng) {                                         \
      using Real = typename std::decay_t<decltype(eng)>::real_type;                                         \
      return eng.str(eng.family(l, Real(z)).field);                               \
    });                                                                           \
  }

CASIMIR_ORACLE_FAMILY_FIELD(oracle_s_prime, sp)
CASIMIR_ORACLE_FAMILY_FIELD(oracle_e_prime, ep)
CASIMIR_ORACLE_FAMILY_FIELD(oracle_s_tilde, st)
CASIMIR_ORACLE_FAMILY_FIELD(oracle_e_tilde, et)

#undef CASIMIR_ORACLE_FAMILY_FIELD

std::string oracle_wronskian(int l, double z, const PrecisionConfig& cfg) {
  check_z(z);
  return dispatch(cfg, [&](auto& eng) {
    using Real = typename std::decay_t<decltype(eng)>::real_type;
    const auto f = eng.family(l, Real(z));
    return eng.str(f.s * f.ep - f.sp * f.e);
  });
}

std::string oracle_log_delta(int l, double xi_hat, double mu, double ratio, Mode mode, const PrecisionConfig& cfg) {
  return dispatch(cfg, [&](auto& eng) {
    const auto p = eng.point(l, xi_hat, mu, ratio);
    if (!(p.gamma > 0)) throw std::domain_error("oracle: xi_hat and mu both zero");
    if (mode == Mode::TE) return eng.str(eng.log_delta_te(p));
    if (!(p.xi > 0)) throw std::domain_error("oracle: TM determinant needs xi_hat > 0");
    const auto v = eng.log_delta_tm(p);
    eng.require_resolved(v);
    return eng.str(v);
  });
}

std::string oracle_log_delta_tm_expansion(int l, double xi_hat, double mu, double ratio,
                                          const PrecisionConfig& cfg) {
  return dispatch(cfg, [&](auto& eng) {
    const auto p = eng.point(l, xi_hat, mu, ratio);
    if (!(p.xi > 0)) throw std::domain_error("oracle: TM determinant needs xi_hat > 0");
    const auto x = eng.expansion(p);
    const auto v = log(x.det_q / x.det_q0);
    eng.require_resolved(v);
    return eng.str(v);
  });
}

std::string oracle_log_delta_tm_massless(int l, double xi_hat, double ratio, const PrecisionConfig& cfg) {
  if (!(xi_hat > 0.0) || !(ratio > 1.0) || l < 1) throw std::domain_error("oracle: invalid massless point");
  return dispatch(cfg, [&](auto& eng) {
    using Real = typename std::decay_t<decltype(eng)>::real_type;
    return eng.str(eng.log_delta_tm_massless(l, Real(xi_hat), Real(ratio)));
  });
}

std::string oracle_det_q(int l, double xi_hat, double mu, double ratio, const PrecisionConfig& cfg) {
  return dispatch(cfg, [&](auto& eng) {
    const auto p = eng.point(l, xi_hat, mu, ratio);
    if (!(p.xi > 0)) throw std::domain_error("oracle: determinant needs xi_hat > 0");
    return eng.str(eng.det4(eng.q_matrix(p)));
  });
}

std::string oracle_det_q0(int l, double xi_hat, double mu, double ratio, const PrecisionConfig& cfg) {
  return dispatch(cfg, [&](auto& eng) {
    const auto p = eng.point(l, xi_hat, mu, ratio);
    if (!(p.xi > 0)) throw std::domain_error("oracle: determinant needs xi_hat > 0");
    return eng.str(eng.det4(eng.q0_from(eng.q_matrix(p))));
  });
}

std::string oracle_l_term(int l, double mu, double ratio, Mode mode, const PrecisionConfig& cfg) {
  return dispatch(cfg, [&](auto& eng) { return eng.str(eng.l_term(l, mu, ratio, mode)); });
}

}  // namespace casimir::oracle
