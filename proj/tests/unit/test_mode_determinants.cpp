#include <doctest.h>

#include <cmath>
#include <limits>

#include "../support.hpp"
#include "casimir/goldens.hpp"
#include "casimir/mode_determinants.hpp"
#include "casimir/precision_oracle.hpp"

using namespace casimir;
using testing::logspace;
using testing::rel_diff;

TEST_CASE("spectral point validation") {
  CHECK_THROWS_AS(log_delta_te({0, 1.0, 0.0, 2.0}), DomainError);
  CHECK_THROWS_AS(log_delta_te({1, 1.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(log_delta_tm({1, 1.0, 0.0, 0.5}), DomainError);
  CHECK_THROWS_AS(log_delta_tm({1, 1.0, -0.1, 2.0}), DomainError);
  CHECK_THROWS_AS(log_delta_tm({1, std::nan(""), 0.0, 2.0}), DomainError);
  CHECK_THROWS_AS(build_q_blocks({1, 0.0, 1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(log_delta_tm_massless(1, 0.0, 2.0), DomainError);
  CHECK_THROWS_AS(log_delta_tm_massless(1, 1.0, 1.0), DomainError);
}

TEST_CASE("frozen reference values") {
  CHECK(log_delta_te({1, 1.0, 0.0, 2.0}) == doctest::Approx(-5.349044970593350827e-02).epsilon(1e-13));
  CHECK(log_delta_tm({1, 1.0, 0.5, 1.5}) == doctest::Approx(-2.333862176673255604e-01).epsilon(1e-13));
  CHECK(log_delta_tm_massless(1, 2.0, 1.2) == doctest::Approx(-5.010348051177184444e-01).epsilon(1e-13));
}

TEST_CASE("infinite separation and infinite mass") {
  for (int l : {1, 10})
    for (double mu : {0.0, 2.0}) {
      const SpectralPoint far{l, 1.0, mu, 1e6};
      CHECK(std::fabs(log_delta_te(far)) <= 1e-300);
      CHECK(std::fabs(log_delta_tm(far)) <= 1e-300);
      CHECK(log_rho_te(far) < -1000.0);
    }
  const SpectralPoint heavy{1, 1.0, 1e3, 2.0};
  CHECK(std::fabs(log_delta_te(heavy)) < std::exp(-700.0));
  CHECK(log_rho_te(heavy) < -1000.0);
  CHECK(log_rho_tm(heavy) < -1000.0);
}

TEST_CASE("touching shells diverge without NaN") {
  for (double r : {1.0 + 1e-15, 1.0 + 1e-12, 1.0 + 1e-9}) {
    const double v = log_delta_tm_massless(1, 0.5, r);
    CHECK_FALSE(std::isnan(v));
    CHECK(v < -5.0);
    CHECK_FALSE(std::isnan(log_delta_te({1, 0.5, 0.0, r})));
    CHECK_FALSE(std::isnan(log_delta_tm({1, 0.5, 0.3, r})));
  }
}

TEST_CASE("Q blocks in the massless limit") {
  for (int l : {1, 6})
    for (double xi : {0.4, 3.0})
      for (double r : {1.3, 4.0}) {
        const QBlocks q = build_q_blocks({l, xi, 0.0, r});
        for (const auto& row : q.w2)
          for (const ScaledReal& x : row) CHECK(x.is_zero());
        const double c = xi * xi * xi;
        CHECK(std::fabs(q.w4[0][0].to_double()) <= 1e-12 * c);
        CHECK(std::fabs(q.w4[1][1].to_double()) <= 1e-12 * c);
        CHECK(q.w4[0][1].to_double() == doctest::Approx(-c).epsilon(1e-12));
        CHECK(q.w4[1][0].to_double() == doctest::Approx(r * c).epsilon(1e-12));
      }
}

TEST_CASE("Q entry against the oracle") {
  const double g = std::sqrt(1.25);
  const QBlocks q = build_q_blocks({1, 1.0, 0.5, 1.5});
  const ScaledReal expected = parse_scaled(oracle::oracle_s_prime(1, g)) * g;
  CHECK(rel_diff(q.w1[0][0], expected) <= 1e-13);
  CHECK(rel_diff(q.at(0, 0), q.w1[0][0]) == 0.0);
  CHECK(rel_diff(q.at(3, 2), q.w4[1][0]) == 0.0);
}

TEST_CASE("W3 carries the common factor l(l+1)") {
  const int l = 5;
  const SpectralPoint p{l, 0.7, 1.3, 1.8};
  const QBlocks q = build_q_blocks(p);
  const double g = p.gamma_hat();
  const RBFamily a = eval_family(l, g), b = eval_family(l, g * p.ratio);
  const RBFamily c = eval_family(l, p.xi_hat), d = eval_family(l, p.xi_hat * p.ratio);
  CHECK(rel_diff(q.w3[0][0] / 30.0, c.s * a.s) <= 1e-14);
  CHECK(rel_diff(q.w3[0][1] / 30.0, c.s * a.e) <= 1e-14);
  CHECK(rel_diff(q.w3[1][0] / 30.0, d.e * b.s) <= 1e-14);
  CHECK(rel_diff(q.w3[1][1] / 30.0, d.e * b.e) <= 1e-14);
}

TEST_CASE("minor expansions against direct and factored determinants") {
  for (int l : {1, 4, 17, 40})
    for (double xi : {1e-3, 0.6, 9.0, 150.0})
      for (double mu : {0.0, 0.3, 6.0})
        for (double r : {1.05, 2.5}) {
          const SpectralPoint p{l, xi, mu, r};
          const Matrix4 m = build_q_blocks(p).matrix();
          const DetExpansion x = det_q_expansion(p);
          const DetExpansion x0 = det_q0_expansion(p);
          CHECK(rel_diff(x.value(), det4(m)) <= 1e-9);
          CHECK(rel_diff(x0.value(), det_q0_factored(m)) <= 1e-10);
          CHECK(x.a.sign() > 0);
          CHECK(x.b.sign() > 0);
          CHECK(x.c.sign() > 0);
          CHECK(x0.a.sign() > 0);
          CHECK(x0.b.sign() > 0);
          CHECK(x0.c.sign() > 0);
          if (mu == 0.0) CHECK(x.value() == x.a);
        }
}

TEST_CASE("massless TM closed form") {
  for (int l : {1, 2, 9, 25, 40})
    for (double xi : logspace(1e-4, 200.0, 12))
      for (double r : {1.05, 1.5, 5.0}) {
        const double a = log_delta_tm({l, xi, 0.0, r});
        const double b = log_delta_tm_massless(l, xi, r);
        CHECK(std::fabs(a - b) <= 1e-10);
      }
}

TEST_CASE("massless TE is the gamma = xi substitution") {
  for (int l : {1, 7})
    for (double xi : {0.2, 4.0}) {
      const double r = 1.7;
      const ScaledReal rho = eval_s(l, xi) * eval_e(l, xi * r) / (eval_e(l, xi) * eval_s(l, xi * r));
      CHECK(log_delta_te({l, xi, 0.0, r}) == std::log1p(-rho.to_double()));
    }
}

TEST_CASE("zero-frequency endpoint") {
  for (int l : {1, 3})
    for (double r : {1.1, 2.0}) {
      const double stat = std::log1p(-std::pow(r, -(2.0 * l + 1.0)));
      CHECK(log_delta_te({l, 0.0, 0.0, r}) == doctest::Approx(stat).epsilon(1e-14));
      CHECK(log_delta_tm({l, 0.0, 0.0, r}) == doctest::Approx(stat).epsilon(1e-14));
      CHECK(log_delta_tm({l, 1e-7, 0.0, r}) == doctest::Approx(stat).epsilon(1e-9));
      // Massive: continuous in xi at 0.
      const double at0 = log_delta_tm({l, 0.0, 0.8, r});
      CHECK(std::isfinite(at0));
      CHECK(log_delta_tm({l, 1e-8, 0.8, r}) == doctest::Approx(at0).epsilon(1e-9));
      CHECK(log_delta_te({l, 0.0, 0.8, r}) == doctest::Approx(log_delta_te({l, 1e-8, 0.8, r})).epsilon(1e-12));
    }
}

TEST_CASE("combined evaluation is bit-identical to the single-mode functions") {
  for (int l : {1, 12})
    for (double xi : {0.0, 0.05, 3.0})
      for (double mu : {0.0, 0.9}) {
        const SpectralPoint p{l, xi, mu, 1.4};
        const ModeLogs both = log_deltas(p, true, true);
        CHECK(both.te == log_delta_te(p));
        CHECK(both.tm == log_delta_tm(p));
        CHECK(log_deltas(p, true, false).tm == 0.0);
      }
}

TEST_CASE("Delta lies in (0, 1) on the property grid") {
  for (int l : {1, 3, 10, 25, 40})
    for (double xi : logspace(1e-4, 200.0, 10))
      for (double mu : {0.0, 0.1, 0.5, 5.0})
        for (double r : {1.05, 1.1, 1.5, 2.0, 5.0}) {
          const SpectralPoint p{l, xi, mu, r};
          const double te = log_delta_te(p), tm = log_delta_tm(p);
          CHECK(std::isfinite(te));
          CHECK(std::isfinite(tm));
          CHECK(te <= 0.0);
          CHECK(tm <= 0.0);
          // 1 - Delta stays strictly positive even where ln Delta rounds to 0.
          const double lte = log_rho_te(p), ltm = log_rho_tm(p);
          CHECK(lte < 0.0);
          CHECK(ltm < 0.0);
          if (lte > -700.0) CHECK(te < 0.0);
          if (ltm > -700.0) CHECK(tm < 0.0);
        }
}

TEST_CASE("monotone decay in the ratio") {
  for (int l : {1, 8, 30})
    for (double xi : {1e-3, 0.5, 12.0})
      for (double mu : {0.0, 0.5, 5.0}) {
        double prev_te = 0.0, prev_tm = 0.0, prev_abs_te = INFINITY, prev_abs_tm = INFINITY;
        bool first = true;
        for (double r : {1.05, 1.1, 1.5, 2.0, 5.0}) {
          const SpectralPoint p{l, xi, mu, r};
          const double lte = log_rho_te(p), ltm = log_rho_tm(p);
          const double ate = std::fabs(log_delta_te(p)), atm = std::fabs(log_delta_tm(p));
          if (!first) {
            CHECK(lte < prev_te);
            CHECK(ltm < prev_tm);
            CHECK(ate <= prev_abs_te);
            CHECK(atm <= prev_abs_tm);
            if (ate > 0.0) CHECK(ate < prev_abs_te);
            if (atm > 0.0) CHECK(atm < prev_abs_tm);
          }
          prev_te = lte;
          prev_tm = ltm;
          prev_abs_te = ate;
          prev_abs_tm = atm;
          first = false;
        }
      }
}
