#include <doctest.h>

#include <cmath>

#include "casimir/quadrature.hpp"

using namespace casimir;

TEST_CASE("polynomials are exact") {
  QuadOptions opt;
  opt.rel_tol = 1e-14;
  const auto r = integrate([](double x) -> Vec2 { return {x * x, 3.0 * std::pow(x, 5)}; }, 0.0, 2.0, opt);
  CHECK(r.converged);
  CHECK(r.value[0] == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(r.value[1] == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(r.evals == 15);
}

TEST_CASE("adaptive refinement reaches the target") {
  QuadOptions opt;
  opt.rel_tol = 1e-11;
  const auto r =
      integrate([](double x) -> Vec2 { return {std::sqrt(x), std::exp(-x) * std::cos(5.0 * x)}; }, 0.0, 4.0, opt);
  CHECK(r.converged);
  const double exact0 = 2.0 / 3.0 * std::pow(4.0, 1.5);
  const double exact1 = (1.0 - std::exp(-4.0) * (std::cos(20.0) - 5.0 * std::sin(20.0))) / 26.0;
  CHECK(std::fabs(r.value[0] - exact0) <= 1e-11 * exact0);
  CHECK(std::fabs(r.value[1] - exact1) <= 1e-11 * std::fabs(exact1) + 1e-16);
  CHECK(r.error[0] <= 1e-11 * exact0);
  CHECK(r.error[0] >= std::fabs(r.value[0] - exact0));
  CHECK(r.intervals > 1);
}

TEST_CASE("budget exhaustion is reported, not hidden") {
  QuadOptions opt;
  opt.rel_tol = 1e-14;
  opt.max_evals = 200;
  const auto r = integrate([](double x) -> Vec2 { return {std::pow(x, -0.9), 0.0}; }, 0.0, 1.0, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.evals <= 200);
}

TEST_CASE("zero integrand converges immediately") {
  const auto r = integrate([](double) -> Vec2 { return {0.0, 0.0}; }, 0.0, 10.0, QuadOptions{});
  CHECK(r.converged);
  CHECK(r.value[0] == 0.0);
  CHECK(r.error[0] == 0.0);
}

TEST_CASE("panels can be appended") {
  AdaptiveIntegrator integ([](double x) -> Vec2 { return {std::exp(-x), 0.0}; });
  integ.add_interval(0.0, 1.0);
  integ.add_interval(1.0, 2.0);
  integ.add_interval(2.0, 40.0);
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  CHECK(integ.refine(opt));
  CHECK(integ.estimate().value[0] == doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-13));
}
