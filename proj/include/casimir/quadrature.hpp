#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod integration of a two-component
// integrand (the TE and TM log-determinants share their Bessel evaluations).

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace casimir {

using Vec2 = std::array<double, 2>;

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;          // per component
  std::int64_t max_evals = 400000;
};

struct IntegralEstimate {
  Vec2 value{0.0, 0.0};
  Vec2 error{0.0, 0.0};
  std::int64_t evals = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

class AdaptiveIntegrator {
 public:
  using Fn = std::function<Vec2(double)>;

  explicit AdaptiveIntegrator(Fn f) : f_(std::move(f)) {}

  /// Adds [a, b] as a fresh panel (one 15-point evaluation).
  void add_interval(double a, double b);

  /// Bisects the worst panel until every component meets
  /// error <= max(abs_tol, rel_tol |value|) or the evaluation budget runs out.
  bool refine(const QuadOptions& opt);

  IntegralEstimate estimate() const;
  std::int64_t evals() const { return evals_; }

  /// Plain evaluation through the counter.
  Vec2 eval(double x);

 private:
  struct Panel {
    double a, b;
    Vec2 value, error;
    Vec2 floor;  // roundoff part of error; bisection cannot shrink it
  };

  Panel make_panel(double a, double b);

  Fn f_;
  std::vector<Panel> panels_;
  std::int64_t evals_ = 0;
};

/// One-shot integral over a finite interval.
IntegralEstimate integrate(const AdaptiveIntegrator::Fn& f, double a, double b, const QuadOptions& opt);

}  // namespace casimir
