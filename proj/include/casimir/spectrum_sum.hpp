#pragma once

// Energies in units of E0 = hbar c / (2 pi a1):
//
//   E/E0 = sum_{l>=1} (2l+1) int_0^inf ln Delta^l(i xi_hat) d xi_hat
//
// and the force -d(E/E0)/d ratio at fixed a1.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "casimir/special_kernel.hpp"

namespace casimir {

enum class Mode { TE, TM, Total };

const char* to_string(Mode m);
/// Accepts te, tm, total (case-insensitive). Throws std::invalid_argument.
Mode parse_mode(const std::string& s);

struct ProblemSpec {
  double ratio = 2.0;
  double mu = 0.0;
  double rel_tol = 1e-8;
  int l_cap = 5000;
  Mode mode = Mode::Total;
  int threads = 0;  // 0: hardware concurrency. Never changes results.
};

/// Throws DomainError unless ratio > 1, mu >= 0, rel_tol in (0, 1e-2], l_cap >= 1.
void validate(const ProblemSpec& spec);

struct LTerm {
  int l = 0;
  double te = 0.0, tm = 0.0;          // (2l+1) * integral, per polarization
  double te_err = 0.0, tm_err = 0.0;  // includes the truncated tail
  double window = 0.0;                // final integration window [0, X]
  std::int64_t evals = 0;

  double value(Mode m) const;
  double error(Mode m) const;
};

struct EnergyResult {
  double value = 0.0;
  double te = 0.0;
  double tm = 0.0;
  double abs_error_estimate = 0.0;
  int l_used = 0;
  std::int64_t integrand_evals = 0;
  std::vector<std::pair<int, double>> per_l_terms;
};

/// Raised when the partial-wave sum reaches l_cap without converging.
class SumNotConverged : public ConvergenceError {
 public:
  SumNotConverged(const std::string& what, double partial_sum, double last_term)
      : ConvergenceError(what), partial_sum(partial_sum), last_term(last_term) {}
  double partial_sum;
  double last_term;
};

/// Both polarizations (or the one selected by spec.mode) for one l.
/// Throws ConvergenceError when the evaluation budget is exhausted.
LTerm l_term_detail(int l, const ProblemSpec& spec);

/// (2l+1) int ln Delta^l for spec.mode (TE + TM for Total).
double l_term(int l, const ProblemSpec& spec);

EnergyResult energy(const ProblemSpec& spec);

/// min(1e-3, (ratio - 1)/10).
double default_fd_step(double ratio);

/// -d(E/E0)/d ratio by central differences at h and h/2 with one Richardson
/// step. fd_step <= 0 selects default_fd_step.
double force(const ProblemSpec& spec, double fd_step = 0.0);

struct SweepRow {
  double param = 0.0;
  bool ok = false;
  std::string failure;
  EnergyResult result;
};

struct SweepTable {
  std::string param_name;  // "ratio" or "mu"
  ProblemSpec spec_template;
  std::vector<SweepRow> rows;
};

/// steps >= 2 equally spaced ratios in [ratio_from, ratio_to].
SweepTable sweep_ratio(const ProblemSpec& spec_template, double ratio_from, double ratio_to, int steps);
SweepTable sweep_mass(const ProblemSpec& spec_template, const std::vector<double>& mu_list);

}  // namespace casimir
