#include "casimir/spectrum_sum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "casimir/mode_determinants.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::int64_t kEvalBudget = 500000;
constexpr int kMaxWindowDoublings = 60;
// Per-term relative accuracy below this is not attainable with double
// integrand values.
constexpr double kRelFloor = 1e-14;

bool wants_te(Mode m) { return m != Mode::TM; }
bool wants_tm(Mode m) { return m != Mode::TE; }

// Lower bound on -d ln|ln Delta|/d xi beyond xi: the uniform (Debye) exponent
// of s_l(g)e_l(g r)/(e_l(g)s_l(g r)) grows at least this fast, and the rate
// increases with xi.
double decay_rate(int l, double xi, double mu, double ratio) {
  const double nu = l + 0.5;
  const double g2 = xi * xi + mu * mu;
  const double a = std::sqrt(nu * nu + g2);
  const double b = std::sqrt(nu * nu + g2 * ratio * ratio);
  return 2.0 * xi * (ratio * ratio - 1.0) / (a + b);
}

double initial_window(int l, double ratio) { return 1.0 + 2.0 / (ratio - 1.0) + l / ratio; }

std::string describe(int l, const ProblemSpec& s) {
  std::ostringstream os;
  os.precision(17);
  os << "l=" << l << " ratio=" << s.ratio << " mu=" << s.mu << " rel_tol=" << s.rel_tol
     << " mode=" << to_string(s.mode);
  return os.str();
}

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::TE: return "te";
    case Mode::TM: return "tm";
    case Mode::Total: return "total";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  std::string low;
  for (char c : s) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (low == "te") return Mode::TE;
  if (low == "tm") return Mode::TM;
  if (low == "total") return Mode::Total;
  throw std::invalid_argument("unknown mode '" + s + "' (expected te, tm or total)");
}

void validate(const ProblemSpec& s) {
  if (!(s.ratio > 1.0) || !std::isfinite(s.ratio)) throw DomainError("ratio must be finite and > 1");
  if (!(s.mu >= 0.0) || !std::isfinite(s.mu)) throw DomainError("mu must be finite and >= 0");
  if (!(s.rel_tol > 0.0 && s.rel_tol <= 1e-2)) throw DomainError("rel_tol must lie in (0, 1e-2]");
  if (s.l_cap < 1) throw DomainError("l_cap must be >= 1");
}

double LTerm::value(Mode m) const {
  switch (m) {
    case Mode::TE: return te;
    case Mode::TM: return tm;
    case Mode::Total: return te + tm;
  }
  return 0.0;
}

double LTerm::error(Mode m) const {
  switch (m) {
    case Mode::TE: return te_err;
    case Mode::TM: return tm_err;
    case Mode::Total: return te_err + tm_err;
  }
  return 0.0;
}

LTerm l_term_detail(int l, const ProblemSpec& spec) {
  validate(spec);
  if (l < 1) throw DomainError("l_term: l must be >= 1");
  const bool te = wants_te(spec.mode);
  const bool tm = wants_tm(spec.mode);
  AdaptiveIntegrator integ([&](double x) -> Vec2 {
    const ModeLogs m = log_deltas(SpectralPoint{l, x, spec.mu, spec.ratio}, te, tm);
    return {m.te, m.tm};
  });

  QuadOptions opt;
  opt.rel_tol = std::max(spec.rel_tol / 10.0, kRelFloor);
  opt.max_evals = kEvalBudget;

  double x_hi = initial_window(l, spec.ratio);
  for (int k = 0; k < 4; ++k) integ.add_interval(x_hi * k / 4.0, x_hi * (k + 1) / 4.0);

  Vec2 tail{0.0, 0.0};
  for (int grow = 0;; ++grow) {
    if (!integ.refine(opt))
      throw ConvergenceError("l_term: quadrature budget exhausted (" + std::to_string(integ.evals()) +
                             " evaluations, window [0," + std::to_string(x_hi) + "]) at " + describe(l, spec));
    const IntegralEstimate est = integ.estimate();
    const Vec2 f_hi = integ.eval(x_hi);
    const double rate = decay_rate(l, x_hi, spec.mu, spec.ratio);
    bool small = true;
    for (std::size_t c = 0; c < 2; ++c) {
      tail[c] = 2.0 * std::fabs(f_hi[c]) / rate;
      if (tail[c] > opt.rel_tol * std::fabs(est.value[c]) / 100.0) small = false;
    }
    if (small) break;
    if (grow == kMaxWindowDoublings)
      throw ConvergenceError("l_term: integrand tail did not decay at " + describe(l, spec));
    integ.add_interval(x_hi, 2.0 * x_hi);
    x_hi *= 2.0;
  }

  const IntegralEstimate est = integ.estimate();
  const double w = 2.0 * l + 1.0;
  LTerm t;
  t.l = l;
  t.te = w * est.value[0];
  t.tm = w * est.value[1];
  t.te_err = w * (est.error[0] + tail[0]);
  t.tm_err = w * (est.error[1] + tail[1]);
  t.window = x_hi;
  t.evals = integ.evals();
  return t;
}

double l_term(int l, const ProblemSpec& spec) { return l_term_detail(l, spec).value(spec.mode); }

EnergyResult energy(const ProblemSpec& spec) {
  validate(spec);
  const int threads = resolve_threads(spec.threads);
  const int chunk = threads == 1 ? 1 : 2 * threads;

  EnergyResult out;
  Kahan sum_te, sum_tm, sum_all;
  double err = 0.0;
  double abs_terms = 0.0;
  double prev_abs = 0.0;
  int quiet = 0;
  double last = 0.0;

  std::vector<LTerm> terms(static_cast<std::size_t>(chunk));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(chunk));

  for (int l0 = 1; l0 <= spec.l_cap; l0 += chunk) {
    const int n = std::min(chunk, spec.l_cap - l0 + 1);
    std::fill(failures.begin(), failures.end(), nullptr);
    auto work = [&](int first) {
      for (int i = first; i < n; i += threads) {
        try {
          terms[static_cast<std::size_t>(i)] = l_term_detail(l0 + i, spec);
        } catch (...) {
          failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    };
    if (threads == 1 || n == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      const int used = std::min(threads, n);
      for (int k = 1; k < used; ++k) pool.emplace_back(work, k);
      work(0);
      for (auto& th : pool) th.join();
    }

    // Fixed ascending-l reduction; the chunk layout never reaches the sums.
    for (int i = 0; i < n; ++i) {
      if (failures[static_cast<std::size_t>(i)]) std::rethrow_exception(failures[static_cast<std::size_t>(i)]);
      const LTerm& t = terms[static_cast<std::size_t>(i)];
      const double v = t.value(spec.mode);
      sum_te.add(t.te);
      sum_tm.add(t.tm);
      sum_all.add(v);
      err += t.error(spec.mode);
      abs_terms += std::fabs(v);
      out.integrand_evals += t.evals;
      out.per_l_terms.emplace_back(t.l, v);
      out.l_used = t.l;
      last = v;

      const double s = std::fabs(sum_all.sum);
      const double a = std::fabs(v);
      quiet = (a < spec.rel_tol * s || v == 0.0) ? quiet + 1 : 0;
      // Geometric estimate of the omitted terms; also required to be small.
      const double q = prev_abs > 0.0 ? a / prev_abs : 0.0;
      const double tail = q < 1.0 ? a * q / (1.0 - q) : std::numeric_limits<double>::infinity();
      prev_abs = a;
      if (quiet >= 3 && (v == 0.0 || tail <= spec.rel_tol * s)) {
        out.te = sum_te.sum;
        out.tm = sum_tm.sum;
        out.value = sum_all.sum;
        out.abs_error_estimate = err + tail + 4.0 * kEps * abs_terms;
        return out;
      }
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "energy: partial-wave sum not converged by l_cap=" << spec.l_cap << " (partial sum " << sum_all.sum
     << ", last term " << last << ") at ratio=" << spec.ratio << " mu=" << spec.mu;
  throw SumNotConverged(os.str(), sum_all.sum, last);
}

double default_fd_step(double ratio) { return std::min(1e-3, (ratio - 1.0) / 10.0); }

double force(const ProblemSpec& spec, double fd_step) {
  validate(spec);
  const double h = fd_step > 0.0 ? fd_step : default_fd_step(spec.ratio);
  if (!(spec.ratio - h > 1.0)) throw DomainError("force: fd_step must keep ratio - fd_step > 1");
  ProblemSpec inner = spec;
  inner.rel_tol = std::max(spec.rel_tol * 1e-3, 1e-13);
  auto e = [&](double r) {
    inner.ratio = r;
    return energy(inner).value;
  };
  const double d_h = (e(spec.ratio + h) - e(spec.ratio - h)) / (2.0 * h);
  const double d_h2 = (e(spec.ratio + 0.5 * h) - e(spec.ratio - 0.5 * h)) / h;
  return -(4.0 * d_h2 - d_h) / 3.0;
}

namespace {

SweepRow run_row(const ProblemSpec& spec, double param) {
  SweepRow row;
  row.param = param;
  try {
    row.result = energy(spec);
    row.ok = true;
  } catch (const std::exception& ex) {
    row.failure = ex.what();
  }
  return row;
}

}  // namespace

SweepTable sweep_ratio(const ProblemSpec& tmpl, double ratio_from, double ratio_to, int steps) {
  if (!(ratio_from > 1.0) || !std::isfinite(ratio_from)) throw DomainError("sweep_ratio: ratio_from must exceed 1");
  if (!(ratio_to > 1.0) || !std::isfinite(ratio_to)) throw DomainError("sweep_ratio: ratio_to must exceed 1");
  if (steps < 2) throw DomainError("sweep_ratio: steps must be >= 2");
  SweepTable t;
  t.param_name = "ratio";
  t.spec_template = tmpl;
  const double lo = std::min(ratio_from, ratio_to);
  const double hi = std::max(ratio_from, ratio_to);
  for (int i = 0; i < steps; ++i) {
    ProblemSpec s = tmpl;
    s.ratio = i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1);
    t.rows.push_back(run_row(s, s.ratio));
  }
  return t;
}

SweepTable sweep_mass(const ProblemSpec& tmpl, const std::vector<double>& mu_list) {
  if (mu_list.empty()) throw DomainError("sweep_mass: mu list is empty");
  for (double mu : mu_list)
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("sweep_mass: mu values must be finite and >= 0");
  std::vector<double> mus = mu_list;
  std::sort(mus.begin(), mus.end());
  SweepTable t;
  t.param_name = "mu";
  t.spec_template = tmpl;
  for (double mu : mus) {
    ProblemSpec s = tmpl;
    s.mu = mu;
    t.rows.push_back(run_row(s, mu));
  }
  return t;
}

}  // namespace casimir
