#include "casimir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace casimir {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

double target(double value, const QuadOptions& opt) { return std::max(opt.abs_tol, opt.rel_tol * std::fabs(value)); }

}  // namespace

Vec2 AdaptiveIntegrator::eval(double x) {
  ++evals_;
  return f_(x);
}

AdaptiveIntegrator::Panel AdaptiveIntegrator::make_panel(double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<Vec2, 15> fv;
  fv[7] = eval(centre);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[static_cast<std::size_t>(j)] = eval(centre - dx);
    fv[static_cast<std::size_t>(14 - j)] = eval(centre + dx);
  }

  Panel p{a, b, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t c = 0; c < 2; ++c) {
    const double fc = fv[7][c];
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    double abs_sum = std::fabs(kron);
    for (std::size_t j = 0; j < 7; ++j) {
      const double f1 = fv[j][c];
      const double f2 = fv[14 - j][c];
      kron += kWgk[j] * (f1 + f2);
      abs_sum += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
      if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * kron;
    double asc = kWgk[7] * std::fabs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) asc += kWgk[j] * (std::fabs(fv[j][c] - mean) + std::fabs(fv[14 - j][c] - mean));

    // QUADPACK error heuristic.
    double err = std::fabs((kron - gauss) * half);
    const double res_asc = asc * std::fabs(half);
    const double res_abs = abs_sum * std::fabs(half);
    if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    const double floor = 50.0 * kEps * res_abs;
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(floor, err);

    p.value[c] = kron * half;
    p.error[c] = err;
    p.floor[c] = floor;
  }
  return p;
}

void AdaptiveIntegrator::add_interval(double a, double b) { panels_.push_back(make_panel(a, b)); }

bool AdaptiveIntegrator::refine(const QuadOptions& opt) {
  while (true) {
    const IntegralEstimate est = estimate();
    double worst_share = 0.0;
    bool done = true;
    // Below twice the summed roundoff floor the target counts as met: more
    // bisection only moves error between panels.
    Vec2 floor{0.0, 0.0};
    for (const Panel& p : panels_)
      for (std::size_t c = 0; c < 2; ++c) floor[c] += p.floor[c];
    for (std::size_t c = 0; c < 2; ++c) {
      const double t = std::max(target(est.value[c], opt), 2.0 * floor[c]);
      if (est.error[c] > t) done = false;
    }
    if (done) return true;
    if (evals_ + 30 > opt.max_evals) return false;

    // Worst panel: largest error relative to its component's target.
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels_.size(); ++i) {
      double share = 0.0;
      for (std::size_t c = 0; c < 2; ++c) {
        const double t = target(est.value[c], opt);
        const double e = panels_[i].error[c] - panels_[i].floor[c];
        const double s = t > 0.0 ? e / t : (e > 0.0 ? 1e300 : 0.0);
        share = std::max(share, s);
      }
      if (share > worst_share) {
        worst_share = share;
        worst = i;
      }
    }
    if (worst_share <= 0.0) return false;  // every panel sits on its roundoff floor
    const Panel p = panels_[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) return false;  // interval exhausted at machine resolution
    panels_[worst] = make_panel(p.a, mid);
    panels_.push_back(make_panel(mid, p.b));
  }
}

IntegralEstimate AdaptiveIntegrator::estimate() const {
  IntegralEstimate est;
  // Panels are summed in order of their left endpoint so the result does not
  // depend on the refinement history beyond the final partition.
  std::vector<const Panel*> order;
  order.reserve(panels_.size());
  for (const Panel& p : panels_) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const Panel* x, const Panel* y) { return x->a < y->a; });
  for (const Panel* p : order) {
    for (std::size_t c = 0; c < 2; ++c) {
      est.value[c] += p->value[c];
      est.error[c] += p->error[c];
    }
  }
  est.evals = evals_;
  est.intervals = panels_.size();
  return est;
}

IntegralEstimate integrate(const AdaptiveIntegrator::Fn& f, double a, double b, const QuadOptions& opt) {
  AdaptiveIntegrator integ(f);
  integ.add_interval(a, b);
  const bool ok = integ.refine(opt);
  IntegralEstimate est = integ.estimate();
  est.converged = ok;
  return est;
}

}  // namespace casimir
