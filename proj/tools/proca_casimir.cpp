// proca-casimir: energies and forces between concentric conducting spheres
// for a massive vector field.
//
// Exit codes: 0 success, 1 selftest failure, 2 usage error, 3 convergence
// failure (including any failed sweep row).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/goldens.hpp"
#include "casimir/mode_determinants.hpp"
#include "casimir/special_kernel.hpp"
#include "casimir/spectrum_sum.hpp"
#include "casimir/sweep_io.hpp"
#include "casimir/units.hpp"

#ifndef CASIMIR_DEFAULT_GOLDENS
#define CASIMIR_DEFAULT_GOLDENS "goldens.tsv"
#endif

using nlohmann::json;
using namespace casimir;

namespace {

constexpr const char* kThreadsEnv = "PROCA_CASIMIR_THREADS";

struct Options {
  std::optional<double> ratio, mu, a1, a2, mass;
  std::string mode = "total";
  double rel_tol = 1e-8;
  int l_cap = 5000;
  std::optional<int> threads;
  std::string format;
  bool si = false;

  // sweeps / force
  double from = 0.0, to = 0.0;
  int steps = 0;
  std::vector<double> mu_list, mass_list;
  double fd_step = 0.0;

  std::string goldens = CASIMIR_DEFAULT_GOLDENS;
  double golden_tol = 1e-12;
  std::string replay_file;
};

int resolve_threads(const Options& o) {
  if (o.threads) {
    if (*o.threads < 0) throw UsageError("--threads must be >= 0");
    return *o.threads;
  }
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      const int n = std::stoi(env);
      if (n < 0) throw UsageError("");
      return n;
    } catch (...) {
      throw UsageError(std::string(kThreadsEnv) + " must be a non-negative integer");
    }
  }
  return 0;
}

bool physical(const Options& o) { return o.a1 || o.a2 || o.mass || !o.mass_list.empty(); }
bool dimensionless(const Options& o) { return o.ratio || o.mu || !o.mu_list.empty(); }

void check_exclusive(const Options& o) {
  if (physical(o) && dimensionless(o))
    throw UsageError("dimensionless inputs (--ratio/--mu) and physical inputs (--a1-m/--a2-m/--mass-ev) are mutually exclusive");
}

ProblemSpec base_spec(const Options& o) {
  ProblemSpec s;
  s.rel_tol = o.rel_tol;
  s.l_cap = o.l_cap;
  try {
    s.mode = parse_mode(o.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  s.threads = resolve_threads(o);
  return s;
}

// energy / force inputs
ProblemSpec point_spec(const Options& o) {
  check_exclusive(o);
  ProblemSpec s = base_spec(o);
  if (physical(o)) {
    if (!o.a1 || !o.a2) throw UsageError("physical input needs both --a1-m and --a2-m");
    const Dimensionless d = convert_units(*o.a1, *o.a2, o.mass.value_or(0.0));
    s.ratio = d.ratio;
    s.mu = d.mu;
  } else {
    if (!o.ratio) throw UsageError("need --ratio (or --a1-m/--a2-m)");
    s.ratio = *o.ratio;
    s.mu = o.mu.value_or(0.0);
  }
  return s;
}

json inputs_json(const Options& o) {
  json j = json::object();
  if (o.a1) j["a1_m"] = *o.a1;
  if (o.a2) j["a2_m"] = *o.a2;
  if (o.mass) j["mass_ev"] = *o.mass;
  if (!o.mass_list.empty()) j["mass_ev_list"] = o.mass_list;
  return j;
}

void require_si_inputs(const Options& o) {
  if (o.si && !o.a1) throw UsageError("--si needs physical input (--a1-m)");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json manifest(const std::string& command, const ProblemSpec& s, const Options& o) {
  return {{"command", command}, {"spec", spec_to_json(s)},  {"inputs", inputs_json(o)},
          {"threads", s.threads}, {"version", kVersion}};
}

std::string format_or(const Options& o, const char* fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

int run_energy(const Options& o, const ProblemSpec& s, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const EnergyResult r = energy(s);
  json m = manifest("energy", s, o);
  m["wall_time_s"] = seconds_since(t0);
  m["summary"] = {{"value", r.value}, {"l_used", r.l_used}};
  if (format_or(o, "json") == "csv") {
    SweepTable t;
    t.param_name = "ratio";
    t.spec_template = s;
    t.rows.push_back({s.ratio, true, "", r});
    write_csv(out, t, m);
    if (o.si) out << "# si e0_joules=" << format_double(energy_unit_joules(*o.a1)) << '\n';
    return 0;
  }
  json j = {{"manifest", m}, {"result", result_to_json(r, s.mode)}};
  if (o.si) {
    const double e0 = energy_unit_joules(*o.a1);
    const EnergyColumns c = columns(r, s.mode);
    j["si"] = {{"e0_joules", e0},
               {"e_te_joules", number_or_null(c.te * e0)},
               {"e_tm_joules", number_or_null(c.tm * e0)},
               {"e_total_joules", number_or_null(c.total * e0)},
               {"abs_err_joules", r.abs_error_estimate * e0}};
  }
  out << j.dump(2) << '\n';
  return 0;
}

int run_force(const Options& o, const ProblemSpec& s, double fd_step, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const double h = fd_step > 0.0 ? fd_step : default_fd_step(s.ratio);
  const double f = force(s, h);
  json m = manifest("force", s, o);
  m["fd_step"] = h;
  m["wall_time_s"] = seconds_since(t0);
  m["summary"] = {{"force", f}};
  if (format_or(o, "json") == "csv") {
    out << "# manifest " << m.dump() << '\n' << "param,force\n" << format_double(s.ratio) << ',' << format_double(f) << '\n';
    return 0;
  }
  json j = {{"manifest", m}, {"result", {{"force", f}, {"fd_step", h}}}};
  if (o.si) j["si"] = {{"force_newtons", f * force_unit_newtons(*o.a1)}};
  out << j.dump(2) << '\n';
  return 0;
}

int emit_table(const Options& o, const SweepTable& t, json m, std::chrono::steady_clock::time_point t0,
               std::ostream& out) {
  int failed = 0;
  for (const SweepRow& r : t.rows)
    if (!r.ok) ++failed;
  m["wall_time_s"] = seconds_since(t0);
  m["summary"] = {{"rows", t.rows.size()}, {"failed_rows", failed}};
  if (format_or(o, "csv") == "csv") {
    write_csv(out, t, m);
    if (o.si) out << "# si e0_joules=" << format_double(energy_unit_joules(*o.a1)) << '\n';
  } else {
    json j = {{"manifest", m}, {"table", table_to_json(t)}};
    if (o.si) j["si"] = {{"e0_joules", energy_unit_joules(*o.a1)}};
    out << j.dump(2) << '\n';
  }
  for (const SweepRow& r : t.rows)
    if (!r.ok) std::cerr << "row " << t.param_name << '=' << format_double(r.param) << " failed: " << r.failure << '\n';
  return failed ? 3 : 0;
}

int run_sweep_ratio(const Options& o, const ProblemSpec& s, double from, double to, int steps, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepTable t = sweep_ratio(s, from, to, steps);
  json m = manifest("sweep-ratio", s, o);
  m["sweep"] = {{"from", from}, {"to", to}, {"steps", steps}};
  return emit_table(o, t, m, t0, out);
}

int run_sweep_mass(const Options& o, const ProblemSpec& s, const std::vector<double>& mus, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepTable t = sweep_mass(s, mus);
  json m = manifest("sweep-mass", s, o);
  m["sweep"] = {{"mu_list", mus}};
  return emit_table(o, t, m, t0, out);
}

int cmd_sweep_ratio(const Options& o) {
  check_exclusive(o);
  if (o.ratio) throw UsageError("sweep-ratio takes --from/--to instead of --ratio");
  if (o.a2) throw UsageError("sweep-ratio takes --from/--to instead of --a2-m");
  ProblemSpec s = base_spec(o);
  if (physical(o)) {
    if (!o.a1) throw UsageError("physical input needs --a1-m");
    s.mu = convert_units(*o.a1, 2.0 * *o.a1, o.mass.value_or(0.0)).mu;
  } else {
    s.mu = o.mu.value_or(0.0);
  }
  s.ratio = o.from;
  return run_sweep_ratio(o, s, o.from, o.to, o.steps, std::cout);
}

int cmd_sweep_mass(const Options& o) {
  check_exclusive(o);
  ProblemSpec s = base_spec(o);
  std::vector<double> mus;
  if (physical(o)) {
    if (!o.a1 || !o.a2 || o.mass_list.empty()) throw UsageError("physical input needs --a1-m, --a2-m and --mass-ev-list");
    for (double m : o.mass_list) {
      const Dimensionless d = convert_units(*o.a1, *o.a2, m);
      s.ratio = d.ratio;
      mus.push_back(d.mu);
    }
  } else {
    if (!o.ratio || o.mu_list.empty()) throw UsageError("need --ratio and --mu-list");
    s.ratio = *o.ratio;
    mus = o.mu_list;
  }
  return run_sweep_mass(o, s, mus, std::cout);
}

int cmd_replay(Options o) {
  std::ifstream in(o.replay_file);
  if (!in) throw UsageError("cannot open " + o.replay_file);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json m;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    m = json::parse(text).at("manifest");
    o.format = "json";
  } else {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
      if (line.rfind("# manifest ", 0) == 0) m = json::parse(line.substr(11));
    if (m.is_null()) throw UsageError("no manifest in " + o.replay_file);
    o.format = "csv";
  }
  ProblemSpec s = spec_from_json(m.at("spec"));
  s.threads = resolve_threads(o);
  const json& inputs = m.value("inputs", json::object());
  if (inputs.contains("a1_m")) o.a1 = inputs.at("a1_m").get<double>();
  const std::string cmd = m.at("command");
  if (cmd == "energy") return run_energy(o, s, std::cout);
  if (cmd == "force") return run_force(o, s, m.at("fd_step").get<double>(), std::cout);
  const json& sw = m.at("sweep");
  if (cmd == "sweep-ratio")
    return run_sweep_ratio(o, s, sw.at("from").get<double>(), sw.at("to").get<double>(), sw.at("steps").get<int>(),
                           std::cout);
  if (cmd == "sweep-mass") return run_sweep_mass(o, s, sw.at("mu_list").get<std::vector<double>>(), std::cout);
  throw UsageError("manifest names unknown command '" + cmd + "'");
}

int cmd_selftest(const Options& o) {
  int checks = 0;
  int failures = 0;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      std::cout << "FAIL " << what << '\n';
    }
  };

  std::ifstream in(o.goldens);
  if (!in) {
    std::cout << "FAIL cannot open golden file " << o.goldens << '\n';
    return 1;
  }
  const std::vector<GoldenRow> rows = read_goldens(in);
  double worst = 0.0;
  for (const GoldenRow& row : rows) {
    const std::string label = row.op + " " + format_args(row.args);
    try {
      const GoldenCheck c = check_golden(row);
      worst = std::max(worst, c.rel_error);
      expect(c.rel_error <= o.golden_tol, label + " rel_err=" + format_double(c.rel_error));
    } catch (const std::exception& e) {
      expect(false, label + ": " + e.what());
    }
  }
  const std::size_t golden_checks = rows.size();
  expect(golden_checks >= 200, "golden file has fewer than 200 rows");

  for (int l : {0, 1, 7, 30, 60})
    for (double z : {1e-3, 0.4, 3.0, 21.0, 50.0}) {
      const RBFamily f = eval_family(l, z);
      const double w = (f.s * f.e_prime - f.s_prime * f.e).to_double();
      expect(std::fabs(w + 1.0) <= 1e-12, "wronskian l=" + std::to_string(l) + " z=" + format_double(z));
    }
  for (int l : {1, 4, 20})
    for (double xi : {1e-3, 0.8, 15.0})
      for (double r : {1.05, 2.0}) {
        const SpectralPoint p{l, xi, 0.0, r};
        const double tm = log_delta_tm(p);
        expect(std::fabs(tm - log_delta_tm_massless(l, xi, r)) <= 1e-10, "massless TM reduction at l=" +
                                                                               std::to_string(l) + " xi=" + format_double(xi));
        expect(tm < 0.0 && log_delta_te(p) < 0.0, "negative log determinants");
      }
  ProblemSpec s;
  s.ratio = 1.5;
  s.rel_tol = 1e-6;
  s.threads = resolve_threads(o);
  const EnergyResult r = energy(s);
  expect(r.value < 0.0 && r.te < 0.0 && r.tm < 0.0, "energy sign at ratio 1.5");
  expect(std::fabs(r.value - (r.te + r.tm)) <= 1e-12 * std::fabs(r.value), "total equals TE + TM");

  std::cout << "selftest: " << golden_checks << " golden rows (worst rel err " << format_double(worst) << "), "
            << checks - static_cast<int>(golden_checks) << " invariant checks, " << failures << " failures\n";
  return failures == 0 ? 0 : 1;
}

void add_physics(CLI::App* c, Options& o, bool point) {
  if (point) {
    c->add_option("--ratio", o.ratio, "a2/a1 (> 1)");
    c->add_option("--a2-m", o.a2, "outer radius in meters");
  }
  c->add_option("--mu", o.mu, "dimensionless mass m c a1 / hbar");
  c->add_option("--a1-m", o.a1, "inner radius in meters");
  c->add_option("--mass-ev", o.mass, "field mass m c^2 in eV");
  c->add_option("--mode", o.mode, "te, tm or total")->default_val("total");
  c->add_option("--rel-tol", o.rel_tol, "target relative accuracy")->default_val(1e-8);
  c->add_option("--l-cap", o.l_cap, "hard cap on partial waves")->default_val(5000);
  c->add_option("--threads", o.threads, std::string("worker threads (default: ") + kThreadsEnv + " or all cores)");
  c->add_option("--format", o.format, "json or csv");
  c->add_flag("--si", o.si, "also report joules / newtons (needs --a1-m)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir energy and force of a massive vector field between concentric conducting spheres"};
  app.require_subcommand(1);
  Options o;

  auto* energy_cmd = app.add_subcommand("energy", "E/E0 for one configuration");
  add_physics(energy_cmd, o, true);

  auto* force_cmd = app.add_subcommand("force", "-d(E/E0)/d(a2/a1) at fixed a1");
  add_physics(force_cmd, o, true);
  force_cmd->add_option("--fd-step", o.fd_step, "finite-difference step in ratio (default min(1e-3, (ratio-1)/10))");

  auto* sr = app.add_subcommand("sweep-ratio", "energies over equally spaced ratios");
  add_physics(sr, o, false);
  sr->add_option("--from", o.from, "first ratio")->required();
  sr->add_option("--to", o.to, "last ratio")->required();
  sr->add_option("--steps", o.steps, "number of ratios (>= 2)")->required();

  auto* sm = app.add_subcommand("sweep-mass", "energies over a list of masses");
  add_physics(sm, o, true);
  sm->add_option("--mu-list", o.mu_list, "comma-separated dimensionless masses")->delimiter(',');
  sm->add_option("--mass-ev-list", o.mass_list, "comma-separated masses in eV")->delimiter(',');

  auto* st = app.add_subcommand("selftest", "golden-value suite and invariant spot checks");
  st->add_option("--goldens", o.goldens, "golden file")->default_val(std::string(CASIMIR_DEFAULT_GOLDENS));
  st->add_option("--tol", o.golden_tol, "relative tolerance per golden row")->default_val(1e-12);
  st->add_option("--threads", o.threads, "worker threads");

  auto* rp = app.add_subcommand("replay", "re-run the command recorded in an output file's manifest");
  rp->add_option("file", o.replay_file, "JSON or CSV output file")->required();
  rp->add_option("--threads", o.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*energy_cmd) {
      require_si_inputs(o);
      return run_energy(o, point_spec(o), std::cout);
    }
    if (*force_cmd) {
      require_si_inputs(o);
      return run_force(o, point_spec(o), o.fd_step, std::cout);
    }
    if (*sr) {
      require_si_inputs(o);
      return cmd_sweep_ratio(o);
    }
    if (*sm) {
      require_si_inputs(o);
      return cmd_sweep_mass(o);
    }
    if (*st) return cmd_selftest(o);
    if (*rp) return cmd_replay(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "usage error: malformed manifest: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
