#include "casimir/goldens.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "casimir/mode_determinants.hpp"
#include "casimir/special_kernel.hpp"
#include "casimir/spectrum_sum.hpp"

namespace casimir {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const std::string t = trim(s);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

void require_op(const std::string& op) {
  const auto& ops = golden_ops();
  if (std::find(ops.begin(), ops.end(), op) == ops.end()) throw std::invalid_argument("unknown golden op '" + op + "'");
}

GoldenArgs parse_args(const std::string& text) {
  GoldenArgs args;
  for (const std::string& kv : split(text, ';')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected name=value in '" + kv + "'");
    args.emplace_back(trim(kv.substr(0, eq)), parse_number(kv.substr(eq + 1)));
  }
  return args;
}

SpectralPoint point_of(const GoldenArgs& a) {
  return {static_cast<int>(arg(a, "l")), arg(a, "xi"), arg(a, "mu"), arg(a, "ratio")};
}

ScaledReal family_field(const std::string& op, const GoldenArgs& a) {
  const RBFamily f = eval_family(static_cast<int>(arg(a, "l")), arg(a, "z"));
  if (op == "s_prime") return f.s_prime;
  if (op == "e_prime") return f.e_prime;
  if (op == "s_tilde") return f.s_tilde;
  return f.e_tilde;
}

ScaledReal fast_value(const GoldenRow& row) {
  const std::string& op = row.op;
  const GoldenArgs& a = row.args;
  if (op == "s") return eval_s(static_cast<int>(arg(a, "l")), arg(a, "z"));
  if (op == "e") return eval_e(static_cast<int>(arg(a, "l")), arg(a, "z"));
  if (op == "s_prime" || op == "e_prime" || op == "s_tilde" || op == "e_tilde") return family_field(op, a);
  if (op == "log_delta_te") return ScaledReal(log_delta_te(point_of(a)));
  if (op == "log_delta_tm") return ScaledReal(log_delta_tm(point_of(a)));
  if (op == "log_delta_tm_massless")
    return ScaledReal(log_delta_tm_massless(static_cast<int>(arg(a, "l")), arg(a, "xi"), arg(a, "ratio")));
  if (op == "det_q") return det4(build_q_blocks(point_of(a)).matrix());
  if (op == "det_q0") return det_q0_factored(build_q_blocks(point_of(a)).matrix());
  if (op == "det_q_expansion") return det_q_expansion(point_of(a)).value();
  if (op == "det_q0_expansion") return det_q0_expansion(point_of(a)).value();
  if (op == "l_term_te" || op == "l_term_tm") {
    ProblemSpec s;
    s.ratio = arg(a, "ratio");
    s.mu = arg(a, "mu");
    s.rel_tol = 1e-12;
    s.mode = op == "l_term_te" ? Mode::TE : Mode::TM;
    return ScaledReal(l_term(static_cast<int>(arg(a, "l")), s));
  }
  throw std::invalid_argument("unknown golden op '" + op + "'");
}

}  // namespace

const std::vector<std::string>& golden_ops() {
  static const std::vector<std::string> ops = {
      "s",      "e",      "s_prime",         "e_prime",          "s_tilde",   "e_tilde",   "log_delta_te",
      "log_delta_tm",   "log_delta_tm_massless", "det_q", "det_q0", "det_q_expansion", "det_q0_expansion",
      "l_term_te", "l_term_tm"};
  return ops;
}

std::vector<GridLine> parse_grid(std::istream& is) {
  std::vector<GridLine> grid;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto tab = t.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("grid line " + std::to_string(lineno) + ": missing tab");
    GridLine g;
    g.op = trim(t.substr(0, tab));
    require_op(g.op);
    for (const std::string& axis : split(t.substr(tab + 1), ';')) {
      const auto eq = axis.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("grid line " + std::to_string(lineno) + ": expected name=values");
      std::vector<double> values;
      for (const std::string& v : split(axis.substr(eq + 1), ',')) values.push_back(parse_number(v));
      g.axes.emplace_back(trim(axis.substr(0, eq)), std::move(values));
    }
    grid.push_back(std::move(g));
  }
  return grid;
}

std::vector<GoldenPoint> expand_grid(const std::vector<GridLine>& grid) {
  std::vector<GoldenPoint> out;
  for (const GridLine& g : grid) {
    std::vector<std::size_t> idx(g.axes.size(), 0);
    while (true) {
      GoldenPoint p{g.op, {}};
      for (std::size_t k = 0; k < g.axes.size(); ++k) p.args.emplace_back(g.axes[k].first, g.axes[k].second[idx[k]]);
      out.push_back(std::move(p));
      // Odometer increment, last axis fastest.
      bool carry = true;
      for (std::size_t k = g.axes.size(); carry && k > 0; --k) {
        if (++idx[k - 1] < g.axes[k - 1].second.size()) {
          carry = false;
        } else {
          idx[k - 1] = 0;
        }
      }
      if (carry) break;
    }
  }
  return out;
}

std::string format_arg(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_args(const GoldenArgs& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ';';
    s += args[i].first + '=' + format_arg(args[i].second);
  }
  return s;
}

double arg(const GoldenArgs& args, const std::string& name) {
  for (const auto& [k, v] : args)
    if (k == name) return v;
  throw std::invalid_argument("missing argument '" + name + "'");
}

std::vector<GoldenRow> read_goldens(std::istream& is) {
  std::vector<GoldenRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind(kGoldenHeaderPrefix, 0) == 0) header = true;
      continue;
    }
    const auto f = split(line, '\t');
    if (f.size() != 3) throw std::runtime_error("golden row needs 3 tab-separated fields: '" + line + "'");
    require_op(f[0]);
    rows.push_back({f[0], parse_args(f[1]), f[2]});
  }
  if (!header) throw std::runtime_error("golden file: missing version header");
  return rows;
}

std::string format_golden_row(const GoldenRow& row) { return row.op + '\t' + format_args(row.args) + '\t' + row.value; }

ScaledReal parse_scaled(const std::string& decimal) {
  const std::string t = trim(decimal);
  const auto epos = t.find_first_of("eE");
  const std::string mant = t.substr(0, epos);
  long long exp10 = 0;
  if (epos != std::string::npos) {
    const std::string ex = t.substr(epos + 1);
    const char* b = ex.data() + (!ex.empty() && ex[0] == '+' ? 1 : 0);
    const auto res = std::from_chars(b, ex.data() + ex.size(), exp10);
    if (res.ec != std::errc() || res.ptr != ex.data() + ex.size())
      throw std::invalid_argument("bad exponent in '" + decimal + "'");
  }
  const double m = parse_number(mant);
  const long double ln = static_cast<long double>(exp10) * 2.302585092994045684017991454684364208L;
  const long double whole = std::floor(ln);
  const double frac = static_cast<double>(ln - whole);
  return ScaledReal::from_parts(m * std::exp(frac), static_cast<double>(whole));
}

GoldenCheck check_golden(const GoldenRow& row) {
  GoldenCheck c;
  c.expected = parse_scaled(row.value);
  c.fast = fast_value(row);
  if (c.expected.is_zero()) {
    c.rel_error = c.fast.is_zero() ? 0.0 : std::fabs(c.fast.to_double());
  } else {
    c.rel_error = std::fabs((c.fast / c.expected).to_double() - 1.0);
  }
  return c;
}

}  // namespace casimir
