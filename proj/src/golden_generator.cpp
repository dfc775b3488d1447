#include "casimir/golden_generator.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <ios>
#include <stdexcept>

namespace casimir::oracle {

namespace {

namespace mp = boost::multiprecision;

constexpr int kMaxDigits = 190;

std::string round_to(const std::string& decimal, int digits) {
  const mp::number<mp::cpp_bin_float<220>, mp::et_off> x(decimal);
  return x.str(digits, std::ios_base::scientific);
}

std::string evaluate(const GoldenPoint& p, const PrecisionConfig& cfg) {
  const GoldenArgs& a = p.args;
  const auto l = [&] { return static_cast<int>(arg(a, "l")); };
  const std::string& op = p.op;
  if (op == "s") return oracle_s(l(), arg(a, "z"), cfg);
  if (op == "e") return oracle_e(l(), arg(a, "z"), cfg);
  if (op == "s_prime") return oracle_s_prime(l(), arg(a, "z"), cfg);
  if (op == "e_prime") return oracle_e_prime(l(), arg(a, "z"), cfg);
  if (op == "s_tilde") return oracle_s_tilde(l(), arg(a, "z"), cfg);
  if (op == "e_tilde") return oracle_e_tilde(l(), arg(a, "z"), cfg);
  if (op == "log_delta_te") return oracle_log_delta(l(), arg(a, "xi"), arg(a, "mu"), arg(a, "ratio"), Mode::TE, cfg);
  if (op == "log_delta_tm") return oracle_log_delta(l(), arg(a, "xi"), arg(a, "mu"), arg(a, "ratio"), Mode::TM, cfg);
  if (op == "log_delta_tm_massless") return oracle_log_delta_tm_massless(l(), arg(a, "xi"), arg(a, "ratio"), cfg);
  if (op == "det_q" || op == "det_q_expansion") return oracle_det_q(l(), arg(a, "xi"), arg(a, "mu"), arg(a, "ratio"), cfg);
  if (op == "det_q0" || op == "det_q0_expansion")
    return oracle_det_q0(l(), arg(a, "xi"), arg(a, "mu"), arg(a, "ratio"), cfg);
  if (op == "l_term_te") return oracle_l_term(l(), arg(a, "mu"), arg(a, "ratio"), Mode::TE, cfg);
  if (op == "l_term_tm") return oracle_l_term(l(), arg(a, "mu"), arg(a, "ratio"), Mode::TM, cfg);
  throw std::invalid_argument("no oracle for op '" + op + "'");
}

}  // namespace

std::string oracle_value(const GoldenPoint& p, const PrecisionConfig& cfg) {
  PrecisionConfig c = cfg;
  while (true) {
    try {
      const std::string v = evaluate(p, c);
      return c.decimal_digits == cfg.decimal_digits ? v : round_to(v, output_digits(cfg));
    } catch (const PrecisionError&) {
      if (c.decimal_digits >= kMaxDigits) throw;
      c.decimal_digits = std::min(kMaxDigits, c.decimal_digits + 50);
    }
  }
}

std::string generate_goldens(const std::vector<GridLine>& grid, const PrecisionConfig& cfg) {
  const std::vector<GoldenPoint> points = expand_grid(grid);
  if (points.empty()) throw std::invalid_argument("generate_goldens: grid is empty");
  std::vector<std::string> lines;
  lines.reserve(points.size());
  for (const GoldenPoint& p : points) lines.push_back(format_golden_row({p.op, p.args, oracle_value(p, cfg)}));
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::string out = std::string(kGoldenHeaderPrefix) + " digits=" + std::to_string(cfg.decimal_digits) +
                    " rows=" + std::to_string(lines.size()) + "\n";
  for (const std::string& line : lines) out += line + "\n";
  return out;
}

}  // namespace casimir::oracle
