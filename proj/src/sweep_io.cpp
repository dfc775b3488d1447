#include "casimir/sweep_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace casimir {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

EnergyColumns columns(const EnergyResult& r, Mode m) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (m) {
    case Mode::TE: return {r.te, nan, nan};
    case Mode::TM: return {nan, r.tm, nan};
    case Mode::Total: return {r.te, r.tm, r.value};
  }
  return {nan, nan, nan};
}

nlohmann::json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json spec_to_json(const ProblemSpec& s) {
  return {{"ratio", s.ratio}, {"mu", s.mu}, {"rel_tol", s.rel_tol}, {"l_cap", s.l_cap}, {"mode", to_string(s.mode)}};
}

ProblemSpec spec_from_json(const nlohmann::json& j) {
  ProblemSpec s;
  s.ratio = j.at("ratio").get<double>();
  s.mu = j.at("mu").get<double>();
  s.rel_tol = j.at("rel_tol").get<double>();
  s.l_cap = j.at("l_cap").get<int>();
  s.mode = parse_mode(j.at("mode").get<std::string>());
  return s;
}

void write_csv(std::ostream& os, const SweepTable& table, const nlohmann::json& manifest) {
  os << "# manifest " << manifest.dump() << '\n';
  for (const SweepRow& row : table.rows)
    if (!row.ok) os << "# failed " << table.param_name << '=' << format_double(row.param) << ": " << row.failure << '\n';
  os << kCsvHeader << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const SweepRow& row : table.rows) {
    os << format_double(row.param) << ',';
    if (row.ok) {
      const EnergyColumns c = columns(row.result, table.spec_template.mode);
      os << format_double(c.te) << ',' << format_double(c.tm) << ',' << format_double(c.total) << ','
         << format_double(row.result.abs_error_estimate) << ',' << row.result.l_used;
    } else {
      os << format_double(nan) << ',' << format_double(nan) << ',' << format_double(nan) << ',' << format_double(nan)
         << ",-1";
    }
    os << '\n';
  }
}

CsvFile read_csv(std::istream& is) {
  CsvFile out;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# manifest ";
      if (line.rfind(tag, 0) == 0) {
        out.manifest = nlohmann::json::parse(line.substr(tag.size()));
      } else {
        out.comments.push_back(line);
      }
      continue;
    }
    if (!header) {
      if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw std::runtime_error("csv: expected 6 fields in '" + line + "'");
    CsvRow r{};
    r.param = parse_double(f[0]);
    r.e_te = parse_double(f[1]);
    r.e_tm = parse_double(f[2]);
    r.e_total = parse_double(f[3]);
    r.abs_err = parse_double(f[4]);
    r.l_used = std::stol(f[5]);
    out.rows.push_back(r);
  }
  if (!header) throw std::runtime_error("csv: missing header");
  return out;
}

nlohmann::json result_to_json(const EnergyResult& r, Mode m) {
  const EnergyColumns c = columns(r, m);
  return {{"e_te", number_or_null(c.te)},
          {"e_tm", number_or_null(c.tm)},
          {"e_total", number_or_null(c.total)},
          {"value", r.value},
          {"abs_err", r.abs_error_estimate},
          {"l_used", r.l_used},
          {"integrand_evals", r.integrand_evals}};
}

nlohmann::json table_to_json(const SweepTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : t.rows) {
    nlohmann::json j = {{"param", row.param}, {"ok", row.ok}};
    if (row.ok) {
      j.update(result_to_json(row.result, t.spec_template.mode));
    } else {
      j["failure"] = row.failure;
    }
    rows.push_back(std::move(j));
  }
  return {{"param_name", t.param_name}, {"rows", rows}};
}

}  // namespace casimir
