#pragma once

// CSV and JSON serialization of results. Numbers are written with 17
// significant digits so parsing recovers every double exactly; quantities
// not computed for the selected mode are written as nan (CSV) or null (JSON).

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/spectrum_sum.hpp"

namespace casimir {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kCsvHeader = "param,e_te,e_tm,e_total,abs_err,l_used";

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);
/// Inverse of format_double. Throws std::invalid_argument.
double parse_double(const std::string& s);

/// Energy columns honouring the mode: unselected polarizations are NaN.
struct EnergyColumns {
  double te, tm, total;
};
EnergyColumns columns(const EnergyResult& r, Mode m);

nlohmann::json spec_to_json(const ProblemSpec& s);
/// Reads ratio, mu, rel_tol, l_cap, mode; threads stays at its default.
ProblemSpec spec_from_json(const nlohmann::json& j);

/// One-line manifest embedded as the first CSV comment line.
void write_csv(std::ostream& os, const SweepTable& table, const nlohmann::json& manifest);

struct CsvRow {
  double param, e_te, e_tm, e_total, abs_err;
  long l_used;
};

struct CsvFile {
  nlohmann::json manifest;  // null if absent
  std::vector<std::string> comments;
  std::vector<CsvRow> rows;
};

/// Parses output of write_csv. Throws std::runtime_error on malformed input.
CsvFile read_csv(std::istream& is);

nlohmann::json result_to_json(const EnergyResult& r, Mode m);
nlohmann::json table_to_json(const SweepTable& t);

/// NaN becomes null.
nlohmann::json number_or_null(double x);

}  // namespace casimir
