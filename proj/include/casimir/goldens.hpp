#pragma once

// Golden-value tables.
//
// Grid file: one line per operation, `op<TAB>name=v1,v2;name=v1,...`, expanded
// as a Cartesian product; '#' starts a comment line.
//
// Golden file: a `# ...` version line, then `op<TAB>name=v;...<TAB>value`
// rows sorted lexicographically. Argument values are written in shortest
// round-trip form so the fast path sees the same doubles as the generator.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "casimir/scaled_real.hpp"

namespace casimir {

inline constexpr const char* kGoldenHeaderPrefix = "# proca-casimir goldens v1";

using GoldenArgs = std::vector<std::pair<std::string, double>>;

struct GridLine {
  std::string op;
  std::vector<std::pair<std::string, std::vector<double>>> axes;
};

struct GoldenPoint {
  std::string op;
  GoldenArgs args;
};

struct GoldenRow {
  std::string op;
  GoldenArgs args;
  std::string value;  // decimal string
};

/// Operations the fast path and the oracle both provide.
const std::vector<std::string>& golden_ops();

std::vector<GridLine> parse_grid(std::istream& is);
std::vector<GoldenPoint> expand_grid(const std::vector<GridLine>& grid);

/// Shortest round-trip decimal form.
std::string format_arg(double x);
std::string format_args(const GoldenArgs& args);
double arg(const GoldenArgs& args, const std::string& name);

std::vector<GoldenRow> read_goldens(std::istream& is);
std::string format_golden_row(const GoldenRow& row);

/// Decimal string (any exponent) to ScaledReal, ~1e-16 relative.
ScaledReal parse_scaled(const std::string& decimal);

struct GoldenCheck {
  double rel_error = 0.0;
  ScaledReal fast;
  ScaledReal expected;
};

/// Evaluates the fast path for row.op at row.args and compares.
GoldenCheck check_golden(const GoldenRow& row);

}  // namespace casimir
