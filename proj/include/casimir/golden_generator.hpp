#pragma once

#include <string>
#include <vector>

#include "casimir/goldens.hpp"
#include "casimir/precision_oracle.hpp"

namespace casimir::oracle {

/// Oracle value for one golden point, rounded to output_digits(cfg). Points
/// the configured precision cannot resolve are retried at higher precision.
std::string oracle_value(const GoldenPoint& p, const PrecisionConfig& cfg = {});

/// Complete golden file text: version header plus sorted rows. Throws
/// std::invalid_argument for an empty grid.
std::string generate_goldens(const std::vector<GridLine>& grid, const PrecisionConfig& cfg = {});

}  // namespace casimir::oracle
