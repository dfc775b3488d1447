#include <doctest.h>

#include <fstream>
#include <sstream>

#include "casimir/goldens.hpp"

using namespace casimir;

TEST_CASE("grid expansion is a Cartesian product") {
  std::istringstream in("# c\n\nlog_delta_te\tl=1,2;xi=0.5;mu=0,1,2;ratio=1.5\n");
  const auto grid = parse_grid(in);
  REQUIRE(grid.size() == 1);
  const auto pts = expand_grid(grid);
  REQUIRE(pts.size() == 6);
  CHECK(format_args(pts[0].args) == "l=1;xi=0.5;mu=0;ratio=1.5");
  CHECK(format_args(pts[5].args) == "l=2;xi=0.5;mu=2;ratio=1.5");
}

TEST_CASE("grid parser errors") {
  std::istringstream no_tab("s l=1;z=1\n");
  CHECK_THROWS(parse_grid(no_tab));
  std::istringstream bad_op("bessel\tl=1;z=1\n");
  CHECK_THROWS(parse_grid(bad_op));
  std::istringstream bad_num("s\tl=1;z=one\n");
  CHECK_THROWS(parse_grid(bad_num));
}

TEST_CASE("arguments print in shortest round-trip form") {
  CHECK(format_arg(0.1) == "0.1");
  CHECK(format_arg(1.05) == "1.05");
  CHECK(format_arg(60.0) == "60");
  CHECK(format_arg(1e-4) == "1e-04");
  CHECK(format_arg(0.506773) == "0.506773");
}

TEST_CASE("decimal strings with large exponents") {
  const ScaledReal a = parse_scaled("1.5e+2");
  CHECK(a.to_double() == doctest::Approx(150.0).epsilon(1e-15));
  const ScaledReal b = parse_scaled("-2.000000000000000000000000000000e-1000");
  CHECK(b.sign() < 0);
  CHECK(b.log_abs() == doctest::Approx(std::log(2.0) - 1000.0 * std::log(10.0)).epsilon(1e-15));
  const ScaledReal c = parse_scaled("3.25e+4000") / parse_scaled("3.25e+3999");
  CHECK(c.to_double() == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("golden reader requires the version header") {
  std::istringstream missing("s\tl=0;z=1\t1.1752011936438014568823818506e+00\n");
  CHECK_THROWS(read_goldens(missing));
  std::istringstream ok(std::string(kGoldenHeaderPrefix) + "\ns\tl=0;z=1\t1.1752011936438014568823818506e+00\n");
  const auto rows = read_goldens(ok);
  REQUIRE(rows.size() == 1);
  CHECK(check_golden(rows[0]).rel_error < 1e-15);
}

TEST_CASE("every committed golden row within 1e-12") {
  std::ifstream in(CASIMIR_GOLDEN_FILE);
  REQUIRE(in.good());
  const auto rows = read_goldens(in);
  CHECK(rows.size() >= 200);
  for (const auto& row : rows) {
    const GoldenCheck c = check_golden(row);
    CHECK_MESSAGE(c.rel_error <= 1e-12, row.op << " " << format_args(row.args) << " rel " << c.rel_error);
  }
}
