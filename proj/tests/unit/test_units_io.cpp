#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "casimir/sweep_io.hpp"
#include "casimir/units.hpp"

using namespace casimir;

TEST_CASE("unit conversion") {
  const Dimensionless a = convert_units(0.01, 0.011, 0.0);
  CHECK(a.ratio == 1.1);
  CHECK(a.mu == 0.0);
  const Dimensionless b = convert_units(0.01, 0.011, 1e-5);
  CHECK(b.ratio == 1.1);
  CHECK(b.mu == doctest::Approx(0.506773).epsilon(1e-6));
  const Dimensionless c = convert_units(0.01, 0.015, 1e-4);
  CHECK(c.ratio == 1.5);
  CHECK(c.mu == doctest::Approx(5.06773).epsilon(1e-6));
  CHECK(c.mu == doctest::Approx(1e-6 / kHbarCEvM).epsilon(1e-15));
  // Inputs without short decimal forms fall back to plain arithmetic.
  const double a1 = 1.0 / 3.0;
  const Dimensionless d = convert_units(a1, 0.5, 2e-7);
  CHECK(d.ratio == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(d.mu == doctest::Approx(2e-7 * a1 / kHbarCEvM).epsilon(1e-15));
}

TEST_CASE("unit conversion errors name both radii") {
  try {
    convert_units(0.02, 0.01, 0.0);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    const std::string w = e.what();
    CHECK(w.find("a1=0.02") != std::string::npos);
    CHECK(w.find("a2=0.01") != std::string::npos);
  }
  CHECK_THROWS_AS(convert_units(0.0, 0.01, 0.0), UsageError);
  CHECK_THROWS_AS(convert_units(0.01, 0.01, 0.0), UsageError);
  CHECK_THROWS_AS(convert_units(0.01, 0.02, -1.0), UsageError);
}

TEST_CASE("physical scales") {
  CHECK(energy_unit_joules(0.01) == doctest::Approx(1.973269804e-7 * 1.602176634e-19 / (2.0 * M_PI * 0.01)));
  CHECK(force_unit_newtons(0.01) == doctest::Approx(energy_unit_joules(0.01) / 0.01));
}

TEST_CASE("double formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -1179.1388951531738, 1e-300, 5e-324, 1.7976931348623157e308, 0.0}) {
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(std::isnan(parse_double(format_double(std::nan("")))));
  CHECK(parse_double(format_double(-INFINITY)) == -INFINITY);
  CHECK_THROWS(parse_double("1.5x"));
}

namespace {

SweepTable sample_table() {
  SweepTable t;
  t.param_name = "ratio";
  t.spec_template.mode = Mode::Total;
  for (int i = 0; i < 4; ++i) {
    SweepRow r;
    r.param = 1.0 + 0.1 * (i + 1);
    r.ok = i != 2;
    if (r.ok) {
      r.result.te = -1.0 / (i + 3.0);
      r.result.tm = -std::sqrt(2.0) / (i + 7.0);
      r.result.value = r.result.te + r.result.tm;
      r.result.abs_error_estimate = 1e-9 / (i + 1.0);
      r.result.l_used = 17 + i;
    } else {
      r.failure = "partial-wave sum not converged";
    }
    t.rows.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("CSV round trip recovers every field") {
  const SweepTable t = sample_table();
  const nlohmann::json m = {{"command", "sweep-ratio"}, {"spec", spec_to_json(t.spec_template)}};
  std::stringstream ss;
  write_csv(ss, t, m);
  const std::string text = ss.str();
  CHECK(text.find(std::string(kCsvHeader) + "\n") != std::string::npos);
  const CsvFile f = read_csv(ss);
  CHECK(f.manifest == m);
  REQUIRE(f.rows.size() == t.rows.size());
  REQUIRE(f.comments.size() == 1);
  CHECK(f.comments[0].find("partial-wave") != std::string::npos);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(f.rows[i].param == t.rows[i].param);
    if (t.rows[i].ok) {
      CHECK(f.rows[i].e_te == t.rows[i].result.te);
      CHECK(f.rows[i].e_tm == t.rows[i].result.tm);
      CHECK(f.rows[i].e_total == t.rows[i].result.value);
      CHECK(f.rows[i].abs_err == t.rows[i].result.abs_error_estimate);
      CHECK(f.rows[i].l_used == t.rows[i].result.l_used);
    } else {
      CHECK(std::isnan(f.rows[i].e_total));
      CHECK(f.rows[i].l_used == -1);
    }
  }
}

TEST_CASE("CSV marks unselected modes as nan") {
  SweepTable t = sample_table();
  t.spec_template.mode = Mode::TE;
  std::stringstream ss;
  write_csv(ss, t, nlohmann::json::object());
  const CsvFile f = read_csv(ss);
  CHECK(f.rows[0].e_te == t.rows[0].result.te);
  CHECK(std::isnan(f.rows[0].e_tm));
  CHECK(std::isnan(f.rows[0].e_total));
}

TEST_CASE("CSV reader rejects malformed input") {
  std::stringstream bad1("param,x\n1,2\n");
  CHECK_THROWS(read_csv(bad1));
  std::stringstream bad2(std::string(kCsvHeader) + "\n1,2,3\n");
  CHECK_THROWS(read_csv(bad2));
  std::stringstream empty("");
  CHECK_THROWS(read_csv(empty));
}

TEST_CASE("JSON round trip recovers every field") {
  const SweepTable t = sample_table();
  const std::string text = table_to_json(t).dump();
  const nlohmann::json j = nlohmann::json::parse(text);
  const auto& rows = j.at("rows");
  REQUIRE(rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(rows[i].at("param").get<double>() == t.rows[i].param);
    if (t.rows[i].ok) {
      CHECK(rows[i].at("e_te").get<double>() == t.rows[i].result.te);
      CHECK(rows[i].at("e_tm").get<double>() == t.rows[i].result.tm);
      CHECK(rows[i].at("e_total").get<double>() == t.rows[i].result.value);
      CHECK(rows[i].at("abs_err").get<double>() == t.rows[i].result.abs_error_estimate);
    } else {
      CHECK_FALSE(rows[i].at("ok").get<bool>());
    }
  }
}

TEST_CASE("spec JSON round trip") {
  ProblemSpec s;
  s.ratio = 1.0 + 1.0 / 7.0;
  s.mu = 0.1;
  s.rel_tol = 3e-9;
  s.l_cap = 1234;
  s.mode = Mode::TM;
  const ProblemSpec r = spec_from_json(nlohmann::json::parse(spec_to_json(s).dump()));
  CHECK(r.ratio == s.ratio);
  CHECK(r.mu == s.mu);
  CHECK(r.rel_tol == s.rel_tol);
  CHECK(r.l_cap == s.l_cap);
  CHECK(r.mode == s.mode);
}
