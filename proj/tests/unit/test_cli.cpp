#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "casimir/sweep_io.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// stdout only; stderr goes to the test log.
Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + CASIMIR_CLI + std::string(" ") + args;
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("proca_casimir_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("energy at ratio 1.5 is negative") {
  const Run r = run("energy --ratio 1.5 --mu 0 --mode total --rel-tol 1e-8");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["e_total"].get<double>() < 0.0);
  CHECK(j["manifest"]["command"] == "energy");
  CHECK(j["manifest"]["version"] == casimir::kVersion);
  CHECK(j["manifest"].contains("wall_time_s"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("energy --ratio 0.9").code == 2);
  CHECK(run("energy --ratio 1.5 --mu -1").code == 2);
  CHECK(run("energy --ratio 1.5 --a1-m 0.01").code == 2);
  CHECK(run("energy --ratio 1.5 --mode scalar").code == 2);
  CHECK(run("energy --a1-m 0.01 --a2-m 0.005").code == 2);
  CHECK(run("energy --ratio 1.5 --si").code == 2);
  CHECK(run("energy --ratio 1.5 --format xml").code == 2);
  CHECK(run("sweep-ratio --from 1.2 --to 1.5 --steps 1").code == 2);
  CHECK(run("no-such-command").code == 2);
}

TEST_CASE("l cap exhaustion exits 3") {
  CHECK(run("energy --ratio 1.01 --l-cap 3 --rel-tol 1e-10").code == 3);
}

TEST_CASE("physical inputs match their dimensionless equivalent bit for bit") {
  const Run si = run("energy --a1-m 0.01 --a2-m 0.011 --mass-ev 0 --rel-tol 1e-6 --si");
  const Run dl = run("energy --ratio 1.1 --mu 0 --rel-tol 1e-6");
  REQUIRE(si.code == 0);
  REQUIRE(dl.code == 0);
  const json a = json::parse(si.out), b = json::parse(dl.out);
  CHECK(a["manifest"]["spec"]["ratio"].get<double>() == 1.1);
  CHECK(a["result"]["e_total"].get<double>() == b["result"]["e_total"].get<double>());
  const double e0 = a["si"]["e0_joules"].get<double>();
  CHECK(a["si"]["e_total_joules"].get<double>() == doctest::Approx(e0 * b["result"]["e_total"].get<double>()));
}

TEST_CASE("sweep-mass prints rows in ascending mass") {
  const Run r = run("sweep-mass --ratio 1.5 --mu-list 2,0,0.5 --rel-tol 1e-6");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const casimir::CsvFile f = casimir::read_csv(in);
  REQUIRE(f.rows.size() == 3);
  CHECK(f.rows[0].param == 0.0);
  CHECK(f.rows[1].param == 0.5);
  CHECK(f.rows[2].param == 2.0);
  CHECK(f.rows[0].e_total < 0.0);
  CHECK(std::abs(f.rows[2].e_total) < std::abs(f.rows[0].e_total));
}

TEST_CASE("replay reproduces json and csv outputs") {
  const Run e = run("energy --ratio 1.8 --mu 0.7 --mode tm --rel-tol 1e-7");
  REQUIRE(e.code == 0);
  const Run re = run("replay " + temp_file("energy.json", e.out));
  REQUIRE(re.code == 0);
  CHECK(json::parse(re.out)["result"] == json::parse(e.out)["result"]);

  const Run s = run("sweep-ratio --from 1.3 --to 1.6 --steps 3 --mu 0.2 --rel-tol 1e-6");
  REQUIRE(s.code == 0);
  const Run rs = run("replay " + temp_file("sweep.csv", s.out));
  REQUIRE(rs.code == 0);
  std::istringstream a(s.out), b(rs.out);
  const auto fa = casimir::read_csv(a), fb = casimir::read_csv(b);
  REQUIRE(fa.rows.size() == fb.rows.size());
  for (std::size_t i = 0; i < fa.rows.size(); ++i) CHECK(fa.rows[i].e_total == fb.rows[i].e_total);

  CHECK(run("replay /nonexistent/file.json").code == 2);
}

TEST_CASE("thread count from the environment, flag wins") {
  const Run env = run("energy --ratio 1.5 --rel-tol 1e-6", "PROCA_CASIMIR_THREADS=3");
  REQUIRE(env.code == 0);
  CHECK(json::parse(env.out)["manifest"]["threads"] == 3);
  const Run flag = run("energy --ratio 1.5 --rel-tol 1e-6 --threads 2", "PROCA_CASIMIR_THREADS=3");
  REQUIRE(flag.code == 0);
  CHECK(json::parse(flag.out)["manifest"]["threads"] == 2);
  CHECK(json::parse(env.out)["result"]["e_total"] == json::parse(flag.out)["result"]["e_total"]);
  CHECK(run("energy --ratio 1.5", "PROCA_CASIMIR_THREADS=x").code == 2);
}

TEST_CASE("force output") {
  const Run r = run("force --ratio 1.5 --rel-tol 1e-6");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["force"].get<double>() < 0.0);  // energy rises toward zero as the gap opens
  CHECK(j["manifest"]["fd_step"].get<double>() == 1e-3);
}

TEST_CASE("selftest passes on the committed goldens") {
  CHECK(run("selftest").code == 0);
  CHECK(run("selftest --goldens /nonexistent.tsv").code == 1);
}
