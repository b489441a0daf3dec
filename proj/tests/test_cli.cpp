#include "cli_runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

namespace {

const std::string kWorked =
    R"({"schema_version":"1","kind":"split","T":[[0,0],[0.5,0]],"F":[[1,1],[0,0]]})";
const std::string kSub = R"({"kind":"split","T":[[0,0],[0.5,0]],"F":[[0.25,0.25],[0,0]]})";
const std::string kCritical = R"({"kind":"split","T":[[0]],"F":[[1]]})";
const std::string kGeo =
    R"({"kind":"leslie","fertility":{"type":"geometric","c":0.5,"beta":0.5},"survival":{"type":"constant","t":0.5}})";

}  // namespace

TEST_CASE("classify prints the verdict and exits with the case code") {
  const auto path = cli::write_temp("worked.json", kWorked);
  const auto r = cli::run("classify " + path);
  CHECK(r.code == 10);
  CHECK(r.out.rfind("case (a): R0=1.5 ≥ r(A)=1.366025", 0) == 0);
  CHECK(r.out.find("> 1") != std::string::npos);

  CHECK(cli::run("classify " + path + " --no-case-exit").code == 0);
  const auto strict = cli::run("classify " + path + " --strict");
  CHECK(strict.code == 10);
  CHECK(strict.out.find("R0=1.5 > r(A)") != std::string::npos);
  CHECK(strict.out.find("strict: certified") != std::string::npos);

  CHECK(cli::run("classify " + cli::write_temp("crit.json", kCritical)).code == 11);
  const auto sub = cli::run("classify " + cli::write_temp("sub.json", kSub));
  CHECK(sub.code == 12);
  CHECK(sub.out.rfind("case (c): R0=0.375 ≤ r(A)=0.5 < 1", 0) == 0);
}

TEST_CASE("r0 text and JSON output") {
  const auto path = cli::write_temp("worked.json", kWorked);
  const auto text = cli::run("r0 " + path);
  CHECK(text.code == 0);
  CHECK(text.out.find("R0   = 1.5\n") != std::string::npos);
  CHECK(text.out.find("r(A) = 1.3660254\n") != std::string::npos);

  const auto js = cli::run("r0 " + path + " --json");
  REQUIRE(js.code == 0);
  const auto doc = nlohmann::json::parse(js.out);
  CHECK(std::abs(doc["result"]["r0"]["value"].get<double>() - 1.5) < 1e-9);
  CHECK(doc["kind"] == "split");

  const auto again = cli::run("r0 " + cli::write_temp("again.json", js.out) + " --json");
  CHECK(again.out == js.out);
}

TEST_CASE("classify JSON round-trips") {
  const auto js = cli::run("classify " + cli::write_temp("worked.json", kWorked) + " --strict --json");
  CHECK(js.code == 10);
  const auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["result"]["case"] == "a");
  CHECK(doc["result"]["strict"] == true);
  const auto again = cli::run("classify " + cli::write_temp("c.json", js.out) + " --strict --json");
  CHECK(again.out == js.out);
}

TEST_CASE("curve writes TSV") {
  const auto r = cli::run("curve " + cli::write_temp("worked.json", kWorked) +
                          " --lambda-min 1 --lambda-max 3 --samples 5");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda\tradius");
  std::getline(in, line);
  CHECK(line == "1\t1.5");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);

  const auto merged = cli::run("curve " + cli::write_temp("worked.json", kWorked) +
                                   " --lambda-min 1 --lambda-max 3 --samples 5",
                               true);
  CHECK(merged.out.find("convex_ok=true") != std::string::npos);
}

TEST_CASE("leslie truncation table") {
  const auto r = cli::run("leslie " + cli::write_temp("geo.json", kGeo) + " --truncate 2,4,8");
  CHECK(r.code == 0);
  CHECK(r.out.find("closed-form R0 = 0.666666667") != std::string::npos);
  CHECK(r.out.find("\n8\t0.66665649") != std::string::npos);
  CHECK(cli::run("classify " + cli::write_temp("geo.json", kGeo) + " --order 16").code == 12);
}

TEST_CASE("simulate reports growth and consistency") {
  const auto r = cli::run("simulate " + cli::write_temp("worked.json", kWorked) +
                          " --steps 200 --x0 1,1 --burn-in 50");
  CHECK(r.code == 0);
  CHECK(r.out.find("growth_rate = 1.366025") != std::string::npos);
  CHECK(r.out.find("consistent: yes") != std::string::npos);
  CHECK(cli::run("simulate " + cli::write_temp("worked.json", kWorked) + " --steps 10 --x0 1").code ==
        1);
}

TEST_CASE("selftest") {
  const auto a = cli::run("selftest --count 20 --seed 4");
  CHECK(a.code == 0);
  CHECK(a.out.find("all invariants passed") != std::string::npos);
  CHECK(a.out == cli::run("selftest --count 20 --seed 4").out);
}

TEST_CASE("error exits") {
  const auto bad = cli::run("r0 " + cli::write_temp("bad.json", R"({"kind":"split","T":[[1.0]],"F":[[0]]})"),
                            true);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("T: r(T) >= 1") != std::string::npos);
  CHECK(cli::run("r0 " + cli::write_temp("broken.json", "{")).code == 1);
  CHECK(cli::run("r0 /nonexistent.json").code == 1);
  CHECK(cli::run("frobnicate").code == 1);
  CHECK(cli::run("").code == 1);
  CHECK(cli::run("leslie " + cli::write_temp("worked.json", kWorked)).code == 1);
}
