#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hvpol/cli.hpp"
#include "oracle/fixtures.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hvpol");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hvpol::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<double> row(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

fs::path temp(const std::string& name) {
  return fs::temp_directory_path() / ("hvpol_cli_test_" + name);
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("eval-pair csv") {
  const auto r = run({"eval-pair", "--preset", "fig1-simple", "--grid", "0:90:1"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 92);
  CHECK(ls[0] == "alpha_deg,p1,p2_norm,d,malus");
  CHECK(row(ls[1])[4] == 1.0);
  CHECK(row(ls[46])[0] == 45.0);
  CHECK(row(ls[46])[2] == doctest::Approx(fixtures::pair_norm_45_fig1).epsilon(1e-11));
  CHECK(row(ls[91])[2] == doctest::Approx(fixtures::pair_norm_90_fig1).epsilon(1e-11));
  CHECK(row(ls[11])[2] == doctest::Approx(fixtures::pair_norm_10_fig1).epsilon(1e-11));
}

TEST_CASE("eval-pair golden output") {
  const auto r = run({"eval-pair", "--grid", "0:90:45"});
  CHECK(r.out ==
        "alpha_deg,p1,p2_norm,d,malus\n"
        "0,1,1,0.636619772368,1\n"
        "45,0.994999455492,0.865483026646,0.633436326861,0.5\n"
        "90,0.0135458693098,0.861797586385,0.00862356823655,3.74939945665e-33\n");
}

TEST_CASE("eval-pair belifante profile and json") {
  const auto r = run({"eval-pair", "--profile", "belifante", "--grid", "0:90:45", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["columns"][2] == "p2_norm");
  CHECK(j["rows"][1][2].get<double>() == doctest::Approx(fixtures::belifante_norm_45).epsilon(1e-12));
}

TEST_CASE("eval-triple") {
  const auto r = run({"eval-triple", "--grid", "0:90:5"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "alpha_deg,hv_norm,qm");
  double gap = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto v = row(ls[i]);
    const double c = std::cos(v[0] * M_PI / 180.0);
    CHECK(v[2] == doctest::Approx(c * c * c * c));
    if (v[0] >= 50 && v[0] <= 75) gap = std::max(gap, std::fabs(v[1] - v[2]));
  }
  CHECK(gap >= 0.05);
}

TEST_CASE("eval-shrinkage writes a totals record") {
  const auto out = temp("shrink.csv");
  const auto r = run({"eval-shrinkage", "--grid", "0:90:30", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto ls = lines(slurp(out));
  REQUIRE(ls.size() == 5);
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(row(ls[i])[3] >= 0.0);
  CHECK(row(ls[1])[3] == doctest::Approx(fixtures::d0_fig2).epsilon(1e-9));
  const auto totals = Json::parse(slurp(out.string() + ".totals.json"));
  REQUIRE(totals["totals"].size() == 3);
  CHECK(totals["totals"][0]["convention"] == "raw");
  CHECK(totals["totals"][1]["convention"] == "over_pi");
  CHECK(totals["totals"][2]["convention"] == "over_half_pi");
  CHECK(totals["totals"][0]["I1_over_I0"].get<double>() == doctest::Approx(fixtures::int_d_fig2).epsilon(1e-8));
  fs::remove(out);
  fs::remove(out.string() + ".totals.json");
}

TEST_CASE("fit json is deterministic") {
  const std::vector<std::string> args{"fit", "--model", "simple", "--starts", "2", "--max-iter", "300",
                                      "--grid", "0:90:10", "--seed", "7"};
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = Json::parse(a.out);
  const std::vector<std::string> keys{"schema", "model", "params", "objective", "iterations", "converged", "grid", "residuals"};
  std::size_t i = 0;
  for (auto it = j.begin(); i < keys.size(); ++it, ++i) CHECK(it.key() == keys[i]);
  CHECK(j["residuals"].size() == 10);
  CHECK(j["seed"] == 7);
}

TEST_CASE("epr") {
  const auto hv = run({"epr", "--mode", "chsh"});
  REQUIRE(hv.code == 0);
  const auto j = Json::parse(hv.out);
  for (const char* k : {"model", "settings", "S", "bound_respected"}) CHECK(j.contains(k));
  CHECK(j["bound_respected"] == true);
  const auto qm = Json::parse(run({"epr", "--model", "qm", "--mode", "chsh"}).out);
  CHECK(qm["S"].get<double>() == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(qm["bound_respected"] == false);
}

TEST_CASE("mc echoes the seed") {
  const auto r = run({"mc", "--kind", "pair", "--samples", "10000", "--seed", "1234", "--check-quadrature"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["seed"] == 1234);
  CHECK(j["samples"] == 10000);
  CHECK(j.contains("quadrature"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"nope"}).code == 2);
  CHECK(run({"mc", "--samples", "0"}).code == 2);
  CHECK(run({"eval-pair", "--grid", "0:90"}).code == 2);
  CHECK(run({"eval-pair", "--normalization", "weird"}).code == 2);
  CHECK(run({"eval-pair", "--preset", "fig1-simple", "--a", "2"}).code == 2);
  CHECK(run({"eval-pair", "--a", "2"}).code == 2);
  CHECK(run({"eval-pair", "--preset", "nope"}).code == 2);
  CHECK(run({"eval-pair", "--a", "-1", "--e", "2", "--c", "3"}).code == 2);
  const auto e = run({"epr", "--mode", "scan", "--step-deg", "40"});
  CHECK(e.code == 2);
  CHECK_FALSE(e.err.empty());
}

TEST_CASE("help exits 0") {
  const auto r = run({"fit", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--starts") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("params file") {
  const auto good = temp("good.json");
  write(good, R"({"a": 2.0, "e": 3.0, "c": 150.0, "grid": "0:90:45"})");
  auto r = run({"eval-pair", "--params-file", good.string()});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 4);
  // command-line options win over file values
  r = run({"eval-pair", "--params-file", good.string(), "--grid", "0:90:30"});
  CHECK(lines(r.out).size() == 5);
  // model parameters come from exactly one source
  CHECK(run({"eval-pair", "--params-file", good.string(), "--a", "3"}).code == 2);
  CHECK(run({"eval-pair", "--params-file", good.string(), "--preset", "fig1-simple"}).code == 2);

  const auto bad = temp("bad.json");
  write(bad, R"({"a": 2.0, "colour": 3})");
  r = run({"fit", "--params-file", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);
  write(bad, R"({"a": "two"})");
  r = run({"fit", "--params-file", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("'a'") != std::string::npos);
  write(bad, "{not json");
  CHECK(run({"fit", "--params-file", bad.string()}).code == 2);
  CHECK(run({"fit", "--params-file", temp("missing.json").string()}).code == 2);
  fs::remove(good);
  fs::remove(bad);
}

TEST_CASE("numeric failure exits 3") {
  // a tolerance the rule cannot reach within the doubling budget
  const auto r = run({"eval-pair", "--grid", "0:90:45", "--quad-nodes", "16", "--quad-rtol", "1e-300",
                      "--quad-atol", "1e-300"});
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}
