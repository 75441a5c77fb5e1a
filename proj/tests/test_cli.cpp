#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fbrank/cli.hpp"
#include "json.hpp"

using namespace fbrank;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Timing is the only field allowed to differ between identical runs.
void strip_times(json& j) {
  if (j.is_object()) {
    j.erase("wall-time");
    for (auto& [k, v] : j.items()) strip_times(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_times(v);
  }
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fbrank_cli_" + name)).string();
}

}  // namespace

TEST(Cli, RankOfDiagonalSystem) {
  auto r = run({"rank", "--system", "It", "--n", "1"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  auto p = r.report()["payload"];
  EXPECT_EQ(p["rank"], 4);
  EXPECT_EQ(p["standard-monomials"], json({"dy2^2", "dy1", "dy2", "1"}));
}

TEST(Cli, ReportCarriesVersionAndInvocation) {
  std::vector<std::string> args = {"build", "--system", "I", "--n", "1"};
  auto j = run(args).report();
  EXPECT_EQ(j["version"], tool_version());
  EXPECT_EQ(j["invocation"], json(args));
  EXPECT_EQ(j["command"], "build");
  EXPECT_EQ(j["payload"]["generators"].size(), 6u);  // A_11, A_12, A_22, B, C_12, E
}

TEST(Cli, JsonPathGetsTheReportAndStdoutTheSummary) {
  const std::string path = temp_path("rank.json");
  auto r = run({"rank", "--system", "It", "--n", "2", "--json", path});
  ASSERT_EQ(r.code, kExitPass);
  EXPECT_EQ(r.out, "6\n");
  std::ifstream in(path);
  json j;
  in >> j;
  EXPECT_EQ(j["payload"]["rank"], 6);
  std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"check", "--id", "prop-2", "--n", "2"}).code, kExitPass);
  EXPECT_EQ(run({"check", "--id", "prop-2", "--n", "2", "--mutation", "drop-d2"}).code, kExitFail);
  EXPECT_EQ(run({"check", "--id", "prop-2", "--n", "2", "--budget", "5"}).code, kExitBudget);
  EXPECT_EQ(run({"rank", "--system", "It", "--n", "3", "--budget", "5"}).code, kExitBudget);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"rank", "--n", "two"}).code, kExitUsage);
  EXPECT_EQ(run({"rank", "--system", "Q", "--n", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--id", "no-such-check", "--n", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--id", "prop-2", "--n", "1", "--mutation", "bad"}).code, kExitUsage);
  EXPECT_EQ(run({"zeval", "--n", "1", "--point", "/nonexistent/point.json"}).code, kExitUsage);
}

TEST(Cli, CheckAllWritesASortedPassingLedger) {
  const std::string path = temp_path("ledger.json");
  auto r = run({"check-all", "--n", "2", "--jobs", "2", "--json", path});
  ASSERT_EQ(r.code, kExitPass) << r.out;
  std::ifstream in(path);
  json j;
  in >> j;
  const auto& checks = j["payload"]["checks"];
  ASSERT_FALSE(checks.empty());
  for (std::size_t k = 1; k < checks.size(); ++k)
    EXPECT_LT(checks[k - 1]["check-id"].get<std::string>(), checks[k]["check-id"].get<std::string>());
  for (const auto& c : checks) EXPECT_EQ(c["status"], "pass") << c["check-id"];
  EXPECT_TRUE(j["payload"]["all-pass"].get<bool>());
  std::filesystem::remove(path);
}

TEST(Cli, SameFlagsGiveTheSameReport) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"check", "--id", "lemma-coprime", "--n", "2", "--seed", "7"},
           {"rank", "--system", "Itp", "--n", "1", "--slack", "random", "--seed", "3"},
           {"zeval", "--n", "1", "--system", "I", "--op", "all", "--seed", "9"},
           {"transport", "--n", "1", "--seed", "2", "--steps", "100"}}) {
    auto a = run(args).report(), b = run(args).report();
    strip_times(a);
    strip_times(b);
    EXPECT_EQ(a, b) << args.front();
  }
}

TEST(Cli, SeedChangesRandomContent) {
  auto a = run({"zeval", "--n", "1", "--seed", "1"}).report();
  auto b = run({"zeval", "--n", "1", "--seed", "2"}).report();
  EXPECT_NE(a["payload"]["point"], b["payload"]["point"]);
}

TEST(Cli, ZevalResidualsAreSmall) {
  auto j = run({"zeval", "--n", "2", "--system", "It", "--op", "all", "--seed", "5"}).report();
  ASSERT_EQ(j["exit-code"], 0);
  for (const auto& row : j["payload"]["residuals"]) EXPECT_LT(row["residual"].get<double>(), 1e-6) << row["op"];
}

TEST(Cli, ZevalAtTheOriginReadsAPointFile) {
  const std::string path = temp_path("origin.json");
  std::ofstream(path) << R"({"n": 1, "x": [["0", "0"], ["0", "0"]], "y": ["0", "0"], "r": "1"})";
  auto j = run({"zeval", "--n", "1", "--point", path}).report();
  EXPECT_NEAR(j["payload"]["Z"].get<double>(), 6.283185307179586, 1e-10);
  std::filesystem::remove(path);
}

TEST(Cli, PfaffianExportAndTransport) {
  const std::string path = temp_path("pfaffian.json");
  auto r = run({"pfaffian", "--n", "1", "--export", path});
  ASSERT_EQ(r.code, kExitPass);
  auto p = r.report()["payload"];
  EXPECT_EQ(p["size"], 4);
  EXPECT_TRUE(p["flat"].get<bool>());
  std::ifstream in(path);
  json exported;
  in >> exported;
  EXPECT_EQ(exported["standard"], json({"1", "dy1", "dy2", "dy2^2"}));
  std::filesystem::remove(path);

  auto t = run({"transport", "--n", "1", "--seed", "4", "--steps", "1000"}).report();
  EXPECT_LT(t["payload"]["max-relative-error"].get<double>(), 1e-6);
}

TEST(Cli, InitialMonomialsOfTheHomogenizedSystem) {
  auto j = run({"initial", "--system", "Iph", "--n", "1"}).report();
  ASSERT_EQ(j["exit-code"], 0);
  std::map<std::string, std::string> lead;
  for (const auto& g : j["payload"]["generators"])
    lead[g["name"]] = g["initial-coefficient"].get<std::string>() + "*" + g["initial-monomial"].get<std::string>();
  EXPECT_EQ(lead["Aph_12"], "-1*a12^3");
  EXPECT_EQ(lead["B"], "-1*r^2");
}

TEST(Cli, GroebnerRunWithPairLedger) {
  auto j = run({"gb", "--system", "It", "--n", "1", "--ledger"}).report();
  ASSERT_EQ(j["exit-code"], 0);
  const auto& p = j["payload"];
  EXPECT_TRUE(p["basis"]["certified"].get<bool>());
  EXPECT_TRUE(p["s-pairs"]["is-groebner"].get<bool>());
  for (const auto& pr : p["s-pairs"]["pairs"]) EXPECT_EQ(pr["result"], "0");
  EXPECT_EQ(p["rank"], 4);
}
