#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "specmatch/scenario.hpp"
#include "specmatch/stats.hpp"

namespace {

struct CommandResult {
  int status = -1;
  std::string output;  // stdout and stderr combined
};

CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(SPECMATCH_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, output};
}

// Splits a CSV body into lines.
std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Returns the fraction column of the row starting with `prefix`.
double fraction_of(const std::string& csv, const std::string& prefix) {
  for (const auto& line : lines_of(csv)) {
    if (line.rfind(prefix, 0) == 0) {
      const auto last_comma = line.find_last_of(',');
      return std::stod(line.substr(last_comma + 1));
    }
  }
  FAIL("row not found: ", prefix);
  return -1.0;
}

}  // namespace

TEST_CASE("trace of the cbrs scenario ends with the final hold line") {
  const auto result = run_cli("run --scenario eq4-cbrs --mode one-to-one --trace");
  CHECK(result.status == 0);
  const auto lines = lines_of(result.output);
  REQUIRE_FALSE(lines.empty());
  CHECK(lines.back() == "A holds SU1; B holds SU3; C holds SU2; SU4 exhausted list");
  CHECK(result.output.find("round 1: SU1 requests A") != std::string::npos);
}

TEST_CASE("exhaustive run emits exact csv statistics") {
  const auto result =
      run_cli("run --scenario table2-1to1 --mode one-to-one --engine exhaustive --format csv");
  CHECK(result.status == 0);
  const auto lines = lines_of(result.output);
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0] == "su_id,rank,count,fraction");
  CHECK(result.output.find("SU1,1,132,0.611111") != std::string::npos);
  CHECK(result.output.find("SU1,unmatched,0,0.000000") != std::string::npos);
}

TEST_CASE("uncoordinated run lands on the one-third baseline") {
  const auto result =
      run_cli("run --scenario table2-1to1 --mode uncoordinated --instants 100000 --seed 7");
  CHECK(result.status == 0);
  CHECK(std::abs(fraction_of(result.output, "SU1,1,") - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("json report written to a file parses back") {
  const std::string path = "cli_report_test.json";
  const auto result = run_cli("run --scenario table3-quotaA2 --mode many-to-one --instants 500 "
                              "--seed 3 --format json --output " + path);
  CHECK(result.status == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json doc;
  in >> doc;
  const auto report = specmatch::report_from_json(doc);
  CHECK(report.scenario == "table3-quotaA2");
  CHECK(report.mode == "many-to-one");
  CHECK(report.seed == 3);
  CHECK(report.stats.instants == 500);
  CHECK(report.user_names.size() == 4);
  std::remove(path.c_str());
}

TEST_CASE("diagnostics exit with status 1") {
  CHECK(run_cli("run --scenario no-such-scenario").status == 1);
  CHECK(run_cli("run --scenario table2-1to1 --engine exhaustive --seed 5").status == 1);
  CHECK(run_cli("run --scenario table2-1to1 --trace").status == 1);        // randomized SUs
  CHECK(run_cli("run --scenario eq4-cbrs --mode uncoordinated --trace").status == 1);
  CHECK(run_cli("run --scenario table2-1to1 --instants 0").status == 1);
}

TEST_CASE("oversized profile spaces exit with status 2") {
  const std::string path = "cli_big_scenario_test.json";
  {
    using namespace specmatch;
    ScenarioTemplate big;
    big.label = "big";
    std::vector<AgentId> all_users;
    for (int n = 0; n < 4; ++n) all_users.push_back(user_id(n));
    for (int m = 0; m < 6; ++m) {
      big.providers.push_back(SpectrumProvider{provider_id(m), "SP" + std::to_string(m + 1), 1,
                                               PreferenceList(all_users)});
    }
    for (int n = 0; n < 4; ++n) {
      big.users.push_back(ScenarioUser{user_id(n), "SU" + std::to_string(n + 1),
                                       UserPolicy{PolicyKind::UniformRandom, {}}});
    }
    save_scenario_file(big, path);
  }
  const auto result = run_cli("run --scenario " + path + " --engine exhaustive");
  CHECK(result.status == 2);
  std::remove(path.c_str());
}

TEST_CASE("compare of identical configurations shows zero differences") {
  const auto result = run_cli("compare --scenario-a table2-1to1 --scenario-b table2-1to1 "
                              "--engine-a exhaustive --engine-b exhaustive");
  CHECK(result.status == 0);
  const auto lines = lines_of(result.output);
  REQUIRE(lines.size() > 1);
  CHECK(lines[0] == "su_id,metric,a,b,diff");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CAPTURE(lines[i]);
    CHECK(lines[i].substr(lines[i].find_last_of(',') + 1) == "0.000000");
  }
}

TEST_CASE("compare quantifies the gain over the uncoordinated baseline") {
  const auto result = run_cli("compare --scenario-a table2-1to1 --scenario-b table2-1to1 "
                              "--mode-a one-to-one --mode-b uncoordinated "
                              "--engine-a exhaustive --engine-b mc --instants 100000 --seed 7");
  CHECK(result.status == 0);
  double a = 0.0, b = 0.0;
  for (const auto& line : lines_of(result.output)) {
    if (line.rfind("SU1,rank-1,", 0) == 0) {
      std::istringstream in(line);
      std::string su, metric, a_text, b_text;
      std::getline(in, su, ',');
      std::getline(in, metric, ',');
      std::getline(in, a_text, ',');
      std::getline(in, b_text, ',');
      a = std::stod(a_text);
      b = std::stod(b_text);
    }
  }
  CHECK(a == doctest::Approx(132.0 / 216.0).epsilon(1e-5));  // csv carries 6 digits
  CHECK(std::abs(b - 1.0 / 3.0) <= 0.01);
  CHECK(a - b > 0.2);
}

TEST_CASE("compare rejects different user counts") {
  const auto result = run_cli("compare --scenario-a table2-1to1 --scenario-b table3-1to1 "
                              "--instants 10");
  CHECK(result.status == 1);
}

TEST_CASE("list-scenarios prints every builtin label") {
  const auto result = run_cli("list-scenarios");
  CHECK(result.status == 0);
  for (const auto& [label, scenario] : specmatch::builtin_scenarios()) {
    CAPTURE(label);
    CHECK(result.output.find(label) != std::string::npos);
  }
}

TEST_CASE("scenario files load through the run subcommand") {
  const std::string path = "cli_file_scenario_test.json";
  specmatch::save_scenario_file(specmatch::builtin_scenario("eq4-cbrs"), path);
  const auto result = run_cli("run --scenario " + path + " --mode one-to-one --trace");
  CHECK(result.status == 0);
  CHECK(result.output.find("SU4 exhausted list") != std::string::npos);
  std::remove(path.c_str());
}
