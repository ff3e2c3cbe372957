#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "specmatch/error.hpp"
#include "specmatch/matching.hpp"
#include "specmatch/simulation.hpp"
#include "specmatch/stability.hpp"

using namespace specmatch;

namespace {

struct RunConfig {
  std::string scenario;
  std::string mode = "one-to-one";
  std::string engine = "mc";
  bool randomize_su = false;
};

ScenarioTemplate resolve_scenario(const std::string& ref) {
  const auto& table = builtin_scenarios();
  if (const auto it = table.find(ref); it != table.end()) return it->second;
  if (std::filesystem::exists(ref)) return load_scenario_file(ref);
  throw UnknownLabel("'" + ref + "' is neither a builtin scenario label nor a scenario file");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << text;
}

std::string fraction_text(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << value;
  return out.str();
}

StatsReport execute(const RunConfig& config, std::uint64_t instants, std::uint64_t seed) {
  auto scenario = resolve_scenario(config.scenario);
  if (config.randomize_su) scenario = with_uniform_random_users(scenario);
  const auto mode = mode_from_string(config.mode);
  if (config.engine == "exhaustive") {
    return make_report(scenario, mode, run_exhaustive(scenario, mode), std::nullopt);
  }
  if (config.engine != "mc") {
    throw Error("unknown engine '" + config.engine + "' (expected mc or exhaustive)");
  }
  return make_report(scenario, mode, run_monte_carlo(scenario, mode, instants, seed), seed);
}

int run_command(const RunConfig& config, std::uint64_t instants, std::uint64_t seed,
                bool seed_given, bool trace, const std::string& output,
                const std::string& format) {
  if (config.engine == "exhaustive" && seed_given) {
    throw Error("the exhaustive engine enumerates every profile; --seed is not accepted");
  }
  if (instants < 1) throw Error("--instants must be at least 1");

  if (trace) {
    auto scenario = resolve_scenario(config.scenario);
    if (config.randomize_su) scenario = with_uniform_random_users(scenario);
    const auto mode = mode_from_string(config.mode);
    if (mode == ExperimentMode::Uncoordinated) {
      throw Error("--trace needs proposal rounds; the uncoordinated baseline has none");
    }
    if (!scenario.all_fixed()) {
      throw Error("--trace requires a scenario whose SU preferences are all fixed");
    }
    RandomStream stream(seed, 0);
    const auto instance = instantiate(scenario, stream);
    MatchTrace match_trace;
    const auto matching = mode == ExperimentMode::ManyToOneGS
                              ? gale_shapley_many_to_one(instance, &match_trace)
                              : da_one_to_one(instance, &match_trace);
    std::cout << format_trace(instance, match_trace, matching);
    if (output.empty()) return 0;
  }

  const auto report = execute(config, instants, seed);
  write_text(output, format == "json" ? report_to_json(report).dump(2) + "\n"
                                      : report_to_csv(report));
  return 0;
}

int compare_command(const RunConfig& a, const RunConfig& b, std::uint64_t instants,
                    std::uint64_t seed, const std::string& output, const std::string& format) {
  const auto report_a = execute(a, instants, seed);
  const auto report_b = execute(b, instants, seed);
  if (report_a.stats.user_count != report_b.stats.user_count) {
    throw ShapeMismatch("compared runs must share the number of SUs");
  }

  const int users = report_a.stats.user_count;
  const int ranks = std::max(report_a.stats.provider_count, report_b.stats.provider_count);
  auto cell = [](const StatsReport& r, int n, int i) -> std::optional<double> {
    if (i > r.stats.provider_count) return std::nullopt;
    return r.stats.fraction(n, i);
  };

  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (int n = 0; n < users; ++n) {
      for (int i = 1; i <= ranks + 1; ++i) {
        const bool unmatched_row = i == ranks + 1;
        const auto va =
            unmatched_row ? std::optional(report_a.stats.unmatched_fraction(n)) : cell(report_a, n, i);
        const auto vb =
            unmatched_row ? std::optional(report_b.stats.unmatched_fraction(n)) : cell(report_b, n, i);
        nlohmann::json row = {
            {"su_id", report_a.user_names.at(n)},
            {"metric", unmatched_row ? std::string("unmatched") : "rank-" + std::to_string(i)}};
        row["a"] = va.has_value() ? nlohmann::json(*va) : nlohmann::json(nullptr);
        row["b"] = vb.has_value() ? nlohmann::json(*vb) : nlohmann::json(nullptr);
        row["diff"] = va && vb ? nlohmann::json(*va - *vb) : nlohmann::json(nullptr);
        rows.push_back(row);
      }
    }
    const nlohmann::json doc = {{"a", {{"scenario", report_a.scenario}, {"mode", report_a.mode}}},
                                {"b", {{"scenario", report_b.scenario}, {"mode", report_b.mode}}},
                                {"rows", rows}};
    write_text(output, doc.dump(2) + "\n");
    return 0;
  }

  std::ostringstream out;
  out << "su_id,metric,a,b,diff\n";
  for (int n = 0; n < users; ++n) {
    for (int i = 1; i <= ranks + 1; ++i) {
      const bool unmatched_row = i == ranks + 1;
      const auto va =
          unmatched_row ? std::optional(report_a.stats.unmatched_fraction(n)) : cell(report_a, n, i);
      const auto vb =
          unmatched_row ? std::optional(report_b.stats.unmatched_fraction(n)) : cell(report_b, n, i);
      out << report_a.user_names.at(n) << ","
          << (unmatched_row ? std::string("unmatched") : "rank-" + std::to_string(i)) << ","
          << (va ? fraction_text(*va) : "") << "," << (vb ? fraction_text(*vb) : "") << ","
          << (va && vb ? fraction_text(*va - *vb) : "") << "\n";
    }
  }
  write_text(output, out.str());
  return 0;
}

int list_scenarios_command() {
  for (const auto& [label, scenario] : builtin_scenarios()) {
    std::ostringstream quotas;
    for (std::size_t m = 0; m < scenario.providers.size(); ++m) {
      quotas << (m ? "," : "") << scenario.providers[m].quota;
    }
    std::cout << label << "  (" << scenario.provider_count() << " SPs, "
              << scenario.user_count() << " SUs, quotas " << quotas.str() << ", "
              << scenario.random_user_count() << " randomized SU lists)\n";
  }
  return 0;
}

// Figure-by-figure reproduction of the bundled experiments, one PASS/FAIL
// line each. Exit status 0 only if everything passes.
int reproduce_all_command(std::uint64_t instants, std::uint64_t seed) {
  int failures = 0;
  auto line = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    if (!ok) ++failures;
  };
  auto near = [](double value, double target, double tolerance) {
    return std::abs(value - target) <= tolerance;
  };

  {  // fig3: one-to-one statistics of the symmetric 3x3 market
    const auto& scenario = builtin_scenario("table2-1to1");
    const auto exact = run_exhaustive(scenario, ExperimentMode::OneToOneDA);
    const auto mc = run_monte_carlo(scenario, ExperimentMode::OneToOneDA, instants, seed);
    bool ok = exact.rank_counts[0] == exact.rank_counts[1] &&
              exact.rank_counts[1] == exact.rank_counts[2];
    for (int n = 0; n < 3; ++n) {
      ok = ok && near(exact.fraction(n, 1), 0.70, 0.03) &&
           near(exact.fraction(n, 2), 0.17, 0.03) && near(exact.fraction(n, 3), 0.13, 0.03);
      for (int i = 1; i <= 3; ++i) {
        ok = ok && near(mc.fraction(n, i), exact.fraction(n, i), 0.01);
      }
    }
    std::ostringstream detail;
    detail << std::fixed << std::setprecision(4) << "exhaustive S_1=" << exact.fraction(0, 1)
           << " S_2=" << exact.fraction(0, 2) << " S_3=" << exact.fraction(0, 3)
           << " vs 0.70/0.17/0.13 +-0.03";
    line("fig3", ok, detail.str());
  }

  {  // fig4: SP B promoting SU1, against the uncoordinated baseline
    const auto exact =
        run_exhaustive(builtin_scenario("table2-spB-variant"), ExperimentMode::OneToOneDA);
    const auto baseline = run_monte_carlo(builtin_scenario("table2-1to1"),
                                          ExperimentMode::Uncoordinated, instants, seed);
    const bool ok = near(exact.fraction(0, 1), 0.89, 0.03) &&
                    near(baseline.fraction(0, 1), 1.0 / 3.0, 0.01);
    std::ostringstream detail;
    detail << std::fixed << std::setprecision(4) << "variant S_{1,1}=" << exact.fraction(0, 1)
           << " vs 0.89 +-0.03; uncoordinated " << baseline.fraction(0, 1)
           << " vs 0.3333 +-0.01";
    line("fig4", ok, detail.str());
  }

  {  // cbrs-trace: the worked one-to-one example
    RandomStream stream(seed, 0);
    const auto instance = instantiate(builtin_scenario("eq4-cbrs"), stream);
    const auto matching = da_one_to_one(instance);
    const bool ok =
        matching.pairs() == std::vector<std::pair<int, int>>{{0, 0}, {1, 2}, {2, 1}} &&
        !matching.provider_of(3).has_value();
    line("cbrs-trace", ok, "expected A-SU1, B-SU3, C-SU2, SU4 unmatched");
  }

  {  // fig6: both slices everywhere eliminate unmatched instants
    const auto quota2 =
        run_exhaustive(builtin_scenario("table3-quota2-all"), ExperimentMode::ManyToOneGS);
    const auto single =
        run_exhaustive(builtin_scenario("table3-1to1"), ExperimentMode::OneToOneDA);
    bool ok = true;
    for (int n = 0; n < 4; ++n) {
      ok = ok && quota2.unmatched_counts[n] == 0 &&
           quota2.fraction(n, 1) > single.fraction(n, 1);
    }
    line("fig6", ok, "U_n = 0 exactly and rank-1 shares exceed the one-to-one run");
  }

  {  // fig7: SP A's top-two users always win A when they ask it first
    const auto& scenario = builtin_scenario("table3-quotaA2");
    const std::vector<int> top_two = {scenario.providers[0].prefs.at(0).index,
                                      scenario.providers[0].prefs.at(1).index};
    bool ok = true;
    std::uint64_t asserted = 0;
    for (std::uint64_t t = 0; t < instants && ok; ++t) {
      RandomStream stream(seed, t);
      const auto instance = instantiate(scenario, stream);
      const auto matching = gale_shapley_many_to_one(instance);
      for (int n : top_two) {
        if (instance.users[n].prefs.at(0).index == 0) {
          ++asserted;
          ok = ok && matching.provider_of(n) == 0;
        }
      }
    }
    line("fig7", ok,
         "first-choice-A guarantee held on " + std::to_string(asserted) + " proposals");
  }

  {  // fig8: moving SU2 ahead in P(C) lifts its first-choice share
    const double s4 = run_exhaustive(builtin_scenario("fig8-sweep-4"),
                                     ExperimentMode::ManyToOneGS)
                          .fraction(1, 1);
    const double s3 = run_exhaustive(builtin_scenario("fig8-sweep-3"),
                                     ExperimentMode::ManyToOneGS)
                          .fraction(1, 1);
    const auto at2 =
        run_exhaustive(builtin_scenario("fig8-sweep-2"), ExperimentMode::ManyToOneGS);
    const bool ok =
        s4 <= s3 && s3 <= at2.fraction(1, 1) && at2.fraction(1, 1) > at2.fraction(2, 1);
    std::ostringstream detail;
    detail << std::fixed << std::setprecision(4) << "S_{2,1}: " << s4 << " -> " << s3 << " -> "
           << at2.fraction(1, 1) << "; S_{3,1} at position 2: " << at2.fraction(2, 1);
    line("fig8", ok, detail.str());
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable matching engine and Monte Carlo simulator for licensed spectrum sharing"};
  app.require_subcommand(1);

  RunConfig run_config;
  std::uint64_t instants = 100000;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "csv";
  bool trace = false;

  auto* run = app.add_subcommand("run", "run one experiment and write a report");
  run->add_option("--scenario", run_config.scenario, "builtin label or scenario file")
      ->required();
  run->add_option("--mode", run_config.mode, "one-to-one | many-to-one | uncoordinated");
  run->add_option("--engine", run_config.engine, "mc | exhaustive");
  run->add_option("--instants", instants, "allocation instants for the mc engine");
  auto* seed_opt = run->add_option("--seed", seed, "master seed for the mc engine");
  run->add_option("--output", output, "report file (stdout if omitted)");
  run->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--trace", trace, "print the per-round proposal log (all-fixed scenarios)");
  run->add_flag("--randomize-su", run_config.randomize_su,
                "switch every SU preference policy to uniform-random");

  RunConfig cmp_a, cmp_b;
  auto* compare = app.add_subcommand("compare", "run two configurations side by side");
  compare->add_option("--scenario-a", cmp_a.scenario)->required();
  compare->add_option("--scenario-b", cmp_b.scenario)->required();
  compare->add_option("--mode-a", cmp_a.mode);
  compare->add_option("--mode-b", cmp_b.mode);
  compare->add_option("--engine-a", cmp_a.engine);
  compare->add_option("--engine-b", cmp_b.engine);
  compare->add_flag("--randomize-su-a", cmp_a.randomize_su);
  compare->add_flag("--randomize-su-b", cmp_b.randomize_su);
  compare->add_option("--instants", instants);
  compare->add_option("--seed", seed);
  compare->add_option("--output", output);
  compare->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  auto* reproduce = app.add_subcommand(
      "reproduce-all", "check every bundled experiment, one line per figure");
  reproduce->add_option("--instants", instants);
  reproduce->add_option("--seed", seed);

  app.add_subcommand("list-scenarios", "list the bundled scenario labels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(run_config, instants, seed, seed_opt->count() > 0, trace, output,
                         format);
    }
    if (compare->parsed()) {
      return compare_command(cmp_a, cmp_b, instants, seed, output, format);
    }
    if (reproduce->parsed()) {
      return reproduce_all_command(instants, seed);
    }
    return list_scenarios_command();
  } catch (const ProfileSpaceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
