#include "specmatch/simulation.hpp"

#include <algorithm>
#include <numeric>

#include "specmatch/error.hpp"
#include "specmatch/matching.hpp"

namespace specmatch {

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::OneToOneDA: return "one-to-one";
    case ExperimentMode::ManyToOneGS: return "many-to-one";
    case ExperimentMode::Uncoordinated: return "uncoordinated";
  }
  throw Error("unreachable mode");
}

ExperimentMode mode_from_string(const std::string& text) {
  if (text == "one-to-one") return ExperimentMode::OneToOneDA;
  if (text == "many-to-one") return ExperimentMode::ManyToOneGS;
  if (text == "uncoordinated") return ExperimentMode::Uncoordinated;
  throw Error("unknown mode '" + text + "' (expected one-to-one, many-to-one or uncoordinated)");
}

Matching solve_instance(const MarketInstance& instance, ExperimentMode mode,
                        RandomStream& stream) {
  switch (mode) {
    case ExperimentMode::OneToOneDA: return da_one_to_one(instance);
    case ExperimentMode::ManyToOneGS: return gale_shapley_many_to_one(instance);
    case ExperimentMode::Uncoordinated: return uncoordinated_match(instance, stream);
  }
  throw Error("unreachable mode");
}

AllocationStats run_monte_carlo_range(const ScenarioTemplate& scenario, ExperimentMode mode,
                                      std::uint64_t first_instant, std::uint64_t count,
                                      std::uint64_t master_seed) {
  validate_template(scenario);
  AllocationStats stats = AllocationStats::zero(scenario.provider_count(), scenario.user_count());
  for (std::uint64_t t = first_instant; t < first_instant + count; ++t) {
    RandomStream stream(master_seed, t);
    const MarketInstance instance = instantiate(scenario, stream);
    const Matching matching = solve_instance(instance, mode, stream);
    stats.record(instance, matching);
  }
  return stats;
}

AllocationStats run_monte_carlo(const ScenarioTemplate& scenario, ExperimentMode mode,
                                std::uint64_t instants, std::uint64_t master_seed) {
  if (instants < 1) throw ValidationError("instant count must be at least 1");
  return run_monte_carlo_range(scenario, mode, 0, instants, master_seed);
}

AllocationStats run_exhaustive(const ScenarioTemplate& scenario, ExperimentMode mode) {
  if (mode == ExperimentMode::Uncoordinated) {
    throw UnsupportedMode("the uncoordinated baseline is stochastic in the matcher itself; "
                          "use the Monte Carlo engine");
  }
  validate_template(scenario);

  const int provider_count = scenario.provider_count();
  std::uint64_t permutation_count = 1;
  for (int i = 2; i <= provider_count; ++i) permutation_count *= static_cast<std::uint64_t>(i);

  constexpr std::uint64_t kProfileLimit = 10'000'000;
  std::uint64_t total_profiles = 1;
  for (int r = 0; r < scenario.random_user_count(); ++r) {
    if (total_profiles > kProfileLimit / permutation_count) {
      throw ProfileSpaceTooLarge("preference profile space exceeds " +
                                 std::to_string(kProfileLimit));
    }
    total_profiles *= permutation_count;
  }

  // All M! provider orderings, as ready-made preference lists.
  std::vector<PreferenceList> permutations;
  permutations.reserve(permutation_count);
  std::vector<int> order(provider_count);
  std::iota(order.begin(), order.end(), 0);
  do {
    std::vector<AgentId> ranked;
    ranked.reserve(order.size());
    for (int m : order) ranked.push_back(provider_id(m));
    permutations.emplace_back(std::move(ranked));
  } while (std::next_permutation(order.begin(), order.end()));

  std::vector<int> random_users;
  for (int n = 0; n < scenario.user_count(); ++n) {
    if (scenario.users[n].policy.kind == PolicyKind::UniformRandom) random_users.push_back(n);
  }

  MarketInstance instance;
  instance.providers = scenario.providers;
  for (const ScenarioUser& u : scenario.users) {
    instance.users.push_back(SpectrumUser{u.id, u.name, u.policy.fixed_prefs});
  }

  AllocationStats stats = AllocationStats::zero(provider_count, scenario.user_count());
  RandomStream unused(0, 0);  // never drawn from: mode is deterministic here
  std::vector<std::size_t> digit(random_users.size(), 0);
  for (std::uint64_t profile = 0; profile < total_profiles; ++profile) {
    for (std::size_t r = 0; r < random_users.size(); ++r) {
      instance.users[random_users[r]].prefs = permutations[digit[r]];
    }
    stats.record(instance, solve_instance(instance, mode, unused));
    for (std::size_t r = 0; r < digit.size(); ++r) {  // mixed-radix increment
      if (++digit[r] < permutations.size()) break;
      digit[r] = 0;
    }
  }
  return stats;
}

StatsReport make_report(const ScenarioTemplate& scenario, ExperimentMode mode,
                        const AllocationStats& stats, std::optional<std::uint64_t> seed,
                        int merged_from) {
  StatsReport report;
  report.scenario = scenario.label;
  report.mode = to_string(mode);
  report.seed = seed;
  report.merged_from = merged_from;
  for (const ScenarioUser& u : scenario.users) report.user_names.push_back(u.name);
  report.stats = stats;
  return report;
}

}  // namespace specmatch
