#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "specmatch/market.hpp"
#include "specmatch/random.hpp"

namespace specmatch {

/// How a user's preference list is produced at each allocation instant.
enum class PolicyKind { Fixed, UniformRandom };

struct UserPolicy {
  PolicyKind kind = PolicyKind::UniformRandom;
  PreferenceList fixed_prefs;  // used only when kind == Fixed

  friend bool operator==(const UserPolicy&, const UserPolicy&) = default;
};

struct ScenarioUser {
  AgentId id;
  std::string name;
  UserPolicy policy;

  friend bool operator==(const ScenarioUser&, const ScenarioUser&) = default;
};

/// MarketInstance skeleton: providers are fixed across instants, user
/// preference lists are produced per instant by their policy.
struct ScenarioTemplate {
  std::string label;
  std::vector<SpectrumProvider> providers;
  std::vector<ScenarioUser> users;

  int provider_count() const { return static_cast<int>(providers.size()); }
  int user_count() const { return static_cast<int>(users.size()); }

  bool all_fixed() const;
  int random_user_count() const;

  friend bool operator==(const ScenarioTemplate&, const ScenarioTemplate&) = default;
};

/// Structural validation mirroring validate_instance; throws the same
/// error types.
const ScenarioTemplate& validate_template(const ScenarioTemplate& scenario);

/// Materializes one allocation instant. UniformRandom users get a fresh
/// uniform permutation of all providers drawn from `stream`; fixed lists
/// and the provider side are copied verbatim.
MarketInstance instantiate(const ScenarioTemplate& scenario, RandomStream& stream);

/// Preference-blind baseline: users in uniformly random order each take a
/// slice from a uniformly random provider with residual quota, until users
/// or slices run out. With unit quotas this is a uniform random injective
/// assignment of min(N, M) users.
Matching uncoordinated_match(const MarketInstance& instance, RandomStream& stream);

/// Copy with every user policy switched to UniformRandom.
ScenarioTemplate with_uniform_random_users(ScenarioTemplate scenario);

/// Bundled scenarios, keyed by label.
const std::map<std::string, ScenarioTemplate>& builtin_scenarios();

/// Lookup by label; throws UnknownLabel.
const ScenarioTemplate& builtin_scenario(const std::string& label);

// Scenario file format (JSON): top-level keys label/providers/users;
// providers are {id, quota, prefs}, users are {id, policy, prefs?} with
// policy "fixed" or "uniform-random". Ids are strings, preference arrays
// highest-first. Unknown keys are rejected.
nlohmann::json scenario_to_json(const ScenarioTemplate& scenario);
ScenarioTemplate scenario_from_json(const nlohmann::json& doc);
ScenarioTemplate load_scenario_file(const std::string& path);
void save_scenario_file(const ScenarioTemplate& scenario, const std::string& path);

}  // namespace specmatch
