#include "specmatch/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "specmatch/error.hpp"

namespace specmatch {

bool ScenarioTemplate::all_fixed() const {
  return std::all_of(users.begin(), users.end(),
                     [](const ScenarioUser& u) { return u.policy.kind == PolicyKind::Fixed; });
}

int ScenarioTemplate::random_user_count() const {
  return static_cast<int>(std::count_if(users.begin(), users.end(), [](const ScenarioUser& u) {
    return u.policy.kind == PolicyKind::UniformRandom;
  }));
}

const ScenarioTemplate& validate_template(const ScenarioTemplate& scenario) {
  // Reuse instance validation on a skeleton where random users get an empty
  // (always valid) list and fixed users keep theirs.
  MarketInstance skeleton;
  skeleton.providers = scenario.providers;
  for (const ScenarioUser& u : scenario.users) {
    PreferenceList prefs =
        u.policy.kind == PolicyKind::Fixed ? u.policy.fixed_prefs : PreferenceList{};
    skeleton.users.push_back(SpectrumUser{u.id, u.name, std::move(prefs)});
  }
  validate_instance(skeleton);
  return scenario;
}

MarketInstance instantiate(const ScenarioTemplate& scenario, RandomStream& stream) {
  validate_template(scenario);
  MarketInstance instance;
  instance.providers = scenario.providers;
  instance.users.reserve(scenario.users.size());
  for (const ScenarioUser& u : scenario.users) {
    PreferenceList prefs;
    if (u.policy.kind == PolicyKind::Fixed) {
      prefs = u.policy.fixed_prefs;
    } else {
      std::vector<int> order(scenario.providers.size());
      std::iota(order.begin(), order.end(), 0);
      stream.shuffle(order);
      std::vector<AgentId> ranked;
      ranked.reserve(order.size());
      for (int m : order) ranked.push_back(provider_id(m));
      prefs = PreferenceList(std::move(ranked));
    }
    instance.users.push_back(SpectrumUser{u.id, u.name, std::move(prefs)});
  }
  return instance;
}

Matching uncoordinated_match(const MarketInstance& instance, RandomStream& stream) {
  validate_instance(instance);
  std::vector<int> order(instance.users.size());
  std::iota(order.begin(), order.end(), 0);
  stream.shuffle(order);

  std::vector<int> residual(instance.providers.size());
  for (int m = 0; m < instance.provider_count(); ++m) residual[m] = instance.providers[m].quota;

  Matching result(instance.provider_count(), instance.user_count());
  std::vector<int> open;
  for (int n : order) {
    open.clear();
    for (int m = 0; m < instance.provider_count(); ++m) {
      if (residual[m] > 0) open.push_back(m);
    }
    if (open.empty()) break;
    const int m = open[stream.below(open.size())];
    result.assign(m, n);
    --residual[m];
  }
  return result;
}

ScenarioTemplate with_uniform_random_users(ScenarioTemplate scenario) {
  for (ScenarioUser& u : scenario.users) u.policy = UserPolicy{PolicyKind::UniformRandom, {}};
  return scenario;
}

namespace {

PreferenceList users_ranked(std::initializer_list<int> indices) {
  std::vector<AgentId> ranked;
  for (int n : indices) ranked.push_back(user_id(n));
  return PreferenceList(std::move(ranked));
}

PreferenceList providers_ranked(std::initializer_list<int> indices) {
  std::vector<AgentId> ranked;
  for (int m : indices) ranked.push_back(provider_id(m));
  return PreferenceList(std::move(ranked));
}

SpectrumProvider provider(int index, std::string name, int quota, PreferenceList prefs) {
  return SpectrumProvider{provider_id(index), std::move(name), quota, std::move(prefs)};
}

ScenarioUser random_user(int index, std::string name) {
  return ScenarioUser{user_id(index), std::move(name), UserPolicy{PolicyKind::UniformRandom, {}}};
}

ScenarioUser fixed_user(int index, std::string name, PreferenceList prefs) {
  return ScenarioUser{user_id(index), std::move(name),
                      UserPolicy{PolicyKind::Fixed, std::move(prefs)}};
}

std::vector<ScenarioUser> random_users(int count) {
  std::vector<ScenarioUser> users;
  for (int n = 0; n < count; ++n) {
    users.push_back(random_user(n, "SU" + std::to_string(n + 1)));
  }
  return users;
}

std::map<std::string, ScenarioTemplate> make_builtins() {
  std::map<std::string, ScenarioTemplate> table;

  // 3 SPs, 3 SUs, randomized SU lists; SP lists are cyclic so every SU is
  // the first, second and third choice of exactly one SP.
  table["table2-1to1"] = ScenarioTemplate{
      "table2-1to1",
      {provider(0, "A", 1, users_ranked({0, 1, 2})),
       provider(1, "B", 1, users_ranked({1, 2, 0})),
       provider(2, "C", 1, users_ranked({2, 0, 1}))},
      random_users(3)};

  // Same market with SP B promoting SU1 to its first choice.
  table["table2-spB-variant"] = ScenarioTemplate{
      "table2-spB-variant",
      {provider(0, "A", 1, users_ranked({0, 1, 2})),
       provider(1, "B", 1, users_ranked({0, 2, 1})),
       provider(2, "C", 1, users_ranked({2, 0, 1}))},
      random_users(3)};

  // CBRS priority-access example: 3 PA licensees, 4 SUs, all lists fixed.
  table["eq4-cbrs"] = ScenarioTemplate{
      "eq4-cbrs",
      {provider(0, "A", 1, users_ranked({0, 1, 3, 2})),
       provider(1, "B", 1, users_ranked({2, 3, 0, 1})),
       provider(2, "C", 1, users_ranked({0, 2, 1, 3}))},
      {fixed_user(0, "SU1", providers_ranked({0, 1, 2})),
       fixed_user(1, "SU2", providers_ranked({1, 0, 2})),
       fixed_user(2, "SU3", providers_ranked({1, 2, 0})),
       fixed_user(3, "SU4", providers_ranked({0, 2, 1}))}};

  const std::vector<SpectrumProvider> table3 = {
      provider(0, "A", 1, users_ranked({0, 1, 2, 3})),
      provider(1, "B", 1, users_ranked({1, 2, 3, 0})),
      provider(2, "C", 1, users_ranked({2, 3, 0, 1}))};

  table["table3-1to1"] = ScenarioTemplate{"table3-1to1", table3, random_users(4)};

  auto quota2_all = table3;
  for (auto& sp : quota2_all) sp.quota = 2;
  table["table3-quota2-all"] = ScenarioTemplate{"table3-quota2-all", quota2_all, random_users(4)};

  auto quota_a2 = table3;
  quota_a2[0].quota = 2;
  table["table3-quotaA2"] = ScenarioTemplate{"table3-quotaA2", quota_a2, random_users(4)};

  // Sweep of SU2's position in P(C), displacing it forward while keeping
  // the relative order of the other SUs. Position 4 is the Table III list.
  const std::map<int, PreferenceList> sweep = {{4, users_ranked({2, 3, 0, 1})},
                                               {3, users_ranked({2, 3, 1, 0})},
                                               {2, users_ranked({2, 1, 3, 0})}};
  for (const auto& [position, prefs] : sweep) {
    auto providers = quota_a2;
    providers[2].prefs = prefs;
    const std::string label = "fig8-sweep-" + std::to_string(position);
    table[label] = ScenarioTemplate{label, providers, random_users(4)};
  }

  for (const auto& [label, scenario] : table) validate_template(scenario);
  return table;
}

}  // namespace

const std::map<std::string, ScenarioTemplate>& builtin_scenarios() {
  static const std::map<std::string, ScenarioTemplate> table = make_builtins();
  return table;
}

const ScenarioTemplate& builtin_scenario(const std::string& label) {
  const auto& table = builtin_scenarios();
  const auto it = table.find(label);
  if (it == table.end()) throw UnknownLabel("no builtin scenario named '" + label + "'");
  return it->second;
}

namespace {

void require_keys(const nlohmann::json& object, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!object.is_object()) throw ScenarioParseError(where + " must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end()) {
      throw ScenarioParseError("unknown key '" + key + "' in " + where);
    }
  }
}

std::string get_string(const nlohmann::json& object, const char* key, const std::string& where) {
  if (!object.contains(key) || !object.at(key).is_string()) {
    throw ScenarioParseError(where + " requires string key '" + key + "'");
  }
  return object.at(key).get<std::string>();
}

PreferenceList resolve_prefs(const nlohmann::json& names, Side side,
                             const std::unordered_map<std::string, int>& index_of,
                             const std::string& where) {
  if (!names.is_array()) throw ScenarioParseError(where + ": 'prefs' must be an array");
  std::vector<AgentId> ranked;
  for (const auto& entry : names) {
    if (!entry.is_string()) throw ScenarioParseError(where + ": preference entries must be strings");
    const auto name = entry.get<std::string>();
    const auto it = index_of.find(name);
    if (it == index_of.end()) {
      throw UnknownAgentId(where + ": preference names unknown agent '" + name + "'");
    }
    ranked.push_back(AgentId{side, it->second});
  }
  return PreferenceList(std::move(ranked));
}

}  // namespace

nlohmann::json scenario_to_json(const ScenarioTemplate& scenario) {
  nlohmann::json providers = nlohmann::json::array();
  for (const SpectrumProvider& sp : scenario.providers) {
    nlohmann::json prefs = nlohmann::json::array();
    for (AgentId id : sp.prefs.ranked()) prefs.push_back(scenario.users.at(id.index).name);
    providers.push_back({{"id", sp.name}, {"quota", sp.quota}, {"prefs", prefs}});
  }
  nlohmann::json users = nlohmann::json::array();
  for (const ScenarioUser& su : scenario.users) {
    nlohmann::json entry = {{"id", su.name}};
    if (su.policy.kind == PolicyKind::Fixed) {
      entry["policy"] = "fixed";
      nlohmann::json prefs = nlohmann::json::array();
      for (AgentId id : su.policy.fixed_prefs.ranked()) {
        prefs.push_back(scenario.providers.at(id.index).name);
      }
      entry["prefs"] = prefs;
    } else {
      entry["policy"] = "uniform-random";
    }
    users.push_back(entry);
  }
  return {{"label", scenario.label}, {"providers", providers}, {"users", users}};
}

ScenarioTemplate scenario_from_json(const nlohmann::json& doc) {
  require_keys(doc, {"label", "providers", "users"}, "scenario");
  ScenarioTemplate scenario;
  scenario.label = get_string(doc, "label", "scenario");

  if (!doc.contains("providers") || !doc.at("providers").is_array() ||
      !doc.contains("users") || !doc.at("users").is_array()) {
    throw ScenarioParseError("scenario requires 'providers' and 'users' arrays");
  }

  // First pass: collect names so preference lists can be resolved.
  std::unordered_map<std::string, int> provider_index, user_index;
  for (const auto& entry : doc.at("providers")) {
    require_keys(entry, {"id", "quota", "prefs"}, "provider");
    const auto name = get_string(entry, "id", "provider");
    if (!provider_index.emplace(name, static_cast<int>(provider_index.size())).second) {
      throw ScenarioParseError("duplicate provider id '" + name + "'");
    }
  }
  for (const auto& entry : doc.at("users")) {
    require_keys(entry, {"id", "policy", "prefs"}, "user");
    const auto name = get_string(entry, "id", "user");
    if (!user_index.emplace(name, static_cast<int>(user_index.size())).second) {
      throw ScenarioParseError("duplicate user id '" + name + "'");
    }
  }

  for (const auto& entry : doc.at("providers")) {
    const auto name = get_string(entry, "id", "provider");
    const std::string where = "provider '" + name + "'";
    if (!entry.contains("quota") || !entry.at("quota").is_number_integer()) {
      throw ScenarioParseError(where + " requires integer key 'quota'");
    }
    if (!entry.contains("prefs")) throw ScenarioParseError(where + " requires key 'prefs'");
    scenario.providers.push_back(
        provider(static_cast<int>(scenario.providers.size()), name, entry.at("quota").get<int>(),
                 resolve_prefs(entry.at("prefs"), Side::User, user_index, where)));
  }
  for (const auto& entry : doc.at("users")) {
    const auto name = get_string(entry, "id", "user");
    const std::string where = "user '" + name + "'";
    const auto policy = get_string(entry, "policy", where);
    const int index = static_cast<int>(scenario.users.size());
    if (policy == "fixed") {
      if (!entry.contains("prefs")) {
        throw ScenarioParseError(where + ": fixed policy requires 'prefs'");
      }
      scenario.users.push_back(fixed_user(
          index, name, resolve_prefs(entry.at("prefs"), Side::Provider, provider_index, where)));
    } else if (policy == "uniform-random") {
      if (entry.contains("prefs")) {
        throw ScenarioParseError(where + ": uniform-random policy forbids 'prefs'");
      }
      scenario.users.push_back(random_user(index, name));
    } else {
      throw ScenarioParseError(where + ": policy must be 'fixed' or 'uniform-random'");
    }
  }

  validate_template(scenario);
  return scenario;
}

ScenarioTemplate load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario_file(const ScenarioTemplate& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file '" + path + "'");
  out << scenario_to_json(scenario).dump(2) << "\n";
}

}  // namespace specmatch
