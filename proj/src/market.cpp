#include "specmatch/market.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "specmatch/error.hpp"

namespace specmatch {

namespace {

std::string agent_label(AgentId id) {
  return (id.side == Side::Provider ? "SP#" : "SU#") + std::to_string(id.index);
}

void check_preference_list(const PreferenceList& prefs, Side expected_side,
                           int counterpart_count, const std::string& owner) {
  std::vector<bool> seen(static_cast<std::size_t>(counterpart_count), false);
  for (AgentId entry : prefs.ranked()) {
    if (entry.side != expected_side || entry.index < 0 || entry.index >= counterpart_count) {
      throw UnknownAgentId("preference list of " + owner + " names unknown agent " +
                           agent_label(entry));
    }
    if (seen[static_cast<std::size_t>(entry.index)]) {
      throw DuplicateInPreference("preference list of " + owner + " repeats " +
                                  agent_label(entry));
    }
    seen[static_cast<std::size_t>(entry.index)] = true;
  }
}

}  // namespace

const MarketInstance& validate_instance(const MarketInstance& instance) {
  if (instance.providers.empty()) throw EmptySide("instance has no providers");
  if (instance.users.empty()) throw EmptySide("instance has no users");

  for (int m = 0; m < instance.provider_count(); ++m) {
    const SpectrumProvider& sp = instance.providers[m];
    if (sp.id != provider_id(m)) {
      throw UnknownAgentId("provider at slot " + std::to_string(m) + " carries id " +
                           agent_label(sp.id));
    }
    if (sp.quota < 1) {
      throw ZeroQuota("provider " + sp.name + " has quota " + std::to_string(sp.quota));
    }
    check_preference_list(sp.prefs, Side::User, instance.user_count(), sp.name);
  }
  for (int n = 0; n < instance.user_count(); ++n) {
    const SpectrumUser& su = instance.users[n];
    if (su.id != user_id(n)) {
      throw UnknownAgentId("user at slot " + std::to_string(n) + " carries id " +
                           agent_label(su.id));
    }
    check_preference_list(su.prefs, Side::Provider, instance.provider_count(), su.name);
  }
  return instance;
}

MarketInstance with_unit_quotas(MarketInstance instance) {
  for (SpectrumProvider& sp : instance.providers) sp.quota = 1;
  return instance;
}

void Matching::assign(int provider, int user) {
  auto& slot = user_to_provider_.at(user);
  if (slot.has_value()) throw std::logic_error("Matching::assign: user already matched");
  slot = provider;
  auto& held = provider_to_users_.at(provider);
  held.insert(std::lower_bound(held.begin(), held.end(), user), user);
}

void Matching::unassign(int user) {
  auto& slot = user_to_provider_.at(user);
  if (!slot.has_value()) throw std::logic_error("Matching::unassign: user not matched");
  auto& held = provider_to_users_.at(*slot);
  held.erase(std::find(held.begin(), held.end(), user));
  slot.reset();
}

std::vector<std::pair<int, int>> Matching::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int m = 0; m < provider_count(); ++m) {
    for (int n : provider_to_users_[m]) out.emplace_back(m, n);
  }
  return out;
}

std::size_t Matching::matched_count() const {
  std::size_t count = 0;
  for (const auto& slot : user_to_provider_) {
    if (slot.has_value()) ++count;
  }
  return count;
}

void check_matching(const MarketInstance& instance, const Matching& matching) {
  if (matching.provider_count() != instance.provider_count() ||
      matching.user_count() != instance.user_count()) {
    throw InconsistentMatching("matching shape does not fit the instance");
  }
  std::size_t assigned = 0;
  for (int m = 0; m < instance.provider_count(); ++m) {
    const auto& held = matching.users_of(m);
    if (static_cast<int>(held.size()) > instance.providers[m].quota) {
      throw InconsistentMatching("provider " + instance.providers[m].name + " holds " +
                                 std::to_string(held.size()) + " users, quota " +
                                 std::to_string(instance.providers[m].quota));
    }
    for (int n : held) {
      if (matching.provider_of(n) != m) {
        throw InconsistentMatching("user " + instance.users.at(n).name +
                                   " is not mapped back to " + instance.providers[m].name);
      }
      ++assigned;
    }
  }
  if (assigned != matching.matched_count()) {
    throw InconsistentMatching("matched user not held by any provider");
  }
}

}  // namespace specmatch
