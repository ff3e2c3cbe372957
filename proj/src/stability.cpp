#include "specmatch/stability.hpp"

#include <cstdint>
#include <limits>
#include <string>

#include "specmatch/error.hpp"

namespace specmatch {

namespace {

std::vector<std::vector<int>> provider_rank_table(const MarketInstance& instance) {
  std::vector<std::vector<int>> rank(
      instance.providers.size(), std::vector<int>(instance.users.size(), -1));
  for (int m = 0; m < instance.provider_count(); ++m) {
    const auto& ranked = instance.providers[m].prefs.ranked();
    for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
      rank[m][ranked[pos].index] = static_cast<int>(pos);
    }
  }
  return rank;
}

}  // namespace

std::vector<std::pair<AgentId, AgentId>> find_blocking_pairs(const MarketInstance& instance,
                                                             const Matching& matching) {
  validate_instance(instance);
  check_matching(instance, matching);
  const auto rank = provider_rank_table(instance);

  std::vector<std::pair<AgentId, AgentId>> blocking;
  for (int n = 0; n < instance.user_count(); ++n) {
    const PreferenceList& prefs = instance.users[n].prefs;
    std::size_t current_pos = std::numeric_limits<std::size_t>::max();
    if (auto current = matching.provider_of(n)) {
      if (auto pos = prefs.position_of(provider_id(*current))) current_pos = *pos;
    }
    // Candidates n strictly prefers to its current situation are exactly
    // the prefix of P(n) before current_pos.
    for (std::size_t pos = 0; pos < prefs.size() && pos < current_pos; ++pos) {
      const int m = prefs.at(pos).index;
      if (rank[m][n] < 0) continue;  // n unacceptable to m
      const auto& held = matching.users_of(m);
      bool blocks = static_cast<int>(held.size()) < instance.providers[m].quota;
      for (std::size_t i = 0; !blocks && i < held.size(); ++i) {
        const int other_rank = rank[m][held[i]];
        blocks = other_rank < 0 || rank[m][n] < other_rank;
      }
      if (blocks) blocking.emplace_back(user_id(n), provider_id(m));
    }
  }
  return blocking;
}

bool is_stable(const MarketInstance& instance, const Matching& matching) {
  return find_blocking_pairs(instance, matching).empty();
}

std::vector<Matching> enumerate_stable_matchings(const MarketInstance& instance) {
  validate_instance(instance);
  const int provider_count = instance.provider_count();
  const int user_count = instance.user_count();
  const auto rank = provider_rank_table(instance);

  // Mutually acceptable providers per user; candidates pair users only with
  // providers both sides rank.
  std::vector<std::vector<int>> acceptable(user_count);
  for (int n = 0; n < user_count; ++n) {
    for (AgentId id : instance.users[n].prefs.ranked()) {
      if (rank[id.index][n] >= 0) acceptable[n].push_back(id.index);
    }
  }

  constexpr std::uint64_t kCandidateLimit = 10'000'000;
  std::uint64_t candidates = 1;
  for (int n = 0; n < user_count; ++n) {
    candidates *= static_cast<std::uint64_t>(acceptable[n].size()) + 1;
    if (candidates > kCandidateLimit) {
      throw InstanceTooLarge("candidate matchings exceed " + std::to_string(kCandidateLimit));
    }
  }

  std::vector<Matching> stable;
  Matching current(provider_count, user_count);
  std::vector<int> load(provider_count, 0);

  auto recurse = [&](auto&& self, int n) -> void {
    if (n == user_count) {
      if (is_stable(instance, current)) stable.push_back(current);
      return;
    }
    self(self, n + 1);  // n stays unmatched
    for (int m : acceptable[n]) {
      if (load[m] >= instance.providers[m].quota) continue;
      current.assign(m, n);
      ++load[m];
      self(self, n + 1);
      --load[m];
      current.unassign(n);
    }
  };
  recurse(recurse, 0);
  return stable;
}

std::optional<int> rank_of_match(AgentId su, const Matching& matching,
                                 const MarketInstance& instance) {
  if (su.side != Side::User || su.index < 0 || su.index >= instance.user_count()) {
    throw UnknownAgentId("rank_of_match: no such user in instance");
  }
  const auto provider = matching.provider_of(su.index);
  if (!provider.has_value()) return std::nullopt;
  const auto pos = instance.users[su.index].prefs.position_of(provider_id(*provider));
  if (!pos.has_value()) {
    throw MatchNotInPreferenceList("user " + instance.users[su.index].name +
                                   " is matched outside its preference list");
  }
  return static_cast<int>(*pos) + 1;
}

}  // namespace specmatch
