#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specmatch {

enum class Side { Provider, User };

/// Identifies one agent of a market: a side plus a dense index within it.
struct AgentId {
  Side side{Side::Provider};
  int index{0};

  friend constexpr auto operator<=>(const AgentId&, const AgentId&) = default;
};

constexpr AgentId provider_id(int index) { return AgentId{Side::Provider, index}; }
constexpr AgentId user_id(int index) { return AgentId{Side::User, index}; }

/// Strict (duplicate-free) ranking of counterpart agents, most preferred
/// first. May be partial: agents absent from the list are unacceptable.
class PreferenceList {
 public:
  PreferenceList() = default;
  explicit PreferenceList(std::vector<AgentId> ranked) : ranked_(std::move(ranked)) {}

  const std::vector<AgentId>& ranked() const { return ranked_; }
  std::size_t size() const { return ranked_.size(); }
  bool empty() const { return ranked_.empty(); }
  AgentId at(std::size_t pos) const { return ranked_.at(pos); }

  bool contains(AgentId id) const { return position_of(id).has_value(); }

  /// 0-based position of `id`, or nullopt if unranked.
  std::optional<std::size_t> position_of(AgentId id) const {
    for (std::size_t i = 0; i < ranked_.size(); ++i) {
      if (ranked_[i] == id) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const PreferenceList&, const PreferenceList&) = default;

 private:
  std::vector<AgentId> ranked_;
};

/// Operator offering surplus spectrum; `quota` is the number of slices it
/// can lease per allocation instant.
struct SpectrumProvider {
  AgentId id;
  std::string name;
  int quota = 1;
  PreferenceList prefs;  // over users

  friend bool operator==(const SpectrumProvider&, const SpectrumProvider&) = default;
};

/// Operator requesting a single spectrum slice per allocation instant.
struct SpectrumUser {
  AgentId id;
  std::string name;
  PreferenceList prefs;  // over providers

  friend bool operator==(const SpectrumUser&, const SpectrumUser&) = default;
};

/// Full input to one allocation instant.
struct MarketInstance {
  std::vector<SpectrumProvider> providers;
  std::vector<SpectrumUser> users;

  int provider_count() const { return static_cast<int>(providers.size()); }
  int user_count() const { return static_cast<int>(users.size()); }

  friend bool operator==(const MarketInstance&, const MarketInstance&) = default;
};

/// Checks every type invariant and returns the instance unchanged.
/// Throws EmptySide, ZeroQuota, UnknownAgentId or DuplicateInPreference.
const MarketInstance& validate_instance(const MarketInstance& instance);

/// Copy of `instance` with every quota forced to 1 (the market the
/// one-to-one algorithm actually solves).
MarketInstance with_unit_quotas(MarketInstance instance);

/// Bidirectional user/provider assignment. Mutual consistency is maintained
/// by construction; quota bounds are checked against an instance separately
/// (see check_matching).
class Matching {
 public:
  Matching() = default;
  Matching(int provider_count, int user_count)
      : user_to_provider_(static_cast<std::size_t>(user_count)),
        provider_to_users_(static_cast<std::size_t>(provider_count)) {}

  int provider_count() const { return static_cast<int>(provider_to_users_.size()); }
  int user_count() const { return static_cast<int>(user_to_provider_.size()); }

  void assign(int provider, int user);
  void unassign(int user);

  std::optional<int> provider_of(int user) const { return user_to_provider_.at(user); }

  /// Users held by `provider`, ascending by user index.
  const std::vector<int>& users_of(int provider) const { return provider_to_users_.at(provider); }

  /// All (provider, user) pairs, sorted.
  std::vector<std::pair<int, int>> pairs() const;

  std::size_t matched_count() const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<std::optional<int>> user_to_provider_;
  std::vector<std::vector<int>> provider_to_users_;
};

/// Verifies that `matching` satisfies the Matching type invariants against
/// `instance` (shape, cross-map consistency, quota). Throws
/// InconsistentMatching.
void check_matching(const MarketInstance& instance, const Matching& matching);

}  // namespace specmatch
