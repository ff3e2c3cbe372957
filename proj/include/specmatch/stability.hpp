#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "specmatch/market.hpp"

namespace specmatch {

/// Every pair (user n, provider m), n not held by m, such that n strictly
/// prefers m to its current situation and m has residual quota or prefers n
/// to one of its held users. Empty result means the matching is stable.
/// Throws InconsistentMatching if the matching does not fit the instance.
std::vector<std::pair<AgentId, AgentId>> find_blocking_pairs(const MarketInstance& instance,
                                                             const Matching& matching);

bool is_stable(const MarketInstance& instance, const Matching& matching);

/// Brute-force oracle: every individually-rational, quota-respecting
/// matching that has no blocking pair. Guarded by the size of the raw
/// assignment space (at most 10^7 candidates); throws InstanceTooLarge.
std::vector<Matching> enumerate_stable_matchings(const MarketInstance& instance);

/// 1-based position of the matched provider in P(n); nullopt when the user
/// is unmatched. Throws MatchNotInPreferenceList if the matched provider is
/// absent from P(n), and UnknownAgentId if `su` is not a user of the
/// instance.
std::optional<int> rank_of_match(AgentId su, const Matching& matching,
                                 const MarketInstance& instance);

}  // namespace specmatch
