#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "specmatch/market.hpp"

namespace specmatch {

/// Per-round log of a proposal run: who requested whom, who was rejected,
/// and the hold sets after the round.
struct MatchTrace {
  struct Round {
    std::vector<std::pair<int, int>> requests;    // (user, provider)
    std::vector<std::pair<int, int>> rejections;  // (provider, user)
    std::vector<std::vector<int>> holds;          // holds[provider], best first
  };

  std::vector<Round> rounds;

  std::size_t proposal_count() const {
    std::size_t total = 0;
    for (const Round& r : rounds) total += r.requests.size();
    return total;
  }
};

/// User-proposing deferred acceptance with every quota treated as 1.
/// Proposals run round-based: all free users request simultaneously, each
/// provider holds its most-preferred acceptable offer and rejects the rest.
/// Returns the user-optimal stable matching of the unit-quota market.
Matching da_one_to_one(const MarketInstance& instance, MatchTrace* trace = nullptr);

/// Quota-based variant: provider m holds up to quota q_m users, ordered by
/// its own preference, and rejects its least-preferred held user on
/// overflow. With all quotas 1 the result equals da_one_to_one exactly.
Matching gale_shapley_many_to_one(const MarketInstance& instance, MatchTrace* trace = nullptr);

/// Renders a trace as text, one block per round, ending with a summary
/// line of final holds and exhausted users.
std::string format_trace(const MarketInstance& instance, const MatchTrace& trace,
                         const Matching& result);

}  // namespace specmatch
