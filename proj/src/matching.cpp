#include "specmatch/matching.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "specmatch/error.hpp"

namespace specmatch {

namespace {

// rank[m][n] = position of user n in P(m), or -1 if unacceptable to m.
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

Matching propose_and_hold(const MarketInstance& instance, bool use_quota, MatchTrace* trace) {
  validate_instance(instance);
  const int provider_count = instance.provider_count();
  const int user_count = instance.user_count();
  const auto rank = provider_rank_table(instance);

  std::vector<std::vector<int>> held(provider_count);  // best first, per provider
  std::vector<int> cursor(user_count, 0);  // rejections received so far, a prefix of P(n)
  std::vector<bool> is_held(user_count, false);
  std::size_t proposals = 0;

  for (;;) {
    std::vector<std::vector<int>> incoming(provider_count);
    MatchTrace::Round round;
    bool any_request = false;
    for (int n = 0; n < user_count; ++n) {
      const PreferenceList& prefs = instance.users[n].prefs;
      if (is_held[n] || cursor[n] >= static_cast<int>(prefs.size())) continue;
      const int m = prefs.at(cursor[n]).index;
      incoming[m].push_back(n);
      any_request = true;
      ++proposals;
      if (trace) round.requests.emplace_back(n, m);
    }
    if (!any_request) break;

    for (int m = 0; m < provider_count; ++m) {
      if (incoming[m].empty()) continue;
      const int quota = use_quota ? instance.providers[m].quota : 1;
      auto& hold = held[m];
      for (int n : incoming[m]) {
        if (rank[m][n] < 0) {  // not on P(m): rejected outright
          ++cursor[n];
          if (trace) round.rejections.emplace_back(m, n);
          continue;
        }
        auto pos = std::upper_bound(hold.begin(), hold.end(), n,
                                    [&](int a, int b) { return rank[m][a] < rank[m][b]; });
        hold.insert(pos, n);
        is_held[n] = true;
      }
      while (static_cast<int>(hold.size()) > quota) {
        const int displaced = hold.back();
        hold.pop_back();
        is_held[displaced] = false;
        ++cursor[displaced];
        if (trace) round.rejections.emplace_back(m, displaced);
      }
    }
    assert(proposals <= static_cast<std::size_t>(provider_count) * user_count);

    if (trace) {
      round.holds = held;
      trace->rounds.push_back(std::move(round));
    }
  }

  Matching result(provider_count, user_count);
  for (int m = 0; m < provider_count; ++m) {
    for (int n : held[m]) result.assign(m, n);
  }
  return result;
}

}  // namespace

Matching da_one_to_one(const MarketInstance& instance, MatchTrace* trace) {
  return propose_and_hold(instance, /*use_quota=*/false, trace);
}

Matching gale_shapley_many_to_one(const MarketInstance& instance, MatchTrace* trace) {
  return propose_and_hold(instance, /*use_quota=*/true, trace);
}

std::string format_trace(const MarketInstance& instance, const MatchTrace& trace,
                         const Matching& result) {
  std::ostringstream out;
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    const MatchTrace::Round& round = trace.rounds[r];
    out << "round " << (r + 1) << ":";
    for (std::size_t i = 0; i < round.requests.size(); ++i) {
      const auto& [n, m] = round.requests[i];
      out << (i == 0 ? " " : "; ") << instance.users[n].name << " requests "
          << instance.providers[m].name;
    }
    out << "\n";
    for (int m = 0; m < instance.provider_count(); ++m) {
      const bool requested = std::any_of(round.requests.begin(), round.requests.end(),
                                         [m](const auto& p) { return p.second == m; });
      std::vector<int> rejected;
      for (const auto& [sp, n] : round.rejections) {
        if (sp == m) rejected.push_back(n);
      }
      if (!requested && rejected.empty()) continue;
      out << "  " << instance.providers[m].name;
      const auto& holds = round.holds.at(m);
      if (!holds.empty()) {
        out << " holds";
        for (std::size_t i = 0; i < holds.size(); ++i) {
          out << (i == 0 ? " " : ", ") << instance.users[holds[i]].name;
        }
        if (!rejected.empty()) out << " and";
      }
      if (!rejected.empty()) {
        out << " rejects";
        for (std::size_t i = 0; i < rejected.size(); ++i) {
          out << (i == 0 ? " " : ", ") << instance.users[rejected[i]].name;
        }
      }
      out << "\n";
    }
  }

  bool first = true;
  for (int m = 0; m < instance.provider_count(); ++m) {
    out << (first ? "" : "; ") << instance.providers[m].name << " holds ";
    const auto& held = result.users_of(m);
    if (held.empty()) {
      out << "none";
    } else {
      for (std::size_t i = 0; i < held.size(); ++i) {
        out << (i == 0 ? "" : ", ") << instance.users[held[i]].name;
      }
    }
    first = false;
  }
  for (int n = 0; n < instance.user_count(); ++n) {
    if (!result.provider_of(n).has_value()) {
      out << (first ? "" : "; ") << instance.users[n].name << " exhausted list";
      first = false;
    }
  }
  out << "\n";
  return out.str();
}

}  // namespace specmatch
