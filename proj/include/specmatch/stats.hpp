#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "specmatch/market.hpp"

namespace specmatch {

/// Per-user tallies over allocation instants: rank_counts[n][i] counts
/// matches to the user's rank-(i+1) provider, unmatched_counts[n] the
/// instants the user got nothing. Kept as exact integers; fractions are
/// derived at report time.
struct AllocationStats {
  int provider_count = 0;
  int user_count = 0;
  std::uint64_t instants = 0;
  std::vector<std::vector<std::uint64_t>> rank_counts;
  std::vector<std::uint64_t> unmatched_counts;

  static AllocationStats zero(int provider_count, int user_count);

  /// Tallies one solved instant for every user.
  void record(const MarketInstance& instance, const Matching& matching);

  double fraction(int user, int rank) const;  // rank is 1-based
  double unmatched_fraction(int user) const;

  friend bool operator==(const AllocationStats&, const AllocationStats&) = default;
};

/// Componentwise sum; associative and commutative. Throws ShapeMismatch
/// unless both sides cover the same market shape.
AllocationStats merge(const AllocationStats& a, const AllocationStats& b);

/// Presentation form of one run: metadata plus the exact tallies.
/// seed is empty for the exhaustive engine.
struct StatsReport {
  std::string scenario;
  std::string mode;
  std::optional<std::uint64_t> seed;
  int merged_from = 1;
  std::vector<std::string> user_names;
  AllocationStats stats;

  friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

/// CSV rows `su_id,rank,count,fraction`, one per rank plus one unmatched
/// row per user; fractions carry 6 decimal digits.
std::string report_to_csv(const StatsReport& report);

nlohmann::json report_to_json(const StatsReport& report);
StatsReport report_from_json(const nlohmann::json& doc);

}  // namespace specmatch
