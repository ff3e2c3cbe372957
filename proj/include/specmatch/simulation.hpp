#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "specmatch/scenario.hpp"
#include "specmatch/stats.hpp"

namespace specmatch {

enum class ExperimentMode { OneToOneDA, ManyToOneGS, Uncoordinated };

std::string to_string(ExperimentMode mode);
ExperimentMode mode_from_string(const std::string& text);

/// Solves one instant with the selected mode. `stream` is consumed only by
/// the uncoordinated baseline.
Matching solve_instance(const MarketInstance& instance, ExperimentMode mode,
                        RandomStream& stream);

/// Tallies instants [first, first + count). Each instant draws its own
/// substream from (master_seed, t), so any sharding of {0..T-1} across
/// workers merges to the identical result.
AllocationStats run_monte_carlo_range(const ScenarioTemplate& scenario, ExperimentMode mode,
                                      std::uint64_t first_instant, std::uint64_t count,
                                      std::uint64_t master_seed);

AllocationStats run_monte_carlo(const ScenarioTemplate& scenario, ExperimentMode mode,
                                std::uint64_t instants, std::uint64_t master_seed);

/// Exact statistics: enumerates every preference profile of the randomized
/// users with equal weight instead of sampling. Requires
/// (M!)^(#random users) <= 10^7 and a deterministic matcher; throws
/// ProfileSpaceTooLarge or UnsupportedMode (uncoordinated baseline).
AllocationStats run_exhaustive(const ScenarioTemplate& scenario, ExperimentMode mode);

StatsReport make_report(const ScenarioTemplate& scenario, ExperimentMode mode,
                        const AllocationStats& stats, std::optional<std::uint64_t> seed,
                        int merged_from = 1);

}  // namespace specmatch
