#include <numeric>

#include "doctest.h"
#include "specmatch/matching.hpp"
#include "specmatch/simulation.hpp"
#include "specmatch/stability.hpp"
#include "test_support.hpp"

using namespace specmatch;

namespace {

constexpr int kUnmatchedSentinel = 1000;  // above any list length

int rank_or_sentinel(AgentId su, const Matching& matching, const MarketInstance& instance) {
  return rank_of_match(su, matching, instance).value_or(kUnmatchedSentinel);
}

}  // namespace

TEST_CASE("both matchers are stable, bounded, scheduling-invariant and reduce correctly") {
  int partial_seen = 0;
  for (int i = 0; i < 4000; ++i) {
    RandomStream rng(777, i);
    const bool complete = i % 2 == 0;
    const auto instance = spectest::random_instance(rng, 6, 6, 3, complete);
    if (!complete) ++partial_seen;
    CAPTURE(i);

    // One-to-one: solves the unit-quota market regardless of quotas.
    const auto unit = with_unit_quotas(instance);
    MatchTrace da_trace;
    const auto da = da_one_to_one(instance, &da_trace);
    check_matching(unit, da);
    CHECK(is_stable(unit, da));
    CHECK(da_trace.proposal_count() <=
          static_cast<std::size_t>(instance.provider_count()) * instance.user_count());
    CHECK(da == spectest::sequential_propose(unit, true));

    // Many-to-one with the instance quotas.
    MatchTrace gs_trace;
    const auto gs = gale_shapley_many_to_one(instance, &gs_trace);
    check_matching(instance, gs);
    CHECK(is_stable(instance, gs));
    CHECK(gs_trace.proposal_count() <=
          static_cast<std::size_t>(instance.provider_count()) * instance.user_count());
    CHECK(gs == spectest::sequential_propose(instance, true));

    // All-quota-one reduction is pair-for-pair identical.
    CHECK(gale_shapley_many_to_one(unit) == da);
  }
  CHECK(partial_seen > 0);
}

TEST_CASE("one-to-one output is su-optimal within the enumerated stable set") {
  for (int i = 0; i < 1500; ++i) {
    RandomStream rng(4242, i);
    const auto instance =
        with_unit_quotas(spectest::random_instance(rng, 4, 4, 1, i % 2 == 0));
    CAPTURE(i);

    const auto stable = enumerate_stable_matchings(instance);
    REQUIRE_FALSE(stable.empty());

    const auto da = da_one_to_one(instance);
    CHECK(std::find(stable.begin(), stable.end(), da) != stable.end());
    for (const auto& other : stable) {
      for (int n = 0; n < instance.user_count(); ++n) {
        CHECK(rank_or_sentinel(user_id(n), da, instance) <=
              rank_or_sentinel(user_id(n), other, instance));
      }
    }
  }
}

TEST_CASE("many-to-one output appears in the enumerated stable set") {
  for (int i = 0; i < 1000; ++i) {
    RandomStream rng(31337, i);
    const auto instance = spectest::random_instance(rng, 4, 4, 2, i % 2 == 0);
    CAPTURE(i);
    const auto stable = enumerate_stable_matchings(instance);
    const auto gs = gale_shapley_many_to_one(instance);
    CHECK(std::find(stable.begin(), stable.end(), gs) != stable.end());
  }
}

TEST_CASE("complete lists with enough slices leave nobody unmatched") {
  for (int i = 0; i < 1500; ++i) {
    RandomStream rng(2718, i);
    auto instance = spectest::random_instance(rng, 4, 5, 3, true);
    const int total_quota = std::accumulate(
        instance.providers.begin(), instance.providers.end(), 0,
        [](int acc, const SpectrumProvider& sp) { return acc + sp.quota; });
    if (total_quota < instance.user_count()) {
      instance.providers[0].quota += instance.user_count() - total_quota;
    }
    CAPTURE(i);
    const auto gs = gale_shapley_many_to_one(instance);
    CHECK(gs.matched_count() == static_cast<std::size_t>(instance.user_count()));
  }
}

TEST_CASE("statistics stay normalized and merge-shardable on random templates") {
  for (int i = 0; i < 500; ++i) {
    RandomStream rng(1618, i);
    const auto instance = spectest::random_instance(rng, 4, 4, 2, true);
    ScenarioTemplate scenario;
    scenario.label = "generated-" + std::to_string(i);
    scenario.providers = instance.providers;
    for (int n = 0; n < instance.user_count(); ++n) {
      const bool fixed = rng.below(2) == 0;
      scenario.users.push_back(ScenarioUser{
          user_id(n), instance.users[n].name,
          fixed ? UserPolicy{PolicyKind::Fixed, instance.users[n].prefs}
                : UserPolicy{PolicyKind::UniformRandom, {}}});
    }
    const auto mode = instance.providers.size() > 1 && rng.below(2) == 0
                          ? ExperimentMode::ManyToOneGS
                          : ExperimentMode::OneToOneDA;
    CAPTURE(i);

    const std::uint64_t instants = 1 + rng.below(40);
    const auto stats = run_monte_carlo(scenario, mode, instants, i);
    for (int n = 0; n < stats.user_count; ++n) {
      const auto total = std::accumulate(stats.rank_counts[n].begin(),
                                         stats.rank_counts[n].end(), std::uint64_t{0});
      CHECK(total + stats.unmatched_counts[n] == instants);
    }

    const std::uint64_t split = rng.below(instants + 1);
    const auto head = run_monte_carlo_range(scenario, mode, 0, split, i);
    const auto tail = run_monte_carlo_range(scenario, mode, split, instants - split, i);
    CHECK(merge(head, tail) == stats);
  }
}
