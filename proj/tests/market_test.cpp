#include "specmatch/market.hpp"

#include "doctest.h"
#include "specmatch/error.hpp"
#include "test_support.hpp"

using namespace specmatch;
using spectest::sp;
using spectest::su;

TEST_CASE("preference list helpers") {
  const PreferenceList prefs = spectest::over_providers({2, 0, 1});
  CHECK(prefs.size() == 3);
  CHECK(prefs.at(0) == provider_id(2));
  CHECK(prefs.position_of(provider_id(0)) == 1);
  CHECK(prefs.contains(provider_id(1)));
  CHECK_FALSE(prefs.contains(provider_id(3)));
  CHECK_FALSE(prefs.position_of(user_id(0)).has_value());
}

TEST_CASE("table2 instance is valid") {
  const auto instance = spectest::table2_instance({{0, 1, 2}, {1, 0, 2}, {1, 2, 0}});
  CHECK_NOTHROW(validate_instance(instance));
}

TEST_CASE("duplicate preference entry is rejected") {
  MarketInstance instance;
  instance.providers = {sp(0, "A", 1, {0, 0, 1})};
  instance.users = {su(0, "SU1", {0}), su(1, "SU2", {0})};
  CHECK_THROWS_AS(validate_instance(instance), DuplicateInPreference);
}

TEST_CASE("dangling preference reference is rejected") {
  MarketInstance instance;
  instance.providers = {sp(0, "A", 1, {0})};
  instance.users = {su(0, "SU1", {0, 3})};  // no provider with index 3
  CHECK_THROWS_AS(validate_instance(instance), UnknownAgentId);
}

TEST_CASE("wrong-side preference entry is rejected") {
  MarketInstance instance;
  instance.providers = {sp(0, "A", 1, {0})};
  instance.users = {su(0, "SU1", {0})};
  instance.users[0].prefs = spectest::over_users({0});  // users cannot rank users
  CHECK_THROWS_AS(validate_instance(instance), UnknownAgentId);
}

TEST_CASE("non-positive quota is rejected") {
  MarketInstance instance;
  instance.providers = {sp(0, "A", 0, {0})};
  instance.users = {su(0, "SU1", {0})};
  CHECK_THROWS_AS(validate_instance(instance), ZeroQuota);
}

TEST_CASE("empty sides are rejected") {
  MarketInstance no_users;
  no_users.providers = {sp(0, "A", 1, {})};
  CHECK_THROWS_AS(validate_instance(no_users), EmptySide);

  MarketInstance no_providers;
  no_providers.users = {su(0, "SU1", {})};
  CHECK_THROWS_AS(validate_instance(no_providers), EmptySide);
}

TEST_CASE("misplaced agent id is rejected") {
  MarketInstance instance;
  instance.providers = {sp(1, "A", 1, {0})};  // id does not match slot 0
  instance.users = {su(0, "SU1", {})};
  CHECK_THROWS_AS(validate_instance(instance), UnknownAgentId);
}

TEST_CASE("matching keeps both maps consistent") {
  Matching matching(2, 3);
  matching.assign(0, 2);
  matching.assign(0, 1);
  matching.assign(1, 0);
  CHECK(matching.provider_of(1) == 0);
  CHECK(matching.users_of(0) == std::vector<int>{1, 2});
  CHECK(matching.matched_count() == 3);
  matching.unassign(1);
  CHECK_FALSE(matching.provider_of(1).has_value());
  CHECK(matching.users_of(0) == std::vector<int>{2});
  CHECK(matching.pairs() == std::vector<std::pair<int, int>>{{0, 2}, {1, 0}});
}

TEST_CASE("check_matching flags quota and shape violations") {
  const auto instance = spectest::table2_instance({{0, 1, 2}, {1, 0, 2}, {1, 2, 0}});

  Matching overfull(3, 3);
  overfull.assign(0, 0);
  overfull.assign(0, 1);  // quota of A is 1
  CHECK_THROWS_AS(check_matching(instance, overfull), InconsistentMatching);

  const Matching wrong_shape(2, 3);
  CHECK_THROWS_AS(check_matching(instance, wrong_shape), InconsistentMatching);

  Matching fine(3, 3);
  fine.assign(0, 0);
  fine.assign(2, 1);
  CHECK_NOTHROW(check_matching(instance, fine));
}

TEST_CASE("with_unit_quotas forces every quota to one") {
  auto instance = spectest::table2_instance({{0, 1, 2}, {1, 0, 2}, {1, 2, 0}});
  instance.providers[1].quota = 3;
  const auto unit = with_unit_quotas(instance);
  for (const auto& provider : unit.providers) CHECK(provider.quota == 1);
  CHECK(unit.users == instance.users);
}
