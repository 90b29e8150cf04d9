#include "doctest.h"

#include <random>

#include "cstop/coalitions.hpp"

using namespace cstop;

namespace {

Coalition C(std::initializer_list<std::size_t> one_based) {
  std::vector<std::size_t> v;
  for (auto i : one_based) v.push_back(i - 1);
  return coalition_of(v);
}

}  // namespace

TEST_SUITE("coalitions") {
  TEST_CASE("normalization keeps minimal coalitions") {
    auto r = normalize_rule({C({1}), C({1, 2})}, 2);
    CHECK(r.minimal == std::vector<Coalition>{C({1})});
    CHECK_THROWS(normalize_rule({}, 2));
    CHECK_THROWS(normalize_rule({C({3})}, 2));
    CHECK_THROWS(normalize_rule({0}, 2));
  }

  TEST_CASE("quota and chair rules") {
    auto q = quota_rule(2, 3);
    CHECK(q.minimal == std::vector<Coalition>{C({1, 2}), C({1, 3}), C({2, 3})});
    auto ch = chair_rule(2, 0, 3);
    CHECK(ch.minimal == std::vector<Coalition>{C({1, 2}), C({1, 3})});
    CHECK(ch.describe() == "{1,2} {1,3}");
    CHECK(unanimity_rule(3).minimal == std::vector<Coalition>{C({1, 2, 3})});
    CHECK(unilateral_rule(2).minimal.size() == 2);
    CHECK(quota_rule(3, 5).minimal.size() == 10);
  }

  TEST_CASE("decisiveness") {
    CHECK(is_decisive(unanimity_rule(3), C({1, 2, 3})));
    CHECK_FALSE(is_decisive(unanimity_rule(3), C({1, 2})));
    auto q = quota_rule(2, 3);
    CHECK_FALSE(is_decisive(q, C({2})));
    CHECK(is_decisive(q, C({1, 3})));
    CHECK(rule_subset(unanimity_rule(3), q));
    CHECK(rule_subset(q, unilateral_rule(3)));
    CHECK_FALSE(rule_subset(q, unanimity_rule(3)));
  }

  TEST_CASE("decisiveness is monotone in the rule") {
    std::mt19937_64 rng(3);
    const std::size_t n = 5;
    std::uniform_int_distribution<Coalition> any(1, (1u << n) - 1);
    for (int t = 0; t < 200; ++t) {
      std::vector<Coalition> base{any(rng), any(rng)};
      auto small = normalize_rule(base, n);
      base.push_back(any(rng));
      auto big = normalize_rule(base, n);
      CHECK(rule_subset(small, big));
      for (Coalition s = 0; s < (1u << n); ++s)
        if (is_decisive(small, s)) CHECK(is_decisive(big, s));
    }
  }

  TEST_CASE("collective region") {
    auto g = build_grid(101, 1e-4, {0.2, 0.4, 0.6, 0.8});
    auto a = SamplingRegion::from_intervals(g, {{0.2, 0.6}});
    auto b = SamplingRegion::from_intervals(g, {{0.4, 0.8}});
    CHECK(collective_region(unilateral_rule(2), {a, b}) == SamplingRegion::from_intervals(g, {{0.4, 0.6}}));
    CHECK(collective_region(unanimity_rule(2), {a, b}) == SamplingRegion::from_intervals(g, {{0.2, 0.8}}));
    for (const auto& rule : {unilateral_rule(3), unanimity_rule(3), quota_rule(2, 3), chair_rule(2, 1, 3)})
      CHECK(collective_region(rule, {a, a, a}) == a);
  }

  TEST_CASE("envelopes") {
    auto g = build_grid(101, 1e-4, {0.3, 0.4, 0.6, 0.7});
    auto empty = SamplingRegion::empty(g), full = SamplingRegion::full(g);
    auto o2 = SamplingRegion::from_intervals(g, {{0.3, 0.7}});
    auto o3 = SamplingRegion::from_intervals(g, {{0.4, 0.6}});
    auto uni = player_envelopes(unilateral_rule(2), 0, {empty, o2});
    CHECK(uni.C == o2);
    CHECK(uni.S.is_empty());
    auto una = player_envelopes(unanimity_rule(2), 0, {empty, o2});
    CHECK(una.C == full);
    CHECK(una.S == o2);
    auto q = player_envelopes(quota_rule(2, 3), 0, {empty, o2, o3});
    CHECK(q.C == o2);
    CHECK(q.S == o3);
  }

  TEST_CASE("S lies inside C for random rules and profiles") {
    std::mt19937_64 rng(17);
    auto g = build_grid(40, 1e-3);
    std::uniform_int_distribution<std::size_t> idx(0, g->size() - 1);
    const std::size_t n = 4;
    std::uniform_int_distribution<Coalition> any(1, (1u << n) - 1);
    for (int t = 0; t < 300; ++t) {
      auto rule = normalize_rule({any(rng), any(rng), any(rng)}, n);
      std::vector<SamplingRegion> prof;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = idx(rng), b = idx(rng);
        prof.push_back(SamplingRegion::interval(g, std::min(a, b), std::max(a, b)));
      }
      for (std::size_t i = 0; i < n; ++i) {
        auto env = player_envelopes(rule, i, prof);
        CHECK(env.S.subset_of(env.C));
        // player i's own region can move the outcome only within [S, C]
        auto with_none = prof, with_full = prof;
        with_none[i] = SamplingRegion::empty(g);
        with_full[i] = SamplingRegion::full(g);
        CHECK(collective_region(rule, with_none) == env.S);
        CHECK(collective_region(rule, with_full) == env.C);
      }
      // enlarging one region never shrinks the collective region
      auto bigger = prof;
      bigger[0] = bigger[0].unite(SamplingRegion::interval(g, idx(rng) / 2, g->size() - 1));
      CHECK(collective_region(rule, prof).subset_of(collective_region(rule, bigger)));
    }
  }

  TEST_CASE("player classes") {
    auto u = classify_players(unilateral_rule(2));
    CHECK(u.uni == std::vector<std::size_t>{0, 1});
    CHECK(u.una.empty());
    auto a = classify_players(unanimity_rule(2));
    CHECK(a.uni.empty());
    CHECK(a.una == std::vector<std::size_t>{0, 1});
    auto q = classify_players(quota_rule(2, 3));
    CHECK(q.uni.empty());
    CHECK(q.una.empty());
    auto ch = classify_players(chair_rule(2, 0, 3));
    CHECK(ch.una == std::vector<std::size_t>{0});
    auto single = classify_players(unilateral_rule(1));
    CHECK(single.uni == std::vector<std::size_t>{0});
    CHECK(single.una == std::vector<std::size_t>{0});
  }
}
