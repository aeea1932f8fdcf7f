#include <doctest.h>

#include <algorithm>

#include "coexist/baselines.hpp"
#include "fixtures.hpp"

using namespace coexist;

TEST_CASE("policy names") {
  for (Policy p : all_policies()) CHECK(parse_policy(policy_name(p)) == p);
  CHECK(all_policies().size() == 7);
  CHECK_FALSE(parse_policy("PS"));
  CHECK_FALSE(parse_policy("optimal"));
}

TEST_CASE("PS punctures the highest-rate UE first") {
  SlotFixture f({2, 2}, {360.0, 180.0});
  auto ctx = f.context();
  Rng rng(1);
  const MinislotDecision d = baseline_schedule(Policy::PS, ctx, batch_of(1, 50.0, 100.0), 0, rng);
  CHECK(d.punctured_per_embb == std::vector<std::size_t>{1, 0});
}

TEST_CASE("EDS spreads punctures evenly") {
  SlotFixture f({4, 4}, {100.0, 100.0});
  auto ctx = f.context();
  Rng rng(1);
  const MinislotDecision d =
      baseline_schedule(Policy::EDS, ctx, batch_of(1, 400.0, 100.0), 0, rng);
  CHECK(d.punctured_per_embb == std::vector<std::size_t>{2, 2});

  SlotFixture g({3, 5, 4}, {100.0, 100.0, 100.0});
  auto gctx = g.context();
  for (std::size_t m = 0; m < 8; ++m) {
    const MinislotDecision r =
        baseline_schedule(Policy::EDS, gctx, batch_of(1, 500.0, 100.0), m, rng);
    const auto [lo, hi] =
        std::minmax_element(r.punctured_per_embb.begin(), r.punctured_per_embb.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("RS replays with the same seed") {
  SlotFixture f({5, 5, 5}, {100.0, 100.0, 100.0});
  auto ctx = f.context();
  Rng a(77), b(77);
  const auto da = baseline_schedule(Policy::RS, ctx, batch_of(3, 150.0, 100.0), 0, a);
  const auto db = baseline_schedule(Policy::RS, ctx, batch_of(3, 150.0, 100.0), 0, b);
  CHECK(da.record.beta == db.record.beta);
  CHECK(da.record.punctured_rbs() == 6);
}

TEST_CASE("MUPS keeps each request on its best UE while capacity lasts") {
  SlotFixture f({6, 6}, {100.0, 100.0});
  auto ctx = f.context();
  Rng rng(3);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto d = baseline_schedule(Policy::MUPS, ctx, batch_of(1, 250.0, 100.0), i, rng);
    CHECK(std::count(d.punctured_per_embb.begin(), d.punctured_per_embb.end(), 0u) == 1);
    CHECK_FALSE(puncture_violation(d.record, 12));
  }
}

TEST_CASE("deferred acceptance") {
  // Quotas cover every demand and preferences are strict: first choices stand.
  const std::vector<std::vector<std::size_t>> prefs{{1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  auto m = deferred_acceptance(prefs, {1, 2, 1}, {3, 3, 3});
  CHECK(m[0] == 1u);
  CHECK(m[1] == 0u);
  CHECK(m[2] == 2u);

  // Contested UE keeps the earlier request; the later one moves on.
  m = deferred_acceptance({{0, 1}, {0, 1}}, {2, 2}, {2, 2});
  CHECK(m[0] == 0u);
  CHECK(m[1] == 1u);

  // Random instances: quotas always hold; with unit demands the matching is
  // stable (no request and UE that prefer each other over their matches).
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dem(1, 3), quo(0, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const bool unit = trial % 2 == 0;
    const std::size_t U = 6, E = 3;
    std::vector<std::vector<std::size_t>> p(U, {0, 1, 2});
    for (auto& row : p) std::shuffle(row.begin(), row.end(), rng);
    std::vector<std::size_t> d(U), q(E);
    for (auto& v : d) v = unit ? 1 : dem(rng);
    for (auto& v : q) v = quo(rng);
    const auto match = deferred_acceptance(p, d, q);
    std::vector<std::size_t> load(E, 0);
    for (std::size_t u = 0; u < U; ++u) {
      if (match[u]) load[*match[u]] += d[u];
    }
    for (std::size_t e = 0; e < E; ++e) CHECK(load[e] <= q[e]);
    if (!unit) continue;
    for (std::size_t u = 0; u < U; ++u) {
      const auto rank = [&](std::size_t e) {
        return std::find(p[u].begin(), p[u].end(), e) - p[u].begin();
      };
      for (std::size_t e = 0; e < E; ++e) {
        if (match[u] && rank(e) >= rank(*match[u])) continue;
        // e is full with requests that arrived before u.
        std::size_t earlier = 0;
        for (std::size_t v = 0; v < u; ++v) earlier += match[v] == e ? 1 : 0;
        CHECK(load[e] == q[e]);
        CHECK(earlier == q[e]);
      }
    }
  }
}

TEST_CASE("MBS matches requests to the cheapest UEs") {
  SlotFixture f({3, 3}, {100.0, 100.0});
  f.ledger.add_loss({0.0, 25.0});
  auto ctx = f.context();
  Rng rng(1);
  const auto d = baseline_schedule(Policy::MBS, ctx, batch_of(2, 50.0, 100.0), 0, rng);
  CHECK(d.punctured_per_embb == std::vector<std::size_t>{2, 0});
}

TEST_CASE("every baseline yields a valid record") {
  std::mt19937_64 g(8);
  std::uniform_int_distribution<int> n(0, 12);
  for (Policy p : {Policy::PS, Policy::MUPS, Policy::RS, Policy::EDS, Policy::MBS}) {
    SlotFixture f({4, 6, 5, 5}, {120.0, 300.0, 80.0, 200.0});
    auto ctx = f.context();
    Rng rng(4);
    for (std::size_t m = 0; m < 8; ++m) {
      const auto d = baseline_schedule(p, ctx, batch_of(n(g), 180.0, 100.0), m, rng);
      CHECK_FALSE(puncture_violation(d.record, 20));
      for (std::size_t e = 0; e < 4; ++e) CHECK(d.punctured_per_embb[e] <= f.alpha.holdings(e));
    }
  }
  SlotFixture f({2, 2}, {1.0, 1.0});
  auto ctx = f.context();
  Rng rng(1);
  CHECK_THROWS_AS(baseline_schedule(Policy::Proposed, ctx, UrllcBatch{}, 0, rng),
                  std::invalid_argument);
}
