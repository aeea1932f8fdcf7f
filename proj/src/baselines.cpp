#include "coexist/baselines.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "coexist/channel.hpp"

namespace coexist {

namespace {

constexpr std::array<std::pair<Policy, std::string_view>, 7> kNames{{
    {Policy::Proposed, "proposed"},
    {Policy::Heuristic, "heuristic"},
    {Policy::PS, "ps"},
    {Policy::MUPS, "mups"},
    {Policy::RS, "rs"},
    {Policy::EDS, "eds"},
    {Policy::MBS, "mbs"},
}};

// Fills requests in order from a fixed RB ranking.
std::vector<std::vector<std::size_t>> fill_in_order(const std::vector<std::size_t>& ranking,
                                                    const Admission& adm) {
  std::vector<std::vector<std::size_t>> rbs(adm.served.size());
  std::size_t next = 0;
  for (std::size_t u = 0; u < adm.served.size(); ++u) {
    for (std::size_t i = 0; i < adm.demand[u]; ++i) rbs[u].push_back(ranking.at(next++));
  }
  return rbs;
}

std::vector<std::vector<std::size_t>> punctured_scheduling(const SlotContext& ctx,
                                                           const Admission& adm) {
  const std::size_t K = ctx.alpha.n_rb();
  std::vector<std::size_t> ranking(K);
  std::vector<double> rate(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    ranking[k] = k;
    if (const auto e = ctx.alpha.owner(k)) rate[k] = ctx.channel.rb_rate_embb(*e, k);
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&](std::size_t a, std::size_t b) { return rate[a] > rate[b]; });
  return fill_in_order(ranking, adm);
}

std::vector<std::vector<std::size_t>> cqi_puncturing(const SlotContext& ctx, const Admission& adm,
                                                     Rng& rng) {
  const std::size_t E = ctx.alpha.n_embb();
  std::vector<bool> used(ctx.alpha.n_rb(), false);
  std::vector<std::vector<std::size_t>> rbs(adm.served.size());
  std::vector<double> quality(E);
  std::vector<std::size_t> order(E);
  for (std::size_t u = 0; u < adm.served.size(); ++u) {
    for (double& q : quality) q = rayleigh_fade(rng);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return quality[a] > quality[b]; });
    std::size_t need = adm.demand[u];
    for (std::size_t e : order) {
      if (need == 0) break;
      auto got = take_rbs(ctx.alpha, used, e, need);
      need -= got.size();
      rbs[u].insert(rbs[u].end(), got.begin(), got.end());
    }
  }
  return rbs;
}

std::vector<std::vector<std::size_t>> random_puncturing(const SlotContext& ctx,
                                                        const Admission& adm, Rng& rng) {
  std::vector<std::size_t> pool(ctx.alpha.n_rb());
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> ranking;
  const std::size_t need = adm.total_demand();
  for (std::size_t i = 0; i < need; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    ranking.push_back(pool[i]);
  }
  return fill_in_order(ranking, adm);
}

std::vector<std::vector<std::size_t>> equal_puncturing(const SlotContext& ctx,
                                                       const Admission& adm,
                                                       std::size_t minislot) {
  const std::size_t E = ctx.alpha.n_embb();
  std::vector<bool> used(ctx.alpha.n_rb(), false);
  std::vector<std::size_t> ranking;
  const std::size_t need = adm.total_demand();
  std::size_t e = minislot % E;
  std::size_t idle_turns = 0;
  while (ranking.size() < need && idle_turns < E) {
    const auto got = take_rbs(ctx.alpha, used, e, 1);
    if (got.empty()) {
      ++idle_turns;
    } else {
      idle_turns = 0;
      ranking.push_back(got.front());
    }
    e = (e + 1) % E;
  }
  return fill_in_order(ranking, adm);
}

std::vector<std::vector<std::size_t>> matching_puncturing(const SlotContext& ctx,
                                                          const Admission& adm) {
  const std::size_t E = ctx.alpha.n_embb();
  const std::size_t U = adm.served.size();
  if (U == 0) return {};
  const Matrix<double> cost = build_cost_matrix(ctx.ledger, ctx.alpha, U);
  std::vector<std::vector<std::size_t>> prefs(U, std::vector<std::size_t>(E));
  for (std::size_t u = 0; u < U; ++u) {
    std::iota(prefs[u].begin(), prefs[u].end(), 0);
    std::stable_sort(prefs[u].begin(), prefs[u].end(),
                     [&](std::size_t a, std::size_t b) { return cost(u, a) < cost(u, b); });
  }
  std::vector<std::size_t> quota(E);
  for (std::size_t e = 0; e < E; ++e) quota[e] = ctx.alpha.holdings(e);
  const auto match = deferred_acceptance(prefs, adm.demand, quota);

  std::vector<bool> used(ctx.alpha.n_rb(), false);
  std::vector<std::vector<std::size_t>> rbs(U);
  for (std::size_t u = 0; u < U; ++u) {
    if (match[u]) rbs[u] = take_rbs(ctx.alpha, used, *match[u], adm.demand[u]);
  }
  // Requests left unmatched take whatever capacity remains, cheapest UE first.
  for (std::size_t u = 0; u < U; ++u) {
    if (match[u]) continue;
    std::size_t need = adm.demand[u];
    for (std::size_t e : prefs[u]) {
      if (need == 0) break;
      auto got = take_rbs(ctx.alpha, used, e, need);
      need -= got.size();
      rbs[u].insert(rbs[u].end(), got.begin(), got.end());
    }
  }
  return rbs;
}

}  // namespace

std::string_view policy_name(Policy p) {
  for (const auto& [policy, name] : kNames) {
    if (policy == p) return name;
  }
  return "unknown";
}

std::optional<Policy> parse_policy(std::string_view name) {
  for (const auto& [policy, n] : kNames) {
    if (n == name) return policy;
  }
  return std::nullopt;
}

const std::vector<Policy>& all_policies() {
  static const std::vector<Policy> all = [] {
    std::vector<Policy> v;
    for (const auto& [policy, name] : kNames) v.push_back(policy);
    return v;
  }();
  return all;
}

std::vector<std::optional<std::size_t>> deferred_acceptance(
    const std::vector<std::vector<std::size_t>>& preferences,
    const std::vector<std::size_t>& demand, const std::vector<std::size_t>& quota) {
  const std::size_t U = preferences.size();
  std::vector<std::optional<std::size_t>> match(U);
  std::vector<std::size_t> next(U, 0);
  std::vector<std::vector<std::size_t>> held(quota.size());
  std::deque<std::size_t> free;
  for (std::size_t u = 0; u < U; ++u) free.push_back(u);

  while (!free.empty()) {
    const std::size_t u = free.front();
    free.pop_front();
    if (next[u] >= preferences[u].size()) continue;
    const std::size_t e = preferences[u][next[u]++];
    auto& h = held[e];
    h.push_back(u);
    std::sort(h.begin(), h.end());  // eMBB side prefers earlier arrivals
    std::vector<std::size_t> keep;
    std::size_t load = 0;
    for (std::size_t r : h) {
      if (load + demand[r] <= quota[e]) {
        keep.push_back(r);
        load += demand[r];
        match[r] = e;
      } else {
        match[r].reset();
        free.push_back(r);
      }
    }
    h = std::move(keep);
  }
  return match;
}

MinislotDecision baseline_schedule(Policy policy, SlotContext& ctx, const UrllcBatch& batch,
                                   std::size_t minislot, Rng& rng) {
  const Admission adm = admit(batch, ctx.alpha.n_rb());
  std::vector<std::vector<std::size_t>> rbs;
  switch (policy) {
    case Policy::PS: rbs = punctured_scheduling(ctx, adm); break;
    case Policy::MUPS: rbs = cqi_puncturing(ctx, adm, rng); break;
    case Policy::RS: rbs = random_puncturing(ctx, adm, rng); break;
    case Policy::EDS: rbs = equal_puncturing(ctx, adm, minislot); break;
    case Policy::MBS: rbs = matching_puncturing(ctx, adm); break;
    case Policy::Proposed:
    case Policy::Heuristic:
      throw std::invalid_argument("baseline_schedule: not a comparison policy");
  }
  rbs.resize(adm.served.size());
  return commit_punctures(ctx, batch, adm, rbs, minislot % ctx.ledger.minislots_per_slot());
}

}  // namespace coexist
