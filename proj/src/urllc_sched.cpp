#include "coexist/urllc_sched.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "coexist/accounting.hpp"
#include "coexist/transport.hpp"

namespace coexist {

std::size_t Admission::total_demand() const {
  return std::accumulate(demand.begin(), demand.end(), std::size_t{0});
}

Admission admit(const UrllcBatch& batch, std::size_t n_rb) {
  Admission adm;
  std::size_t used = 0;
  std::vector<double> rates(n_rb);
  for (std::size_t i = 0; i < batch.requests.size(); ++i) {
    const UrllcRequest& r = batch.requests[i];
    std::fill(rates.begin(), rates.end(), r.rb_rate);
    std::size_t d = 0;
    try {
      d = required_rbs(r.payload_bits, rates);
    } catch (const LatencyInfeasible&) {
      ++adm.dropped;
      continue;
    }
    if (used + d > n_rb) {
      adm.dropped += batch.requests.size() - i;
      break;
    }
    used += d;
    adm.served.push_back(i);
    adm.demand.push_back(d);
  }
  return adm;
}

std::vector<std::int64_t> supply_vector(const EmbbAllocation& alpha) {
  std::vector<std::int64_t> s(alpha.n_embb());
  for (std::size_t e = 0; e < s.size(); ++e) s[e] = static_cast<std::int64_t>(alpha.holdings(e));
  return s;
}

Matrix<double> build_cost_matrix(const RateLedger& ledger, const EmbbAllocation& alpha,
                                 std::size_t served) {
  const std::size_t E = ledger.n_embb();
  if (alpha.n_embb() != E) throw std::invalid_argument("build_cost_matrix: UE count mismatch");
  const auto& loss = ledger.slot_loss();
  const double sum = std::accumulate(loss.begin(), loss.end(), 0.0);
  Matrix<double> c(served, E);
  for (std::size_t e = 0; e < E; ++e) {
    const double unit = ledger.cell_loss(e);
    const double mean = (sum + unit) / static_cast<double>(E);
    const double v = std::abs(mean - (loss[e] + unit));
    for (std::size_t u = 0; u < served; ++u) c(u, e) = v;
  }
  return c;
}

std::vector<std::size_t> take_rbs(const EmbbAllocation& alpha, std::vector<bool>& used,
                                  std::size_t e, std::size_t count) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < alpha.n_rb() && out.size() < count; ++k) {
    if (alpha.alpha(e, k) && !used[k]) {
      used[k] = true;
      out.push_back(k);
    }
  }
  return out;
}

MinislotDecision commit_punctures(SlotContext& ctx, const UrllcBatch& batch,
                                  const Admission& adm,
                                  const std::vector<std::vector<std::size_t>>& rbs,
                                  std::size_t minislot) {
  const std::size_t K = ctx.alpha.n_rb(), E = ctx.alpha.n_embb();
  MinislotDecision d;
  d.arrivals = batch.arrivals();
  d.served = adm.served.size();
  d.dropped = adm.dropped;
  d.record.beta = Matrix<std::uint8_t>(adm.served.size(), K, 0);
  d.record.phi.assign(adm.served.size(), 1);
  d.record.demand = adm.demand;
  d.record.minislot_index = minislot;
  d.record.slot_index = ctx.alpha.slot_index;
  d.punctured_per_embb.assign(E, 0);
  for (std::size_t u = 0; u < rbs.size(); ++u) {
    for (std::size_t k : rbs[u]) {
      d.record.beta(u, k) = 1;
      const auto owner = ctx.alpha.owner(k);
      if (!owner) throw std::logic_error("punctured RB has no eMBB owner");
      ++d.punctured_per_embb[*owner];
    }
  }
  d.loss_bits = accrue_loss(ctx.alpha, d.record, ctx.ledger.rb_rate(),
                            ctx.ledger.minislots_per_slot(), ctx.ledger.literal_loss());
  ctx.ledger.add_loss(d.loss_bits);
  return d;
}

UnitCosts unit_cost_matrix(const RateLedger& ledger, const EmbbAllocation& alpha,
                           std::size_t served, std::size_t max_units) {
  const std::size_t E = ledger.n_embb();
  if (alpha.n_embb() != E) throw std::invalid_argument("unit_cost_matrix: UE count mismatch");
  const auto& loss = ledger.slot_loss();
  const double sum = std::accumulate(loss.begin(), loss.end(), 0.0);
  UnitCosts uc;
  std::vector<double> col_cost;
  for (std::size_t e = 0; e < E; ++e) {
    const std::size_t units = std::min(alpha.holdings(e), max_units);
    const double unit = ledger.cell_loss(e);
    double floor = 0.0;
    for (std::size_t j = 1; j <= units; ++j) {
      const double mean = (sum + j * unit) / static_cast<double>(E);
      const double v = std::abs(mean - (loss[e] + j * unit));
      floor = j == 1 ? v : std::max(floor, v);
      uc.owner.push_back(e);
      col_cost.push_back(floor);
    }
  }
  uc.cost = Matrix<double>(served, col_cost.size());
  for (std::size_t u = 0; u < served; ++u) {
    for (std::size_t c = 0; c < col_cost.size(); ++c) uc.cost(u, c) = col_cost[c];
  }
  return uc;
}

MinislotDecision schedule_minislot(SlotContext& ctx, const UrllcBatch& batch,
                                   std::size_t minislot) {
  const Admission adm = admit(batch, ctx.alpha.n_rb());
  const std::size_t U = adm.served.size();
  std::vector<std::vector<std::size_t>> rbs(U);
  double cost = 0.0;
  if (U > 0) {
    const UnitCosts uc = unit_cost_matrix(ctx.ledger, ctx.alpha, U, adm.total_demand());
    std::vector<std::int64_t> demand(adm.demand.begin(), adm.demand.end());
    const std::vector<std::int64_t> supply(uc.owner.size(), 1);
    const TransportSolution sol = solve_transport(uc.cost, demand, supply);
    cost = sol.cost;
    std::vector<bool> used(ctx.alpha.n_rb(), false);
    for (std::size_t u = 0; u < U; ++u) {
      for (std::size_t c = 0; c < uc.owner.size(); ++c) {
        if (sol.assignment(u, c) == 0) continue;
        auto taken = take_rbs(ctx.alpha, used, uc.owner[c], 1);
        if (taken.size() != 1) throw std::logic_error("transport plan exceeds RB holdings");
        rbs[u].push_back(taken.front());
      }
    }
  }
  MinislotDecision d =
      commit_punctures(ctx, batch, adm, rbs, minislot % ctx.ledger.minislots_per_slot());
  d.transport_cost = cost;
  return d;
}

}  // namespace coexist
