#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coexist/channel.hpp"
#include "coexist/model.hpp"
#include "coexist/traffic.hpp"

namespace coexist {

/// State shared by every mini-slot of one slot. The ledger must have the
/// slot open.
struct SlotContext {
  const EmbbAllocation& alpha;
  const ChannelState& channel;
  RateLedger& ledger;
};

struct MinislotDecision {
  PunctureRecord record;
  std::vector<std::size_t> punctured_per_embb;
  /// Objective value of the transportation solution (0 for baselines).
  double transport_cost = 0.0;
  std::size_t arrivals = 0;
  std::size_t served = 0;
  /// Requests not served: latency-infeasible or beyond the RB supply.
  std::size_t dropped = 0;
  /// Bits charged to each eMBB UE by this mini-slot.
  std::vector<double> loss_bits;
};

/// Requests admitted in one mini-slot and the RBs each one needs.
struct Admission {
  std::vector<std::size_t> served;  // indices into the batch
  std::vector<std::size_t> demand;  // RBs per served request
  std::size_t dropped = 0;

  std::size_t total_demand() const;
};

/**
 * Admits requests in arrival order while their RB demand fits the n_rb
 * supply. A latency-infeasible request is dropped and admission continues;
 * the first request that does not fit ends admission.
 */
Admission admit(const UrllcBatch& batch, std::size_t n_rb);

/// s_e = RBs held by each eMBB UE.
std::vector<std::int64_t> supply_vector(const EmbbAllocation& alpha);

/**
 * Loss-balancing cost matrix: c(u, e) is |mean loss - loss_e| after one
 * more RB-mini-slot of UE e is punctured, at the slot's current losses.
 * All rows are identical.
 */
Matrix<double> build_cost_matrix(const RateLedger& ledger, const EmbbAllocation& alpha,
                                 std::size_t served);

/// Transportation costs with one supply column per puncturable RB.
struct UnitCosts {
  Matrix<double> cost;
  /// eMBB UE behind each column; a UE's columns are adjacent.
  std::vector<std::size_t> owner;
};

/**
 * Expands the loss-balancing costs to one column per RB a UE can give up:
 * the j-th column of UE e costs the deviation |mean loss - loss_e| after e's
 * j-th puncture, made nondecreasing in j. Each UE gets min(holdings,
 * max_units) columns. The first column of each UE equals build_cost_matrix.
 */
UnitCosts unit_cost_matrix(const RateLedger& ledger, const EmbbAllocation& alpha,
                           std::size_t served, std::size_t max_units);

/**
 * Builds the record from per-request RB lists, charges the losses to the
 * ledger and returns the finished decision. Shared by every policy.
 */
MinislotDecision commit_punctures(SlotContext& ctx, const UrllcBatch& batch,
                                  const Admission& adm,
                                  const std::vector<std::vector<std::size_t>>& rbs,
                                  std::size_t minislot);

/// Takes up to `count` of e's not-yet-punctured RBs, lowest index first.
std::vector<std::size_t> take_rbs(const EmbbAllocation& alpha, std::vector<bool>& used,
                                  std::size_t e, std::size_t count);

/**
 * `minislot` is the run's global mini-slot counter; the record stores it
 * modulo the mini-slots per slot.
 *
 * Transportation-model puncturing: admit, build unit costs (each column
 * supplies one RB), solve with MCC + MODI, puncture the chosen RBs of each
 * victim UE lowest index first, and charge the losses.
 */
MinislotDecision schedule_minislot(SlotContext& ctx, const UrllcBatch& batch,
                                   std::size_t minislot);

}  // namespace coexist
