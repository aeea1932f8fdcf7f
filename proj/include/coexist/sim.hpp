#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coexist/baselines.hpp"
#include "coexist/model.hpp"

namespace coexist {

/// Outcome of one (scheduler, seed) run.
struct RunResult {
  std::uint64_t seed = 0;
  Policy policy = Policy::Proposed;
  /// Mean actual rate per slot of each eMBB UE, in bits.
  std::vector<double> per_ue_rate;
  double mear = 0.0;
  double fairness = 0.0;
  /// Served batches in which fewer requests were served than arrived.
  std::size_t violation_count = 0;
  /// Batches served (one per mini-slot after the first).
  std::size_t minislots = 0;
  /// Batches drawn in a slot's last mini-slot and served in the next slot.
  std::size_t boundary_carryovers = 0;
  std::size_t arrivals = 0;
  std::size_t dropped = 0;
  /// Requests whose finite-blocklength rate was clamped at zero.
  std::size_t clamped_rates = 0;
  /// Allocation, puncture and conservation checks performed (all passed).
  std::size_t invariant_checks = 0;

  bool operator==(const RunResult&) const = default;
};

/// Raised when a run fails; the message carries the slot and mini-slot.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, std::size_t slot, std::size_t minislot);
  std::size_t slot() const { return slot_; }
  std::size_t minislot() const { return minislot_; }

 private:
  std::size_t slot_;
  std::size_t minislot_;
};

/// Optional per-slot observer, called after each slot closes.
using SlotObserver = std::function<void(std::size_t slot, const RateLedger&)>;

/**
 * Simulates cfg.n_slots slots. At the start of each slot every eMBB UE gets a
 * fresh block fade and the policy's eMBB scheduler allocates the RBs. uRLLC
 * arrivals drawn in one mini-slot are punctured in during the next one; the
 * batch drawn in the very last mini-slot is not served. Allocations,
 * puncture records and loss conservation are checked throughout.
 */
RunResult run_simulation(const SystemConfig& cfg, Policy policy, std::uint64_t seed,
                         const SlotObserver& observer = {});

/// Aggregate of one scheduler over all seeds.
struct CellReport {
  Policy policy = Policy::Proposed;
  std::size_t seeds = 0;
  std::size_t completed = 0;
  double mean_mear = 0.0;
  double mean_fairness = 0.0;
  /// Violating batches over all served batches.
  double violation_rate = 0.0;
  /// Run-level MEAR values, ascending.
  std::vector<double> mear_samples;
  std::vector<RunResult> runs;
  /// "seed N: message" for every failed run.
  std::vector<std::string> failures;
};

struct ExperimentReport {
  std::vector<CellReport> cells;  // one per policy, in request order
};

/// Worker count from SCHED_SIM_THREADS, else the processor count (at least 1).
std::size_t default_thread_count();

/**
 * Runs every (policy, seed) pair, possibly concurrently, and reduces in
 * (policy, seed) order so the report does not depend on scheduling.
 * threads == 0 means default_thread_count().
 */
ExperimentReport run_experiment(const SystemConfig& cfg, const std::vector<Policy>& policies,
                                const std::vector<std::uint64_t>& seeds,
                                std::size_t threads = 0);

/// (value, cumulative probability) points of the empirical CDF of `sorted`.
std::vector<std::pair<double, double>> ecdf(const std::vector<double>& sorted);

}  // namespace coexist
