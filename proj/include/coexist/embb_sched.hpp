#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "coexist/channel.hpp"
#include "coexist/model.hpp"

namespace coexist {

/**
 * Per-UE deviation of cumulative rate from the population average after
 * slot t (1-based), where slot-t rates follow the (possibly fractional)
 * allocation `alpha`:
 *   W_e = | mean_e'(R_e' + r_e') - (R_e + r_e) | / t
 * with R the cumulative actual rate of slots 1..t-1 held by the ledger.
 */
std::vector<double> fairness_deviation(const Matrix<double>& alpha,
                                       const RateLedger& ledger,
                                       const ChannelState& rates, std::size_t t);

double fairness_objective(const Matrix<double>& alpha, const RateLedger& ledger,
                          const ChannelState& rates, std::size_t t);

/// Concave p-norm penalty; zero exactly on one-hot columns.
double penalty_value(const Matrix<double>& alpha, double eps, double p);

/// Entrywise p (alpha + eps)^(p-1). Throws std::domain_error where alpha + eps == 0.
Matrix<double> penalty_gradient(const Matrix<double>& alpha, double eps, double p);

/// max over entries of min(a, 1 - a).
double binary_gap(const Matrix<double>& alpha);
inline constexpr double kBinaryTolerance = 1e-6;

/// Scores a candidate binary allocation; lower is better.
using AllocationScore = std::function<double(const Matrix<double>&)>;

/**
 * Assigns each RB to its largest relaxed entry (ties to the lowest UE),
 * then hands UEs left without an RB one RB each, taken where `score`
 * rises least (or, without a score, where the owner's relaxed weight is
 * smallest). With a score, single-RB moves between UEs are then applied
 * while they lower it. Throws std::invalid_argument when columns sum above
 * 1 + 1e-6 or there are fewer RBs than UEs.
 */
Matrix<std::uint8_t> round_allocation(const Matrix<double>& alpha_relaxed,
                                      const AllocationScore& score = {});

/// Diagnostics of one PSUM run.
struct PsumTrace {
  std::size_t lp_solves = 0;
  std::size_t iterations = 0;
  bool binary_before_rounding = false;
  double relaxed_objective = 0.0;
  /// Linearized objective at the previous and the new iterate, per iteration.
  std::vector<double> surrogate_before;
  std::vector<double> surrogate_after;
  Matrix<double> final_relaxed;
};

class PsumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Penalized successive upper-bound minimization for one slot.
 *
 * Solves the LP relaxation of the fairness-deviation problem, then solves
 * linearized-penalty LPs with shrinking smoothing and growing penalty weight
 * until the iterate is binary or the iteration budget is spent; rounds if
 * needed. Every RB is assigned (full-buffer eMBB).
 */
EmbbAllocation psum_schedule(const RateLedger& ledger, const ChannelState& rates,
                             std::size_t t, const PsumParams& params,
                             PsumTrace* trace = nullptr);

/// Contiguous blocks in UE order from per-UE RB counts.
EmbbAllocation allocation_from_counts(const std::vector<std::size_t>& counts,
                                      std::size_t n_rb, std::size_t slot);

/// floor(K/E) RBs each, remainder one each to the lowest-indexed UEs.
std::vector<std::size_t> equal_split_counts(std::size_t n_rb, std::size_t n_embb);

/// Largest-remainder apportionment of n_rb proportional to `weights`, with a
/// floor of one RB per UE.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t n_rb);

/**
 * Loss-proportional heuristic. Slot 1 splits RBs equally; later slots give
 * each UE a share proportional to its loss in the previous slot, falling
 * back to an equal split when nobody lost anything.
 */
EmbbAllocation heuristic_schedule(const RateLedger& ledger, std::size_t t,
                                  std::size_t n_rb, std::size_t n_embb);

}  // namespace coexist
