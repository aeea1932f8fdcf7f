#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/rng.hpp"
#include "coexist/urllc_sched.hpp"

namespace coexist {

/// Every scheduler the simulator can run. Proposed and Heuristic use the
/// transportation model for uRLLC; the rest are comparison policies.
enum class Policy { Proposed, Heuristic, PS, MUPS, RS, EDS, MBS };

std::string_view policy_name(Policy p);
/// Case-sensitive lower-case name; nullopt if unknown.
std::optional<Policy> parse_policy(std::string_view name);
const std::vector<Policy>& all_policies();

/**
 * Puncturing decision of a comparison policy for one mini-slot.
 *
 * - PS: RBs of the eMBB UEs with the highest per-RB rate first.
 * - MUPS: for each request, the eMBB UE on whose RBs the request sees the
 *   best fading draw, spilling over in preference order.
 * - RS: uniformly random RBs without replacement.
 * - EDS: one RB per eMBB UE in round-robin order until demand is met.
 * - MBS: deferred-acceptance matching; requests rank eMBB UEs by ascending
 *   loss-balancing cost, eMBB UEs rank requests by arrival order and accept
 *   up to their RB holdings.
 *
 * `minislot` is the global mini-slot counter; EDS starts its round-robin at
 * minislot mod |E|. Throws std::invalid_argument for Proposed/Heuristic.
 */
MinislotDecision baseline_schedule(Policy policy, SlotContext& ctx, const UrllcBatch& batch,
                                   std::size_t minislot, Rng& rng);

/// Deferred acceptance for requests with RB demands. Returns, per request,
/// the eMBB UE it is matched to (nullopt if its list was exhausted).
std::vector<std::optional<std::size_t>> deferred_acceptance(
    const std::vector<std::vector<std::size_t>>& preferences,
    const std::vector<std::size_t>& demand, const std::vector<std::size_t>& quota);

}  // namespace coexist
