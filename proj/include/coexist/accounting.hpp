#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coexist/model.hpp"

namespace coexist {

/**
 * eMBB throughput lost to one mini-slot of puncturing, per UE, in bits.
 *
 * Each punctured RB costs its owner rb_rate / M (one mini-slot's share of
 * the slot rate). With `literal` set, each punctured RB costs the full slot
 * rate instead. Throws std::invalid_argument if a punctured RB has no owner.
 */
std::vector<double> accrue_loss(const EmbbAllocation& alpha, const PunctureRecord& record,
                                std::span<const double> rb_rate,
                                std::size_t minislots_per_slot, bool literal = false);

/// nominal - loss; throws std::logic_error when loss exceeds nominal.
double actual_rate(double nominal, double loss);

/// Minimum expected achieved rate. Throws on empty input.
double mear(std::span<const double> per_ue_expected);

/// Jain's index (sum x)^2 / (n sum x^2). Throws on empty or all-zero input.
double jain_fairness(std::span<const double> per_ue_expected);

}  // namespace coexist
