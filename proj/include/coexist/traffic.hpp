#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "coexist/model.hpp"
#include "coexist/rng.hpp"

namespace coexist {

/// One uRLLC request with the link it will be served on.
struct UrllcRequest {
  double payload_bits = 0.0;
  double distance_m = 0.0;
  double gain = 0.0;
  /// Finite-blocklength capacity of one RB for one mini-slot, in bits.
  double rb_rate = 0.0;
  /// True when the unclamped finite-blocklength rate was negative.
  bool rate_clamped = false;
};

struct UrllcBatch {
  std::vector<UrllcRequest> requests;
  std::size_t minislot_index = 0;
  std::size_t slot_index = 0;

  std::size_t arrivals() const { return requests.size(); }
};

class LatencyInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gaussian batch size rounded to the nearest integer and clamped at zero.
std::size_t draw_arrivals(double mu, double sd, Rng& rng);

/// Smallest n with n >= F^-1(1 - eps) for U ~ N(mu, sd^2).
std::size_t admission_quota(double mu, double sd, double eps);

/**
 * Minimal number of RBs whose summed mini-slot capacity, best RBs first,
 * covers the payload. Zero payload needs zero RBs. Throws LatencyInfeasible
 * when all RBs together fall short.
 */
std::size_t required_rbs(double payload_bits, std::span<const double> per_rb_rates);

/// Draws the arrivals of one mini-slot with a fresh position and fade per request.
UrllcBatch draw_batch(const SystemConfig& cfg, const LinkBudget& lb,
                      std::size_t slot, std::size_t minislot, Rng& rng);

}  // namespace coexist
