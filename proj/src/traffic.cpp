#include "coexist/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "coexist/channel.hpp"

namespace coexist {

std::size_t draw_arrivals(double mu, double sd, Rng& rng) {
  if (sd < 0) throw std::invalid_argument("draw_arrivals: negative standard deviation");
  double x = mu;
  if (sd > 0) {
    std::normal_distribution<double> n(mu, sd);
    x = n(rng);
  }
  const double r = std::round(x);
  return r <= 0 ? 0 : static_cast<std::size_t>(r);
}

std::size_t admission_quota(double mu, double sd, double eps) {
  if (!(eps > 0 && eps < 1)) throw std::domain_error("admission_quota: eps must lie in (0, 1)");
  if (sd < 0) throw std::invalid_argument("admission_quota: negative standard deviation");
  // The (1 - eps) quantile of N(mu, sd^2) is mu + sd * Q^-1(eps).
  const double quantile = sd == 0 ? mu : mu + sd * q_inv(eps);
  const double n = std::ceil(quantile);
  return n <= 0 ? 0 : static_cast<std::size_t>(n);
}

std::size_t required_rbs(double payload_bits, std::span<const double> per_rb_rates) {
  if (payload_bits <= 0) return 0;
  std::vector<double> rates(per_rb_rates.begin(), per_rb_rates.end());
  std::sort(rates.begin(), rates.end(), std::greater<>());
  double carried = 0.0;
  for (std::size_t n = 0; n < rates.size(); ++n) {
    if (rates[n] <= 0) break;
    carried += rates[n];
    if (carried >= payload_bits) return n + 1;
  }
  throw LatencyInfeasible("payload of " + std::to_string(payload_bits) +
                          " bits does not fit in one mini-slot");
}

UrllcBatch draw_batch(const SystemConfig& cfg, const LinkBudget& lb,
                      std::size_t slot, std::size_t minislot, Rng& rng) {
  UrllcBatch batch;
  batch.slot_index = slot;
  batch.minislot_index = minislot;
  const std::size_t n = draw_arrivals(cfg.mean_arrivals(), cfg.arrival_std, rng);
  batch.requests.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    UrllcRequest r;
    r.payload_bits = 8.0 * static_cast<double>(cfg.payload_bytes);
    r.distance_m = draw_distance(cfg, rng);
    r.gain = path_gain(r.distance_m, cfg.carrier_hz, rng);
    const double raw = urllc_rb_rate_unclamped(r.gain, lb.p_urllc_mw, lb.n0_mw_hz,
                                               cfg.bandwidth_hz, cfg.minislot_s,
                                               cfg.decode_err, cfg.blocklength_symbols());
    r.rate_clamped = raw < 0;
    r.rb_rate = std::max(0.0, raw);
    batch.requests.push_back(r);
  }
  return batch;
}

}  // namespace coexist
