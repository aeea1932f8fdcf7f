#include "coexist/channel.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coexist {

double free_space_gain(double distance_m, double frequency_hz) {
  if (!(distance_m > 0)) throw std::domain_error("path gain: distance must be positive");
  if (!(frequency_hz > 0)) throw std::domain_error("path gain: frequency must be positive");
  const double lambda = kSpeedOfLight / frequency_hz;
  const double a = lambda / (4.0 * std::numbers::pi * distance_m);
  return a * a;
}

double rayleigh_fade(Rng& rng) {
  std::exponential_distribution<double> fade(1.0);
  double f = fade(rng);
  while (f <= 0.0) f = fade(rng);
  return f;
}

double path_gain(double distance_m, double frequency_hz, double fade) {
  return free_space_gain(distance_m, frequency_hz) * fade;
}

double path_gain(double distance_m, double frequency_hz, Rng& rng) {
  const double fs = free_space_gain(distance_m, frequency_hz);
  return fs * rayleigh_fade(rng);
}

double snr(double gain, double p_tx_mw, double n0_mw_hz, double b_hz) {
  return gain * p_tx_mw / (n0_mw_hz * b_hz);
}

double embb_rb_rate(double gain, double p_tx_mw, double n0_mw_hz, double b_hz,
                    double slot_s) {
  return slot_s * b_hz * std::log2(1.0 + snr(gain, p_tx_mw, n0_mw_hz, b_hz));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double urllc_rb_rate_unclamped(double gain, double p_tx_mw, double n0_mw_hz,
                               double b_hz, double minislot_s, double decode_err,
                               double blocklength) {
  const double g = snr(gain, p_tx_mw, n0_mw_hz, b_hz);
  const double dispersion = g / (1.0 + g);
  const double penalty = std::sqrt(dispersion / blocklength) * q_inv(decode_err);
  return minislot_s * (b_hz * std::log2(1.0 + g) - penalty);
}

double urllc_rb_rate(double gain, double p_tx_mw, double n0_mw_hz, double b_hz,
                     double minislot_s, double decode_err, double blocklength) {
  return std::max(0.0, urllc_rb_rate_unclamped(gain, p_tx_mw, n0_mw_hz, b_hz,
                                               minislot_s, decode_err, blocklength));
}

double superposition_sinr(double gain, double p_urllc_mw, double p_embb_mw,
                          double n0_mw_hz, double b_hz) {
  return gain * p_urllc_mw / (n0_mw_hz * b_hz + gain * p_embb_mw);
}

double superposition_dispersion(double gain, double p_urllc_mw, double p_embb_mw,
                                double n0_mw_hz, double b_hz) {
  return gain * p_urllc_mw / (n0_mw_hz * b_hz + gain * (p_urllc_mw + p_embb_mw));
}

ChannelState make_channel_state(const std::vector<double>& gains,
                                const SystemConfig& cfg, const LinkBudget& lb) {
  ChannelState s;
  s.n_rb = cfg.n_rb;
  s.gain = gains;
  s.snr.reserve(gains.size());
  s.rb_rate.reserve(gains.size());
  for (double g : gains) {
    if (!(g > 0)) throw std::domain_error("channel gain must be positive");
    s.snr.push_back(snr(g, lb.p_embb_mw, lb.n0_mw_hz, cfg.bandwidth_hz));
    s.rb_rate.push_back(
        embb_rb_rate(g, lb.p_embb_mw, lb.n0_mw_hz, cfg.bandwidth_hz, cfg.slot_s));
  }
  return s;
}

double draw_distance(const SystemConfig& cfg, Rng& rng) {
  // Uniform over area: radius^2 uniform between the annulus bounds.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r0 = cfg.min_distance_m * cfg.min_distance_m;
  const double r1 = cfg.cell_radius_m * cfg.cell_radius_m;
  return std::sqrt(r0 + (r1 - r0) * u(rng));
}

ChannelState draw_channel(const std::vector<double>& distances_m,
                          const SystemConfig& cfg, const LinkBudget& lb, Rng& rng) {
  std::vector<double> gains;
  gains.reserve(distances_m.size());
  for (double d : distances_m) gains.push_back(path_gain(d, cfg.carrier_hz, rng));
  return make_channel_state(gains, cfg, lb);
}

}  // namespace coexist
