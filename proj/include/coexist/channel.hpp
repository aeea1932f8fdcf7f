#pragma once

#include <cstddef>
#include <vector>

#include "coexist/model.hpp"
#include "coexist/rng.hpp"

namespace coexist {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Free-space (Friis) power gain (lambda / (4 pi d))^2.
double free_space_gain(double distance_m, double frequency_hz);

/// Unit-mean exponential power fade of a Rayleigh amplitude.
double rayleigh_fade(Rng& rng);

/// Free-space gain times a Rayleigh power fade. Throws on distance <= 0.
double path_gain(double distance_m, double frequency_hz, Rng& rng);
double path_gain(double distance_m, double frequency_hz, double fade);

double snr(double gain, double p_tx_mw, double n0_mw_hz, double b_hz);

/// Shannon rate of one RB over one slot, in bits.
double embb_rb_rate(double gain, double p_tx_mw, double n0_mw_hz, double b_hz,
                    double slot_s);

/// Complementary standard normal CDF.
double q_function(double x);

/// Inverse of q_function. Throws std::domain_error outside (0, 1).
double q_inv(double p);

/**
 * Finite-blocklength rate of one RB over one mini-slot under puncturing
 * (interference-free SNR). May be negative in deep fades; see urllc_rb_rate.
 */
double urllc_rb_rate_unclamped(double gain, double p_tx_mw, double n0_mw_hz,
                               double b_hz, double minislot_s, double decode_err,
                               double blocklength);

/// urllc_rb_rate_unclamped clamped below at zero.
double urllc_rb_rate(double gain, double p_tx_mw, double n0_mw_hz, double b_hz,
                     double minislot_s, double decode_err, double blocklength);

/// SINR when a uRLLC packet is superposed on an active eMBB transmission.
double superposition_sinr(double gain, double p_urllc_mw, double p_embb_mw,
                          double n0_mw_hz, double b_hz);
/// Channel dispersion in superposition mode.
double superposition_dispersion(double gain, double p_urllc_mw, double p_embb_mw,
                                double n0_mw_hz, double b_hz);

/**
 * @brief eMBB channel for one slot.
 *
 * Rates are flat across RBs, so one per-RB rate per UE is stored;
 * rb_rate_embb(e, k) is the same for every k.
 */
struct ChannelState {
  std::vector<double> gain;
  std::vector<double> snr;
  std::vector<double> rb_rate;
  std::size_t n_rb = 0;

  std::size_t n_embb() const { return gain.size(); }
  double rb_rate_embb(std::size_t e, std::size_t /*k*/) const { return rb_rate[e]; }
};

ChannelState make_channel_state(const std::vector<double>& gains,
                                const SystemConfig& cfg, const LinkBudget& lb);

/// Uniform drop in the annulus [min_distance_m, cell_radius_m].
double draw_distance(const SystemConfig& cfg, Rng& rng);

/// Draws fresh block fades for every eMBB UE at fixed distances.
ChannelState draw_channel(const std::vector<double>& distances_m,
                          const SystemConfig& cfg, const LinkBudget& lb, Rng& rng);

}  // namespace coexist
