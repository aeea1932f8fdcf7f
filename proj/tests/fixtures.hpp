#pragma once

#include <vector>

#include "coexist/channel.hpp"
#include "coexist/embb_sched.hpp"
#include "coexist/model.hpp"
#include "coexist/traffic.hpp"
#include "coexist/urllc_sched.hpp"

// A slot with contiguous RB blocks and flat per-UE rates, ready for puncturing.
struct SlotFixture {
  coexist::EmbbAllocation alpha;
  coexist::ChannelState channel;
  coexist::RateLedger ledger;

  SlotFixture(const std::vector<std::size_t>& counts, const std::vector<double>& rates,
              std::size_t minislots = 8) {
    std::size_t K = 0;
    for (auto c : counts) K += c;
    alpha = coexist::allocation_from_counts(counts, K, 1);
    channel.rb_rate = rates;
    channel.gain.assign(rates.size(), 1.0);
    channel.snr.assign(rates.size(), 1.0);
    channel.n_rb = K;
    ledger = coexist::RateLedger(counts.size(), minislots);
    ledger.open_slot(rates, counts);
  }

  coexist::SlotContext context() { return {alpha, channel, ledger}; }
};

// A batch whose requests all see `rb_rate` bits per RB per mini-slot.
inline coexist::UrllcBatch batch_of(std::size_t n, double payload_bits, double rb_rate) {
  coexist::UrllcBatch b;
  for (std::size_t i = 0; i < n; ++i) {
    coexist::UrllcRequest r;
    r.payload_bits = payload_bits;
    r.rb_rate = rb_rate;
    r.gain = 1.0;
    r.distance_m = 50.0;
    b.requests.push_back(r);
  }
  return b;
}
