#include "coexist/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <optional>
#include <thread>

#include "coexist/accounting.hpp"
#include "coexist/channel.hpp"
#include "coexist/embb_sched.hpp"
#include "coexist/rng.hpp"
#include "coexist/traffic.hpp"
#include "coexist/urllc_sched.hpp"

namespace coexist {

std::vector<double> accrue_loss(const EmbbAllocation& alpha, const PunctureRecord& record,
                                std::span<const double> rb_rate,
                                std::size_t minislots_per_slot, bool literal) {
  const std::size_t E = alpha.n_embb();
  if (rb_rate.size() != E) throw std::invalid_argument("accrue_loss: rate vector size");
  if (minislots_per_slot == 0) throw std::invalid_argument("accrue_loss: zero mini-slots");
  const double scale = literal ? 1.0 : 1.0 / static_cast<double>(minislots_per_slot);
  std::vector<double> loss(E, 0.0);
  for (std::size_t k = 0; k < record.beta.cols(); ++k) {
    if (record.beta.col_sum(k) == 0) continue;
    const auto e = alpha.owner(k);
    if (!e) throw std::invalid_argument("accrue_loss: punctured RB " + std::to_string(k) +
                                        " has no owner");
    loss[*e] += rb_rate[*e] * scale;
  }
  return loss;
}

double actual_rate(double nominal, double loss) {
  if (loss > nominal) throw std::logic_error("loss exceeds nominal rate");
  return nominal - loss;
}

double mear(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mear of empty set");
  return *std::min_element(x.begin(), x.end());
}

double jain_fairness(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("jain_fairness of empty set");
  double s = 0.0, s2 = 0.0;
  for (double v : x) {
    if (v < 0) throw std::invalid_argument("jain_fairness of negative value");
    s += v;
    s2 += v * v;
  }
  if (s2 == 0.0) throw std::invalid_argument("jain_fairness of all-zero rates");
  return s * s / (static_cast<double>(x.size()) * s2);
}

SimulationError::SimulationError(const std::string& what, std::size_t slot,
                                 std::size_t minislot)
    : std::runtime_error("slot " + std::to_string(slot) + ", mini-slot " +
                         std::to_string(minislot) + ": " + what),
      slot_(slot),
      minislot_(minislot) {}

namespace {

EmbbAllocation schedule_embb(Policy policy, const SystemConfig& cfg, const RateLedger& ledger,
                             const ChannelState& channel, std::size_t t) {
  switch (policy) {
    case Policy::Proposed:
      return psum_schedule(ledger, channel, t, cfg.psum);
    case Policy::Heuristic:
    case Policy::MBS:
      return heuristic_schedule(ledger, t, cfg.n_rb, cfg.n_embb);
    default:
      return allocation_from_counts(equal_split_counts(cfg.n_rb, cfg.n_embb), cfg.n_rb, t);
  }
}

bool near(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_conservation(const MinislotDecision& d, const EmbbAllocation& alpha,
                        const RateLedger& ledger) {
  double expected = 0.0;
  for (std::size_t k = 0; k < alpha.n_rb(); ++k) {
    if (d.record.beta.rows() == 0 || d.record.beta.col_sum(k) == 0) continue;
    expected += ledger.cell_loss(*alpha.owner(k));
  }
  const double charged = std::accumulate(d.loss_bits.begin(), d.loss_bits.end(), 0.0);
  if (!near(expected, charged)) {
    throw std::logic_error("loss conservation broken: charged " + std::to_string(charged) +
                           ", punctured cells worth " + std::to_string(expected));
  }
}

}  // namespace

RunResult run_simulation(const SystemConfig& raw, Policy policy, std::uint64_t seed,
                         const SlotObserver& observer) {
  const SystemConfig cfg = validate_config(raw);
  const LinkBudget lb = link_budget(cfg);
  Rng placement = make_stream(seed, Stream::Placement);
  Rng fading = make_stream(seed, Stream::Fading);
  Rng traffic = make_stream(seed, Stream::Traffic);
  Rng policy_rng = make_stream(seed, Stream::Policy);

  std::vector<double> distances(cfg.n_embb);
  for (double& d : distances) d = draw_distance(cfg, placement);

  RunResult res;
  res.seed = seed;
  res.policy = policy;
  RateLedger ledger(cfg.n_embb, cfg.minislots_per_slot, cfg.literal_eq10);
  const std::size_t M = cfg.minislots_per_slot;
  std::size_t global_minislot = 0;
  std::optional<UrllcBatch> pending;

  for (std::size_t t = 1; t <= cfg.n_slots; ++t) {
    std::size_t m = 0;
    try {
      const ChannelState channel = draw_channel(distances, cfg, lb, fading);
      const EmbbAllocation alpha = schedule_embb(policy, cfg, ledger, channel, t);
      if (auto v = allocation_violation(alpha)) throw std::logic_error("allocation: " + *v);
      ++res.invariant_checks;

      std::vector<std::size_t> holdings(cfg.n_embb);
      for (std::size_t e = 0; e < cfg.n_embb; ++e) holdings[e] = alpha.holdings(e);
      ledger.open_slot(channel.rb_rate, holdings);
      SlotContext ctx{alpha, channel, ledger};
      double slot_charged = 0.0;

      for (m = 0; m < M; ++m, ++global_minislot) {
        // The batch drawn in the previous mini-slot is served now, possibly
        // against this slot's fresh allocation.
        if (pending) {
          if (pending->slot_index != t) ++res.boundary_carryovers;
          const MinislotDecision d =
              (policy == Policy::Proposed || policy == Policy::Heuristic)
                  ? schedule_minislot(ctx, *pending, global_minislot)
                  : baseline_schedule(policy, ctx, *pending, global_minislot, policy_rng);
          if (auto v = puncture_violation(d.record, cfg.n_rb)) {
            throw std::logic_error("puncturing: " + *v);
          }
          check_conservation(d, alpha, ledger);
          res.invariant_checks += 2;
          slot_charged += std::accumulate(d.loss_bits.begin(), d.loss_bits.end(), 0.0);
          res.arrivals += d.arrivals;
          res.dropped += d.dropped;
          if (d.served < d.arrivals) ++res.violation_count;
          ++res.minislots;
        }
        pending = draw_batch(cfg, lb, t, m, traffic);
        for (const auto& r : pending->requests) res.clamped_rates += r.rate_clamped ? 1 : 0;
      }
      m = M;
      const auto& loss = ledger.slot_loss();
      if (!near(std::accumulate(loss.begin(), loss.end(), 0.0), slot_charged)) {
        throw std::logic_error("slot loss total differs from mini-slot charges");
      }
      ++res.invariant_checks;
      ledger.close_slot();
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& ex) {
      throw SimulationError(ex.what(), t, m);
    }
    if (observer) observer(t, ledger);
  }

  res.per_ue_rate = ledger.cumulative_actual();
  for (double& r : res.per_ue_rate) r /= static_cast<double>(cfg.n_slots);
  res.mear = mear(res.per_ue_rate);
  res.fairness = jain_fairness(res.per_ue_rate);
  const double lo = 1.0 / static_cast<double>(cfg.n_embb);
  if (res.fairness < lo - 1e-12 || res.fairness > 1.0 + 1e-12) {
    throw SimulationError("fairness outside [1/n, 1]", cfg.n_slots, M);
  }
  ++res.invariant_checks;
  return res;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("SCHED_SIM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentReport run_experiment(const SystemConfig& cfg, const std::vector<Policy>& policies,
                                const std::vector<std::uint64_t>& seeds, std::size_t threads) {
  validate_config(cfg);
  const std::size_t S = seeds.size();
  const std::size_t jobs = policies.size() * S;
  std::vector<RunResult> results(jobs);
  std::vector<std::string> errors(jobs);
  std::vector<char> ok(jobs, 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      try {
        results[j] = run_simulation(cfg, policies[j / S], seeds[j % S]);
        ok[j] = 1;
      } catch (const std::exception& ex) {
        errors[j] = ex.what();
      }
    }
  };
  if (threads == 0) threads = default_thread_count();
  threads = std::min(threads, std::max<std::size_t>(jobs, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentReport report;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    CellReport cell;
    cell.policy = policies[p];
    cell.seeds = S;
    std::size_t violations = 0, minislots = 0;
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t j = p * S + s;
      if (!ok[j]) {
        cell.failures.push_back("seed " + std::to_string(seeds[s]) + ": " + errors[j]);
        continue;
      }
      const RunResult& r = results[j];
      ++cell.completed;
      cell.mean_mear += r.mear;
      cell.mean_fairness += r.fairness;
      violations += r.violation_count;
      minislots += r.minislots;
      cell.mear_samples.push_back(r.mear);
      cell.runs.push_back(r);
    }
    if (cell.completed > 0) {
      cell.mean_mear /= static_cast<double>(cell.completed);
      cell.mean_fairness /= static_cast<double>(cell.completed);
    }
    if (minislots > 0) {
      cell.violation_rate = static_cast<double>(violations) / static_cast<double>(minislots);
    }
    std::sort(cell.mear_samples.begin(), cell.mear_samples.end());
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::vector<std::pair<double, double>> ecdf(const std::vector<double>& sorted) {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

}  // namespace coexist
