#include "coexist/embb_sched.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "coexist/lp.hpp"

namespace coexist {

std::vector<double> fairness_deviation(const Matrix<double>& alpha,
                                       const RateLedger& ledger,
                                       const ChannelState& rates, std::size_t t) {
  if (t < 1) throw std::invalid_argument("fairness_deviation: t must be >= 1");
  const std::size_t E = alpha.rows();
  if (ledger.n_embb() != E || rates.n_embb() != E) {
    throw std::invalid_argument("fairness_deviation: UE count mismatch");
  }
  std::vector<double> total(E);
  for (std::size_t e = 0; e < E; ++e) {
    double r = 0.0;
    for (std::size_t k = 0; k < alpha.cols(); ++k) r += alpha(e, k) * rates.rb_rate_embb(e, k);
    total[e] = ledger.cumulative_actual()[e] + r;
  }
  const double mean = std::accumulate(total.begin(), total.end(), 0.0) / static_cast<double>(E);
  std::vector<double> w(E);
  for (std::size_t e = 0; e < E; ++e) w[e] = std::abs(mean - total[e]) / static_cast<double>(t);
  return w;
}

double fairness_objective(const Matrix<double>& alpha, const RateLedger& ledger,
                          const ChannelState& rates, std::size_t t) {
  const auto w = fairness_deviation(alpha, ledger, rates, t);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

double penalty_value(const Matrix<double>& alpha, double eps, double p) {
  const std::size_t E = alpha.rows();
  const double c = std::pow(1.0 + eps, p) + static_cast<double>(E - 1) * std::pow(eps, p);
  double total = 0.0;
  for (std::size_t k = 0; k < alpha.cols(); ++k) {
    double col = 0.0;
    for (std::size_t e = 0; e < E; ++e) col += std::pow(alpha(e, k) + eps, p);
    total += col - c;
  }
  return total;
}

Matrix<double> penalty_gradient(const Matrix<double>& alpha, double eps, double p) {
  Matrix<double> g(alpha.rows(), alpha.cols());
  for (std::size_t e = 0; e < alpha.rows(); ++e) {
    for (std::size_t k = 0; k < alpha.cols(); ++k) {
      const double base = alpha(e, k) + eps;
      if (base <= 0.0) throw std::domain_error("penalty gradient singularity");
      g(e, k) = p * std::pow(base, p - 1.0);
    }
  }
  return g;
}

double binary_gap(const Matrix<double>& alpha) {
  double gap = 0.0;
  for (double a : alpha.data()) gap = std::max(gap, std::min(std::abs(a), std::abs(1.0 - a)));
  return gap;
}

Matrix<std::uint8_t> round_allocation(const Matrix<double>& alpha_relaxed,
                                      const AllocationScore& score) {
  const std::size_t E = alpha_relaxed.rows(), K = alpha_relaxed.cols();
  if (K < E) throw std::invalid_argument("round_allocation: fewer RBs than UEs");
  for (std::size_t k = 0; k < K; ++k) {
    if (alpha_relaxed.col_sum(k) > 1.0 + 1e-6) {
      throw std::invalid_argument("round_allocation: column " + std::to_string(k) +
                                  " sums above 1");
    }
  }
  std::vector<std::size_t> owner(K, 0);
  std::vector<std::size_t> held(E, 0);
  for (std::size_t k = 0; k < K; ++k) {
    std::size_t best = 0;
    for (std::size_t e = 1; e < E; ++e) {
      if (alpha_relaxed(e, k) > alpha_relaxed(best, k)) best = e;
    }
    owner[k] = best;
    ++held[best];
  }

  const auto as_matrix = [&](const std::vector<std::size_t>& own) {
    Matrix<double> m(E, K, 0.0);
    for (std::size_t k = 0; k < K; ++k) m(own[k], k) = 1.0;
    return m;
  };

  for (std::size_t needy = 0; needy < E; ++needy) {
    if (held[needy] > 0) continue;
    std::size_t pick = K;
    double pick_cost = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (held[owner[k]] < 2) continue;
      double cost;
      if (score) {
        auto trial = owner;
        trial[k] = needy;
        cost = score(as_matrix(trial));
      } else {
        cost = alpha_relaxed(owner[k], k) - alpha_relaxed(needy, k);
      }
      if (pick == K || cost < pick_cost) {
        pick = k;
        pick_cost = cost;
      }
    }
    --held[owner[pick]];
    owner[pick] = needy;
    ++held[needy];
  }

  // Single-RB moves that lower the score, steepest first, until none helps.
  // For each (from, to) pair the candidate is the RB of `from` on which `to`
  // has the largest relaxed weight.
  if (score) {
    double current = score(as_matrix(owner));
    while (true) {
      std::size_t best_k = K, best_e = E;
      double best = current;
      for (std::size_t from = 0; from < E; ++from) {
        if (held[from] < 2) continue;
        for (std::size_t to = 0; to < E; ++to) {
          if (to == from) continue;
          std::size_t k = K;
          for (std::size_t j = 0; j < K; ++j) {
            if (owner[j] == from && (k == K || alpha_relaxed(to, j) > alpha_relaxed(to, k))) k = j;
          }
          auto trial = owner;
          trial[k] = to;
          const double v = score(as_matrix(trial));
          if (v < best - 1e-12 * std::max(1.0, std::abs(best))) {
            best = v;
            best_k = k;
            best_e = to;
          }
        }
      }
      if (best_k == K) break;
      --held[owner[best_k]];
      owner[best_k] = best_e;
      ++held[best_e];
      current = best;
    }
  }

  Matrix<std::uint8_t> out(E, K, 0);
  for (std::size_t k = 0; k < K; ++k) out(owner[k], k) = 1;
  return out;
}

namespace {

// Variable layout of the per-slot LP: alpha (e-major), RB counts n_e,
// absolute-deviation epigraph z_e.
struct PsumLayout {
  std::size_t E, K;
  std::size_t alpha(std::size_t e, std::size_t k) const { return e * K + k; }
  std::size_t count(std::size_t e) const { return E * K + e; }
  std::size_t dev(std::size_t e) const { return E * K + E + e; }
  std::size_t size() const { return E * K + 2 * E; }
};

LinearProgram build_relaxation(const PsumLayout& L, const RateLedger& ledger,
                               const ChannelState& rates, std::size_t t) {
  const std::size_t E = L.E, K = L.K, V = L.size();
  LinearProgram lp;
  lp.objective.assign(V, 0.0);
  for (std::size_t e = 0; e < E; ++e) lp.objective[L.dev(e)] = 1.0;

  lp.bounds.assign(V, {0.0, 1.0});
  for (std::size_t e = 0; e < E; ++e) {
    lp.bounds[L.count(e)] = {1.0, static_cast<double>(K)};
    lp.bounds[L.dev(e)] = {0.0, kInfinity};
  }

  // Every RB is handed out once.
  for (std::size_t k = 0; k < K; ++k) {
    Constraint c{std::vector<double>(V, 0.0), Relation::Equal, 1.0};
    for (std::size_t e = 0; e < E; ++e) c.coefficients[L.alpha(e, k)] = 1.0;
    lp.constraints.push_back(std::move(c));
  }
  for (std::size_t e = 0; e < E; ++e) {
    Constraint c{std::vector<double>(V, 0.0), Relation::Equal, 0.0};
    for (std::size_t k = 0; k < K; ++k) c.coefficients[L.alpha(e, k)] = 1.0;
    c.coefficients[L.count(e)] = -1.0;
    lp.constraints.push_back(std::move(c));
  }
  {
    Constraint c{std::vector<double>(V, 0.0), Relation::LessEqual, static_cast<double>(K)};
    for (std::size_t e = 0; e < E; ++e) c.coefficients[L.count(e)] = 1.0;
    lp.constraints.push_back(std::move(c));
  }

  // Deviations are measured in units of the mean per-RB rate so that the
  // fairness term and the penalty term are commensurate.
  double scale = 0.0;
  for (std::size_t e = 0; e < E; ++e) scale += rates.rb_rate[e];
  scale /= static_cast<double>(E);
  if (!(scale > 0)) scale = 1.0;
  const double denom = scale * static_cast<double>(t);
  const auto& cum = ledger.cumulative_actual();
  const double mean_cum = std::accumulate(cum.begin(), cum.end(), 0.0) / static_cast<double>(E);

  for (std::size_t e = 0; e < E; ++e) {
    // D_e = sum_e' a[e'] n_e' + b
    std::vector<double> a(E);
    for (std::size_t q = 0; q < E; ++q) {
      a[q] = rates.rb_rate[q] / static_cast<double>(E) / denom;
    }
    a[e] -= rates.rb_rate[e] / denom;
    const double b = (mean_cum - cum[e]) / denom;
    for (int sign : {1, -1}) {
      // z_e - sign * D_e >= 0
      Constraint c{std::vector<double>(V, 0.0), Relation::GreaterEqual, sign * b};
      c.coefficients[L.dev(e)] = 1.0;
      for (std::size_t q = 0; q < E; ++q) c.coefficients[L.count(q)] = -sign * a[q];
      lp.constraints.push_back(std::move(c));
    }
  }
  return lp;
}

Matrix<double> extract_alpha(const PsumLayout& L, const std::vector<double>& x) {
  Matrix<double> a(L.E, L.K);
  for (std::size_t e = 0; e < L.E; ++e) {
    for (std::size_t k = 0; k < L.K; ++k) {
      a(e, k) = std::clamp(x[L.alpha(e, k)], 0.0, 1.0);
    }
  }
  // Strip floating-point excess so each column sums to at most one.
  for (std::size_t k = 0; k < L.K; ++k) {
    const double s = a.col_sum(k);
    if (s > 1.0) {
      for (std::size_t e = 0; e < L.E; ++e) a(e, k) /= s;
    }
  }
  return a;
}

// Deviation part of the LP objective, evaluated at the best epigraph values.
double scaled_deviation(const PsumLayout& L, const LinearProgram& lp, const Matrix<double>& a) {
  std::vector<double> x(L.size(), 0.0);
  for (std::size_t e = 0; e < L.E; ++e) {
    double n = 0.0;
    for (std::size_t k = 0; k < L.K; ++k) {
      x[L.alpha(e, k)] = a(e, k);
      n += a(e, k);
    }
    x[L.count(e)] = n;
  }
  double total = 0.0;
  const std::size_t first_dev_row = L.K + L.E + 1;
  for (std::size_t e = 0; e < L.E; ++e) {
    // Row pair for UE e: z - D >= b and z + D >= -b, i.e. z >= |D + b|.
    const Constraint& c = lp.constraints[first_dev_row + 2 * e];
    double d = 0.0;
    for (std::size_t q = 0; q < L.E; ++q) d -= c.coefficients[L.count(q)] * x[L.count(q)];
    total += std::abs(d + c.rhs);
  }
  return total;
}

}  // namespace

EmbbAllocation psum_schedule(const RateLedger& ledger, const ChannelState& rates,
                             std::size_t t, const PsumParams& params, PsumTrace* trace) {
  const std::size_t E = rates.n_embb(), K = rates.n_rb;
  if (t < 1) throw std::invalid_argument("psum_schedule: t must be >= 1");
  if (K < E) throw std::invalid_argument("psum_schedule: fewer RBs than UEs");
  if (ledger.n_embb() != E) throw std::invalid_argument("psum_schedule: UE count mismatch");

  const PsumLayout L{E, K};
  LinearProgram lp = build_relaxation(L, ledger, rates, t);
  SimplexSolver solver(lp);
  LpResult res = solver.solve();
  if (!res.optimal()) {
    throw PsumError("slot " + std::to_string(t) + ": relaxation LP " + to_string(res.status));
  }
  PsumTrace local;
  PsumTrace& tr = trace ? *trace : local;
  tr = PsumTrace{};
  tr.lp_solves = 1;
  tr.relaxed_objective = res.value;

  Matrix<double> alpha = extract_alpha(L, res.x);
  double eps = params.eps1;
  double sigma = params.sigma1;
  std::vector<double> objective = lp.objective;

  for (std::size_t i = 0; i < params.i_max; ++i) {
    const Matrix<double> grad = penalty_gradient(alpha, eps, params.p);
    std::fill(objective.begin(), objective.end(), 0.0);
    for (std::size_t e = 0; e < E; ++e) objective[L.dev(e)] = 1.0;
    double linear_at_prev = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
      for (std::size_t k = 0; k < K; ++k) {
        objective[L.alpha(e, k)] = sigma * grad(e, k);
        linear_at_prev += sigma * grad(e, k) * alpha(e, k);
      }
    }
    const double before = scaled_deviation(L, lp, alpha) + linear_at_prev;

    res = solver.reoptimize(objective);
    ++tr.lp_solves;
    if (!res.optimal()) {
      throw PsumError("slot " + std::to_string(t) + ": PSUM subproblem LP " +
                      to_string(res.status));
    }
    alpha = extract_alpha(L, res.x);
    tr.iterations = i + 1;
    tr.surrogate_before.push_back(before);
    tr.surrogate_after.push_back(res.value);

    if (binary_gap(alpha) <= kBinaryTolerance) {
      tr.binary_before_rounding = true;
      break;
    }
    eps *= params.eta;
    sigma *= params.zeta;
  }
  tr.final_relaxed = alpha;

  const AllocationScore score = [&](const Matrix<double>& a) {
    return fairness_objective(a, ledger, rates, t);
  };
  EmbbAllocation out;
  out.alpha = round_allocation(alpha, score);
  out.slot_index = t;
  return out;
}

std::vector<std::size_t> equal_split_counts(std::size_t n_rb, std::size_t n_embb) {
  if (n_embb == 0) return {};
  std::vector<std::size_t> counts(n_embb, n_rb / n_embb);
  for (std::size_t e = 0; e < n_rb % n_embb; ++e) ++counts[e];
  return counts;
}

EmbbAllocation allocation_from_counts(const std::vector<std::size_t>& counts,
                                      std::size_t n_rb, std::size_t slot) {
  EmbbAllocation a;
  a.alpha = Matrix<std::uint8_t>(counts.size(), n_rb, 0);
  a.slot_index = slot;
  std::size_t loc = 0;
  for (std::size_t e = 0; e < counts.size(); ++e) {
    for (std::size_t i = 0; i < counts[e]; ++i) {
      if (loc >= n_rb) throw std::invalid_argument("RB counts exceed n_rb");
      a.alpha(e, loc++) = 1;
    }
  }
  return a;
}

std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t n_rb) {
  const std::size_t E = weights.size();
  if (n_rb < E) throw std::invalid_argument("apportion: fewer RBs than UEs");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0)) return equal_split_counts(n_rb, E);

  std::vector<std::size_t> counts(E);
  std::vector<double> remainder(E);
  std::size_t given = 0;
  for (std::size_t e = 0; e < E; ++e) {
    const double quota = weights[e] / total * static_cast<double>(n_rb);
    counts[e] = static_cast<std::size_t>(std::floor(quota));
    remainder[e] = quota - std::floor(quota);
    given += counts[e];
  }
  std::vector<std::size_t> order(E);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; given < n_rb; ++i, ++given) ++counts[order[i % E]];

  // Every UE keeps at least one RB; take it from the largest holder.
  for (std::size_t e = 0; e < E; ++e) {
    if (counts[e] > 0) continue;
    const auto donor = static_cast<std::size_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    --counts[donor];
    ++counts[e];
  }
  return counts;
}

EmbbAllocation heuristic_schedule(const RateLedger& ledger, std::size_t t,
                                  std::size_t n_rb, std::size_t n_embb) {
  if (t < 1) throw std::invalid_argument("heuristic_schedule: t must be >= 1");
  if (t == 1) return allocation_from_counts(equal_split_counts(n_rb, n_embb), n_rb, t);
  return allocation_from_counts(apportion(ledger.previous_loss(), n_rb), n_rb, t);
}

}  // namespace coexist
