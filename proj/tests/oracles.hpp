#pragma once

// Slow, independent reference implementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "coexist/lp.hpp"
#include "coexist/model.hpp"

namespace oracle {

inline double upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Root of upper_tail(x) = p by bisection.
inline double q_inv_bisect(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (upper_tail(mid) > p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Minimum cost over every integer allocation that ships each row's demand
// in full without exceeding any column's supply. Rows are enumerated one at
// a time over all ways to split their demand; states are keyed by the
// remaining supply. Returns +inf if no allocation exists.
inline double transport_optimum(const std::vector<std::vector<double>>& cost,
                                const std::vector<int>& demand, const std::vector<int>& supply) {
  const double inf = std::numeric_limits<double>::infinity();
  std::map<std::vector<int>, double> frontier{{supply, 0.0}};
  const std::size_t C = supply.size();
  for (std::size_t r = 0; r < demand.size(); ++r) {
    std::map<std::vector<int>, double> next;
    for (const auto& [left, base] : frontier) {
      std::vector<int> take(C, 0);
      // Recursive split of demand[r] over the columns.
      auto rec = [&](auto&& self, std::size_t c, int remaining, double acc) -> void {
        if (c + 1 == C) {
          if (remaining > left[c]) return;
          take[c] = remaining;
          std::vector<int> after = left;
          for (std::size_t j = 0; j < C; ++j) after[j] -= take[j];
          const double total = acc + remaining * cost[r][c];
          auto it = next.find(after);
          if (it == next.end() || total < it->second) next[after] = total;
          return;
        }
        for (int q = 0; q <= std::min(remaining, left[c]); ++q) {
          take[c] = q;
          self(self, c + 1, remaining - q, acc + q * cost[r][c]);
        }
      };
      rec(rec, 0, demand[r], base);
    }
    frontier = std::move(next);
  }
  double best = inf;
  for (const auto& [left, v] : frontier) best = std::min(best, v);
  return best;
}

// Solves the square system A x = b by Gaussian elimination with partial
// pivoting; false if singular.
inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-10) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

struct VertexResult {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
};

// Minimum of a bounded LP over all basic solutions: every choice of n tight
// rows among constraints and finite bounds (equalities always tight).
inline VertexResult lp_vertex_optimum(const coexist::LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<bool> is_eq;
  for (const auto& c : lp.constraints) {
    rows.push_back(c.coefficients);
    rhs.push_back(c.rhs);
    is_eq.push_back(c.relation == coexist::Relation::Equal);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto [lo, hi] = lp.bounds.empty() ? std::pair{0.0, coexist::kInfinity} : lp.bounds[j];
    std::vector<double> unit(n, 0.0);
    unit[j] = 1.0;
    if (std::isfinite(lo)) { rows.push_back(unit); rhs.push_back(lo); is_eq.push_back(false); }
    if (std::isfinite(hi)) { rows.push_back(unit); rhs.push_back(hi); is_eq.push_back(false); }
  }
  VertexResult best;
  const std::size_t R = rows.size();
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (pick.size() == n) {
      for (std::size_t i = 0; i < R; ++i) {
        if (is_eq[i] && std::find(pick.begin(), pick.end(), i) == pick.end()) return;
      }
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (std::size_t i : pick) { a.push_back(rows[i]); b.push_back(rhs[i]); }
      std::vector<double> x;
      if (!solve_square(a, b, x)) return;
      if (coexist::max_violation(lp, x) > 1e-7) return;
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * x[j];
      best.feasible = true;
      best.value = std::min(best.value, v);
      return;
    }
    for (std::size_t i = from; i < R; ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

// Sum of |mean(total) - total_e| / t over UEs for a binary owner vector.
inline double deviation_sum(const std::vector<std::size_t>& owner, const std::vector<double>& cum,
                            const std::vector<double>& rb_rate, std::size_t t) {
  const std::size_t E = cum.size();
  std::vector<double> total = cum;
  for (std::size_t e : owner) total[e] += rb_rate[e];
  double mean = 0.0;
  for (double v : total) mean += v;
  mean /= static_cast<double>(E);
  double s = 0.0;
  for (double v : total) s += std::abs(mean - v);
  return s / static_cast<double>(t);
}

// Exhaustive minimum of deviation_sum over assignments of K RBs in which
// every UE holds at least one RB.
inline double best_binary_deviation(std::size_t K, const std::vector<double>& cum,
                                    const std::vector<double>& rb_rate, std::size_t t) {
  const std::size_t E = cum.size();
  std::vector<std::size_t> owner(K, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::size_t> held(E, 0);
    for (std::size_t e : owner) ++held[e];
    if (std::all_of(held.begin(), held.end(), [](std::size_t h) { return h > 0; })) {
      best = std::min(best, deviation_sum(owner, cum, rb_rate, t));
    }
    std::size_t i = 0;
    while (i < K && ++owner[i] == E) owner[i++] = 0;
    if (i == K) break;
  }
  return best;
}

// Penalty evaluated in long double, term by term.
inline long double penalty_extended(const coexist::Matrix<double>& a, long double eps,
                                    long double p) {
  const std::size_t E = a.rows();
  const long double c = std::pow(1.0L + eps, p) + static_cast<long double>(E - 1) * std::pow(eps, p);
  long double total = 0.0L;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    long double col = 0.0L;
    for (std::size_t e = 0; e < E; ++e) col += std::pow(static_cast<long double>(a(e, k)) + eps, p);
    total += col - c;
  }
  return total;
}

}  // namespace oracle
