#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

namespace coexist {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Minimize objective . x subject to constraints and per-variable bounds.
/// An empty bounds list means every variable lies in [0, inf).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<std::pair<double, double>> bounds;

  std::size_t n_vars() const { return objective.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, CycleSuspected };

const char* to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/**
 * @brief Two-phase bounded-variable primal simplex on a dense tableau.
 *
 * Pricing is Dantzig's most-negative reduced cost; after a run of degenerate
 * pivots it falls back to Bland's smallest-index rule until the objective
 * moves again. The iteration cap is 50 x (variables + constraints).
 *
 * After a successful solve() the solver keeps its optimal basis, and
 * reoptimize() starts phase 2 from there for a new objective over the same
 * feasible region.
 */
class SimplexSolver {
 public:
  /// Throws std::invalid_argument on inconsistent dimensions or bounds.
  explicit SimplexSolver(const LinearProgram& lp);
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  LpResult solve();
  LpResult reoptimize(const std::vector<double>& objective);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpResult solve_lp(const LinearProgram& lp);

/// Largest violation of any constraint or bound at x.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace coexist
