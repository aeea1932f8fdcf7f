#include "coexist/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coexist {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "OPTIMAL";
    case LpStatus::Infeasible: return "INFEASIBLE";
    case LpStatus::Unbounded: return "UNBOUNDED";
    case LpStatus::CycleSuspected: return "CYCLE_SUSPECTED";
  }
  return "UNKNOWN";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-13;
constexpr double kFeasTol = 1e-9;
constexpr std::size_t kDegenerateStreak = 50;
constexpr std::size_t kRefreshEvery = 64;

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

// How an original variable is expressed through internal columns.
struct VarMap {
  enum Kind { Shift, Reflect, Split } kind;
  double offset;            // lo for Shift, hi for Reflect
  std::size_t col;          // first internal column
};

}  // namespace

struct SimplexSolver::Impl {
  std::size_t n_orig = 0;
  std::size_t n_cons = 0;
  std::vector<VarMap> map;
  std::vector<double> orig_objective;

  std::size_t m = 0;        // rows
  std::size_t n = 0;        // internal columns incl. slacks and artificials
  std::size_t first_art = 0;
  std::vector<double> rhs;  // normalized right-hand side
  std::vector<std::vector<std::pair<std::size_t, double>>> cols;  // normalized A, non-artificial
  std::vector<std::size_t> init_col;

  std::vector<double> tab;  // m x n
  std::vector<double> xb;
  std::vector<std::size_t> basis;
  std::vector<VarState> state;
  std::vector<double> upper;
  std::vector<double> cost;
  std::vector<double> reduced;
  bool solved = false;
  std::size_t iterations = 0;
  std::size_t cap = 0;

  double& at(std::size_t i, std::size_t j) { return tab[i * n + j]; }

  explicit Impl(const LinearProgram& lp);
  void set_objective(const std::vector<double>& obj);
  void compute_reduced();
  void pivot(std::size_t r, std::size_t j);
  void refresh_basic_values();
  LpStatus iterate(bool allow_artificial);
  LpResult extract(LpStatus st) const;
  std::vector<double> internal_values() const;
};

SimplexSolver::Impl::Impl(const LinearProgram& lp) {
  n_orig = lp.objective.size();
  n_cons = lp.constraints.size();
  if (!lp.bounds.empty() && lp.bounds.size() != n_orig) {
    throw std::invalid_argument("LP bounds size differs from objective size");
  }
  for (std::size_t i = 0; i < n_cons; ++i) {
    if (lp.constraints[i].coefficients.size() != n_orig) {
      throw std::invalid_argument("LP constraint " + std::to_string(i) +
                                  " has wrong coefficient count");
    }
    if (!std::isfinite(lp.constraints[i].rhs)) {
      throw std::invalid_argument("LP constraint rhs must be finite");
    }
  }
  orig_objective = lp.objective;

  // Internal structural columns.
  std::size_t ns = 0;
  std::vector<double> col_upper;
  map.reserve(n_orig);
  for (std::size_t j = 0; j < n_orig; ++j) {
    double lo = 0.0, hi = kInfinity;
    if (!lp.bounds.empty()) std::tie(lo, hi) = lp.bounds[j];
    if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInfinity || hi == -kInfinity) {
      throw std::invalid_argument("LP variable " + std::to_string(j) + " has invalid bounds");
    }
    if (std::isfinite(lo)) {
      map.push_back({VarMap::Shift, lo, ns++});
      col_upper.push_back(hi - lo);
    } else if (std::isfinite(hi)) {
      map.push_back({VarMap::Reflect, hi, ns++});
      col_upper.push_back(kInfinity);
    } else {
      map.push_back({VarMap::Split, 0.0, ns});
      ns += 2;
      col_upper.push_back(kInfinity);
      col_upper.push_back(kInfinity);
    }
  }

  m = n_cons;
  // Dense normalized rows over structural columns, then slacks.
  std::vector<std::vector<double>> rows(m, std::vector<double>(ns, 0.0));
  rhs.assign(m, 0.0);
  std::vector<int> slack_sign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& c = lp.constraints[i];
    double b = c.rhs;
    for (std::size_t j = 0; j < n_orig; ++j) {
      const double a = c.coefficients[j];
      if (a == 0.0) continue;
      const VarMap& vm = map[j];
      switch (vm.kind) {
        case VarMap::Shift:
          rows[i][vm.col] = a;
          b -= a * vm.offset;
          break;
        case VarMap::Reflect:
          rows[i][vm.col] = -a;
          b -= a * vm.offset;
          break;
        case VarMap::Split:
          rows[i][vm.col] = a;
          rows[i][vm.col + 1] = -a;
          break;
      }
    }
    rhs[i] = b;
    slack_sign[i] = c.relation == Relation::LessEqual ? 1
                    : c.relation == Relation::GreaterEqual ? -1 : 0;
  }

  std::size_t n_slack = 0;
  for (int s : slack_sign) n_slack += s != 0;
  std::vector<std::size_t> slack_col(m, 0);
  {
    std::size_t next = ns;
    for (std::size_t i = 0; i < m; ++i) {
      if (slack_sign[i] != 0) slack_col[i] = next++;
    }
  }
  const std::size_t n_plain = ns + n_slack;

  // Flip rows so every rhs is non-negative; decide which need an artificial.
  std::vector<double> row_sign(m, 1.0);
  std::vector<bool> needs_art(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0) row_sign[i] = -1.0;
    const double s = slack_sign[i] * row_sign[i];
    needs_art[i] = !(s > 0);
  }
  std::size_t n_art = 0;
  for (bool b : needs_art) n_art += b;

  first_art = n_plain;
  n = n_plain + n_art;
  tab.assign(m * n, 0.0);
  cols.assign(n_plain, {});
  init_col.assign(m, 0);
  upper.assign(n, kInfinity);
  for (std::size_t j = 0; j < ns; ++j) upper[j] = col_upper[j];

  std::size_t next_art = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    const double sg = row_sign[i];
    for (std::size_t j = 0; j < ns; ++j) {
      const double a = rows[i][j] * sg;
      if (a != 0.0) {
        at(i, j) = a;
        cols[j].emplace_back(i, a);
      }
    }
    if (slack_sign[i] != 0) {
      const double a = slack_sign[i] * sg;
      at(i, slack_col[i]) = a;
      cols[slack_col[i]].emplace_back(i, a);
    }
    rhs[i] *= sg;
    if (needs_art[i]) {
      at(i, next_art) = 1.0;
      init_col[i] = next_art++;
    } else {
      init_col[i] = slack_col[i];
    }
  }

  basis = init_col;
  state.assign(n, VarState::AtLower);
  for (std::size_t i = 0; i < m; ++i) state[basis[i]] = VarState::Basic;
  xb = rhs;
  cost.assign(n, 0.0);
  reduced.assign(n, 0.0);
  cap = 50 * (n_orig + n_cons) + 50;
}

void SimplexSolver::Impl::set_objective(const std::vector<double>& obj) {
  std::fill(cost.begin(), cost.end(), 0.0);
  for (std::size_t j = 0; j < n_orig; ++j) {
    const VarMap& vm = map[j];
    switch (vm.kind) {
      case VarMap::Shift: cost[vm.col] = obj[j]; break;
      case VarMap::Reflect: cost[vm.col] = -obj[j]; break;
      case VarMap::Split:
        cost[vm.col] = obj[j];
        cost[vm.col + 1] = -obj[j];
        break;
    }
  }
}

void SimplexSolver::Impl::compute_reduced() {
  reduced = cost;
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = cost[basis[i]];
    if (cb == 0.0) continue;
    const double* row = &tab[i * n];
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] != 0.0) reduced[j] -= cb * row[j];
    }
  }
  for (std::size_t i = 0; i < m; ++i) reduced[basis[i]] = 0.0;
}

void SimplexSolver::Impl::pivot(std::size_t r, std::size_t j) {
  double* prow = &tab[r * n];
  const double inv = 1.0 / prow[j];
  std::vector<std::size_t> nz;
  nz.reserve(64);
  for (std::size_t c = 0; c < n; ++c) {
    if (prow[c] != 0.0) {
      prow[c] *= inv;
      if (std::abs(prow[c]) < kDropTol) {
        prow[c] = 0.0;
      } else {
        nz.push_back(c);
      }
    }
  }
  prow[j] = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == r) continue;
    double* row = &tab[i * n];
    const double f = row[j];
    if (f == 0.0) continue;
    for (std::size_t c : nz) {
      double v = row[c] - f * prow[c];
      row[c] = std::abs(v) < kDropTol ? 0.0 : v;
    }
    row[j] = 0.0;
  }
  const double f = reduced[j];
  if (f != 0.0) {
    for (std::size_t c : nz) reduced[c] -= f * prow[c];
  }
  reduced[j] = 0.0;
  basis[r] = j;
}

void SimplexSolver::Impl::refresh_basic_values() {
  std::vector<double> beff = rhs;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (state[j] != VarState::AtUpper) continue;
    for (const auto& [i, a] : cols[j]) beff[i] -= a * upper[j];
  }
  std::fill(xb.begin(), xb.end(), 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double b = beff[k];
    if (b == 0.0) continue;
    const std::size_t c = init_col[k];
    for (std::size_t i = 0; i < m; ++i) {
      const double v = tab[i * n + c];
      if (v != 0.0) xb[i] += v * b;
    }
  }
}

LpStatus SimplexSolver::Impl::iterate(bool allow_artificial) {
  double scale = 1.0;
  for (double c : cost) scale = std::max(scale, std::abs(c));
  const double dtol = 1e-9 * scale;
  const std::size_t limit = allow_artificial ? n : first_art;
  bool bland = false;
  std::size_t degenerate_run = 0;
  std::size_t since_refresh = 0;

  while (true) {
    if (iterations >= cap) return LpStatus::CycleSuspected;

    std::size_t enter = n;
    double best = 0.0;
    for (std::size_t j = 0; j < limit; ++j) {
      const VarState s = state[j];
      if (s == VarState::Basic) continue;
      double score = 0.0;
      if (s == VarState::AtLower) {
        if (upper[j] <= 0.0) continue;
        if (reduced[j] < -dtol) score = -reduced[j];
      } else if (reduced[j] > dtol) {
        score = reduced[j];
      }
      if (score <= 0.0) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (score > best) {
        best = score;
        enter = j;
      }
    }
    if (enter == n) return LpStatus::Optimal;

    const double dir = state[enter] == VarState::AtLower ? 1.0 : -1.0;
    // Harris ratio test: bound the step with slightly relaxed limits, then
    // take the largest pivot among rows whose exact limit fits under it.
    // In anti-cycling mode, ties go to the smallest basic index instead.
    const auto row_limit = [&](std::size_t i, double slack, double& lim, bool& to_upper) {
      const double a = dir * tab[i * n + enter];
      if (a > kPivotTol) {
        lim = (std::max(0.0, xb[i]) + slack) / a;
        to_upper = false;
        return true;
      }
      if (a < -kPivotTol && std::isfinite(upper[basis[i]])) {
        lim = (std::max(0.0, upper[basis[i]] - xb[i]) + slack) / -a;
        to_upper = true;
        return true;
      }
      return false;
    };
    double bound = upper[enter];
    for (std::size_t i = 0; i < m; ++i) {
      double lim;
      bool to_upper;
      if (row_limit(i, kFeasTol, lim, to_upper)) bound = std::min(bound, lim);
    }
    double theta = upper[enter];
    std::size_t leave = m;
    bool leave_to_upper = false;
    double pivot_mag = 0.0;
    if (std::isfinite(bound) && bound < upper[enter]) {
      for (std::size_t i = 0; i < m; ++i) {
        double lim;
        bool to_upper;
        if (!row_limit(i, 0.0, lim, to_upper) || lim > bound) continue;
        const double mag = std::abs(tab[i * n + enter]);
        const bool better = leave == m ||
                            (bland ? basis[i] < basis[leave] : mag > pivot_mag);
        if (better) {
          theta = lim;
          leave = i;
          leave_to_upper = to_upper;
          pivot_mag = mag;
        }
      }
    }
    if (!std::isfinite(theta)) return LpStatus::Unbounded;

    ++iterations;
    if (theta <= 1e-12) {
      if (++degenerate_run >= kDegenerateStreak) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    if (theta > 0.0) {
      for (std::size_t i = 0; i < m; ++i) {
        const double a = tab[i * n + enter];
        if (a != 0.0) xb[i] -= dir * theta * a;
      }
    }
    if (leave == m) {
      state[enter] = state[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      continue;
    }
    const std::size_t out = basis[leave];
    state[out] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
    xb[leave] = dir > 0 ? theta : upper[enter] - theta;
    state[enter] = VarState::Basic;
    pivot(leave, enter);
    if (++since_refresh >= kRefreshEvery) {
      refresh_basic_values();
      compute_reduced();
      since_refresh = 0;
    }
  }
}

std::vector<double> SimplexSolver::Impl::internal_values() const {
  std::vector<double> y(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (state[j] == VarState::AtUpper) y[j] = upper[j];
  }
  for (std::size_t i = 0; i < m; ++i) y[basis[i]] = xb[i];
  return y;
}

LpResult SimplexSolver::Impl::extract(LpStatus st) const {
  LpResult res;
  res.status = st;
  res.iterations = iterations;
  if (st != LpStatus::Optimal) return res;
  const std::vector<double> y = internal_values();
  res.x.resize(n_orig);
  for (std::size_t j = 0; j < n_orig; ++j) {
    const VarMap& vm = map[j];
    switch (vm.kind) {
      case VarMap::Shift: {
        double v = vm.offset + std::max(0.0, y[vm.col]);
        if (std::isfinite(upper[vm.col])) v = std::min(v, vm.offset + upper[vm.col]);
        res.x[j] = v;
        break;
      }
      case VarMap::Reflect: res.x[j] = vm.offset - std::max(0.0, y[vm.col]); break;
      case VarMap::Split: res.x[j] = y[vm.col] - y[vm.col + 1]; break;
    }
  }
  double v = 0.0;
  for (std::size_t j = 0; j < n_orig; ++j) v += orig_objective[j] * res.x[j];
  res.value = v;
  return res;
}

SimplexSolver::SimplexSolver(const LinearProgram& lp) : impl_(std::make_unique<Impl>(lp)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LpResult SimplexSolver::solve() {
  Impl& s = *impl_;
  // Phase 1: minimize the sum of artificials.
  if (s.first_art < s.n) {
    std::fill(s.cost.begin(), s.cost.end(), 0.0);
    for (std::size_t j = s.first_art; j < s.n; ++j) s.cost[j] = 1.0;
    s.compute_reduced();
    const LpStatus st = s.iterate(true);
    if (st == LpStatus::CycleSuspected) return s.extract(st);
    s.refresh_basic_values();
    double infeas = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < s.m; ++i) {
      scale = std::max(scale, std::abs(s.rhs[i]));
      if (s.basis[i] >= s.first_art) infeas += std::max(0.0, s.xb[i]);
    }
    if (infeas > 1e-7 * scale) return s.extract(LpStatus::Infeasible);
    // Drive remaining zero-level artificials out of the basis.
    for (std::size_t r = 0; r < s.m; ++r) {
      if (s.basis[r] < s.first_art) continue;
      std::size_t best = s.n;
      double mag = kPivotTol;
      for (std::size_t j = 0; j < s.first_art; ++j) {
        if (s.state[j] == VarState::Basic) continue;
        const double a = std::abs(s.at(r, j));
        if (a > mag) {
          mag = a;
          best = j;
        }
      }
      if (best == s.n) continue;  // redundant row
      const std::size_t art = s.basis[r];
      s.xb[r] = s.state[best] == VarState::AtUpper ? s.upper[best] : 0.0;
      s.state[art] = VarState::AtLower;
      s.state[best] = VarState::Basic;
      s.pivot(r, best);
    }
    for (std::size_t j = s.first_art; j < s.n; ++j) s.upper[j] = 0.0;
    for (std::size_t i = 0; i < s.m; ++i) {
      if (s.basis[i] >= s.first_art) s.xb[i] = 0.0;
    }
  }
  s.set_objective(s.orig_objective);
  s.compute_reduced();
  const LpStatus st = s.iterate(false);
  s.refresh_basic_values();
  s.solved = st == LpStatus::Optimal;
  return s.extract(st);
}

LpResult SimplexSolver::reoptimize(const std::vector<double>& objective) {
  Impl& s = *impl_;
  if (objective.size() != s.n_orig) {
    throw std::invalid_argument("reoptimize: objective size differs");
  }
  s.orig_objective = objective;
  if (!s.solved) return solve();
  s.iterations = 0;
  s.set_objective(objective);
  s.compute_reduced();
  const LpStatus st = s.iterate(false);
  s.refresh_basic_values();
  s.solved = st == LpStatus::Optimal;
  return s.extract(st);
}

LpResult solve_lp(const LinearProgram& lp) {
  SimplexSolver solver(lp);
  return solver.solve();
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const Constraint& c : lp.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coefficients[j] * x[j];
    double v = 0.0;
    switch (c.relation) {
      case Relation::LessEqual: v = lhs - c.rhs; break;
      case Relation::GreaterEqual: v = c.rhs - lhs; break;
      case Relation::Equal: v = std::abs(lhs - c.rhs); break;
    }
    worst = std::max(worst, v);
  }
  for (std::size_t j = 0; j < lp.bounds.size() && j < x.size(); ++j) {
    worst = std::max(worst, lp.bounds[j].first - x[j]);
    worst = std::max(worst, x[j] - lp.bounds[j].second);
  }
  if (lp.bounds.empty()) {
    for (double v : x) worst = std::max(worst, -v);
  }
  return worst;
}

}  // namespace coexist
