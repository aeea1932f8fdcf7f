#include <doctest.h>

#include <random>

#include "coexist/transport.hpp"
#include "oracles.hpp"

using namespace coexist;

namespace {

Matrix<double> make_cost(const std::vector<std::vector<double>>& rows) {
  Matrix<double> m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

TransportProblem make(const std::vector<std::vector<double>>& c, std::vector<std::int64_t> d,
                      std::vector<std::int64_t> s) {
  return TransportProblem{make_cost(c), std::move(d), std::move(s)};
}

void check_tableau(const TransportProblem& p, const Tableau& t) {
  for (std::size_t r = 0; r < p.rows(); ++r) CHECK(t.chi.row_sum(r) == p.demand[r]);
  for (std::size_t c = 0; c < p.cols(); ++c) CHECK(t.chi.col_sum(c) == p.supply[c]);
  CHECK(t.basis_size() == p.rows() + p.cols() - 1);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    for (std::size_t c = 0; c < p.cols(); ++c) {
      CHECK(t.chi(r, c) >= 0);
      if (t.chi(r, c) > 0) CHECK(t.basic(r, c) == 1);
    }
  }
}

}  // namespace

TEST_CASE("balancing appends a zero-cost slack row") {
  TransportProblem b = balance(make({{5}}, {2}, {3}));
  CHECK(b.slack_row);
  CHECK(b.demand == std::vector<std::int64_t>{2, 1});
  CHECK(b.cost(1, 0) == 0.0);

  b = balance(make({{1, 2}, {3, 4}}, {2, 2}, {2, 2}));
  CHECK_FALSE(b.slack_row);
  CHECK(b.rows() == 2);

  b = balance(make({{1, 1, 1}, {1, 1, 1}}, {4, 3}, {3, 3, 3}));
  CHECK(b.demand.back() == 2);

  CHECK_THROWS_WITH_AS(balance(make({{1}}, {4}, {3})),
                       doctest::Contains("uRLLC demand exceeds RB supply"), TransportError);
}

TEST_CASE("minimum cell cost start") {
  const TransportProblem p1 = balance(make({{5}}, {2}, {3}));
  const Tableau t1 = mcc_initial(p1);
  CHECK(t1.chi(0, 0) == 2);
  CHECK(t1.chi(1, 0) == 1);
  CHECK(tableau_cost(p1, t1) == 10.0);

  const TransportProblem p2 = balance(make({{1, 2}, {3, 1}}, {2, 2}, {2, 2}));
  const Tableau t2 = mcc_initial(p2);
  CHECK(t2.chi(0, 0) == 2);
  CHECK(t2.chi(1, 1) == 2);
  CHECK(t2.chi(0, 1) == 0);
  CHECK(tableau_cost(p2, t2) == 4.0);
  check_tableau(p2, t2);  // degenerate: a zero cell keeps the basis at 3

  // Ties resolve to the lexicographically first cell and replay identically.
  const TransportProblem p3 = balance(make({{1, 1}, {1, 1}}, {1, 1}, {1, 1}));
  const Tableau a = mcc_initial(p3), b = mcc_initial(p3);
  CHECK(a.chi == b.chi);
  CHECK(a.chi(0, 0) == 1);
}

TEST_CASE("MODI reaches the enumerated optimum") {
  const TransportProblem p = balance(make({{2, 5, 1}, {4, 1, 3}}, {4, 3}, {3, 3, 3}));
  const Tableau t = modi_optimize(p, mcc_initial(p));
  CHECK(tableau_cost(p, t) == 8.0);
  check_tableau(p, t);

  // Fixed point on an optimal tableau.
  const Tableau again = modi_optimize(p, t);
  CHECK(again.chi == t.chi);
}

TEST_CASE("MODI terminates with feasible duals on random instances") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> cost(0, 9), marg(0, 6), dim(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t R = dim(rng), C = dim(rng);
    std::vector<std::vector<double>> c(R, std::vector<double>(C));
    for (auto& row : c) for (double& v : row) v = cost(rng);
    std::vector<std::int64_t> s(C), d(R);
    for (auto& v : s) v = marg(rng);
    std::int64_t left = std::accumulate(s.begin(), s.end(), std::int64_t{0});
    for (auto& v : d) {
      v = std::min<std::int64_t>(marg(rng), left);
      left -= v;
    }
    const TransportProblem p = balance(make(c, d, s));
    const Tableau start = mcc_initial(p);
    check_tableau(p, start);
    const Tableau t = modi_optimize(p, start);
    check_tableau(p, t);
    CHECK(tableau_cost(p, t) <= tableau_cost(p, start));
    for (std::size_t r = 0; r < p.rows(); ++r) {
      for (std::size_t k = 0; k < p.cols(); ++k) {
        const double reduced = p.cost(r, k) - t.row_potential[r] - t.col_potential[k];
        if (t.basic(r, k)) CHECK(std::abs(reduced) <= 1e-9);
        else CHECK(reduced >= -1e-9);
      }
    }
    std::vector<int> di(d.begin(), d.end()), si(s.begin(), s.end());
    CHECK(tableau_cost(p, t) == oracle::transport_optimum(c, di, si));
  }
}

TEST_CASE("solve_transport drops the slack row") {
  const TransportSolution sol = solve_transport(make_cost({{3, 1}}), {2}, {2, 2});
  CHECK(sol.assignment.rows() == 1);
  CHECK(sol.assignment(0, 1) == 2);
  CHECK(sol.cost == 2.0);

  const TransportSolution none = solve_transport(Matrix<double>(0, 3), {}, {1, 2, 3});
  CHECK(none.assignment.rows() == 0);
  CHECK(none.cost == 0.0);

  const TransportSolution flat =
      solve_transport(make_cost({{4, 4, 4}, {4, 4, 4}}), {2, 3}, {2, 2, 2});
  CHECK(flat.cost == 4.0 * 5);
}
