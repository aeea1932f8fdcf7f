#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coexist/model.hpp"

namespace coexist {

/**
 * @brief Transportation instance: rows are demands, columns are supplies.
 *
 * After balance() the demand and supply totals agree; a trailing all-zero
 * cost row absorbs unused supply when `slack_row` is set.
 */
struct TransportProblem {
  Matrix<double> cost;
  std::vector<std::int64_t> demand;
  std::vector<std::int64_t> supply;
  bool slack_row = false;

  std::size_t rows() const { return demand.size(); }
  std::size_t cols() const { return supply.size(); }
};

/// Basic feasible solution with its MODI potentials.
struct Tableau {
  Matrix<std::int64_t> chi;
  Matrix<std::uint8_t> basic;
  std::vector<double> row_potential;
  std::vector<double> col_potential;

  std::size_t basis_size() const;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Appends a zero-cost slack demand row for the supply surplus.
/// Throws TransportError when demand exceeds supply.
TransportProblem balance(TransportProblem p);

/// Minimum-cell-cost initial basic feasible solution of a balanced problem.
/// Ties go to the lexicographically smallest (row, col) cell.
Tableau mcc_initial(const TransportProblem& p);

/// Fills row/column potentials from the basic cells, pinning row 0 to zero.
void compute_potentials(const TransportProblem& p, Tableau& t);

/// MODI optimality test with stepping-stone reallocation until every
/// reduced cost c - x - y is non-negative.
Tableau modi_optimize(const TransportProblem& p, Tableau t);

double tableau_cost(const TransportProblem& p, const Tableau& t);

struct TransportSolution {
  /// Allocation over the original demand rows (slack row dropped).
  Matrix<std::int64_t> assignment;
  double cost = 0.0;
  TransportProblem balanced;
  Tableau tableau;
};

TransportSolution solve_transport(const Matrix<double>& cost,
                                  const std::vector<std::int64_t>& demand,
                                  const std::vector<std::int64_t>& supply);

}  // namespace coexist
