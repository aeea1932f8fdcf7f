#include "coexist/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace coexist {

std::size_t Tableau::basis_size() const {
  std::size_t n = 0;
  for (auto b : basic.data()) n += b;
  return n;
}

TransportProblem balance(TransportProblem p) {
  if (p.cost.rows() != p.rows() || (p.rows() > 0 && p.cost.cols() != p.cols())) {
    throw std::invalid_argument("transport cost matrix shape differs from marginals");
  }
  for (auto d : p.demand) {
    if (d < 0) throw std::invalid_argument("negative demand");
  }
  for (auto s : p.supply) {
    if (s < 0) throw std::invalid_argument("negative supply");
  }
  const std::int64_t total_d = std::accumulate(p.demand.begin(), p.demand.end(), std::int64_t{0});
  const std::int64_t total_s = std::accumulate(p.supply.begin(), p.supply.end(), std::int64_t{0});
  if (total_d > total_s) throw TransportError("uRLLC demand exceeds RB supply");
  if (total_d == total_s) return p;

  Matrix<double> cost(p.rows() + 1, p.cols(), 0.0);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    for (std::size_t c = 0; c < p.cols(); ++c) cost(r, c) = p.cost(r, c);
  }
  p.cost = std::move(cost);
  p.demand.push_back(total_s - total_d);
  p.slack_row = true;
  return p;
}

Tableau mcc_initial(const TransportProblem& p) {
  const std::size_t R = p.rows(), C = p.cols();
  Tableau t;
  t.chi = Matrix<std::int64_t>(R, C, 0);
  t.basic = Matrix<std::uint8_t>(R, C, 0);
  t.row_potential.assign(R, 0.0);
  t.col_potential.assign(C, 0.0);
  if (R == 0 || C == 0) return t;

  std::vector<std::int64_t> rem_d = p.demand, rem_s = p.supply;
  std::vector<bool> row_out(R, false), col_out(C, false);
  std::size_t rows_left = R, cols_left = C;

  while (rows_left > 0 && cols_left > 0) {
    std::size_t br = R, bc = C;
    for (std::size_t r = 0; r < R; ++r) {
      if (row_out[r]) continue;
      for (std::size_t c = 0; c < C; ++c) {
        if (col_out[c]) continue;
        if (br == R || p.cost(r, c) < p.cost(br, bc)) {
          br = r;
          bc = c;
        }
      }
    }
    const std::int64_t q = std::min(rem_d[br], rem_s[bc]);
    t.chi(br, bc) += q;
    t.basic(br, bc) = 1;
    rem_d[br] -= q;
    rem_s[bc] -= q;

    const bool row_done = rem_d[br] == 0;
    const bool col_done = rem_s[bc] == 0;
    if (row_done && col_done) {
      // Only one line is ruled out unless this is the last cell, so the
      // basis keeps rows + cols - 1 cells.
      if (rows_left == 1 && cols_left == 1) {
        row_out[br] = true;
        col_out[bc] = true;
        --rows_left;
        --cols_left;
      } else if (rows_left > 1) {
        row_out[br] = true;
        --rows_left;
      } else {
        col_out[bc] = true;
        --cols_left;
      }
    } else if (row_done) {
      row_out[br] = true;
      --rows_left;
    } else {
      col_out[bc] = true;
      --cols_left;
    }
  }
  return t;
}

namespace {

using Graph = std::vector<std::vector<std::size_t>>;

// Basis graph: nodes 0..R-1 are rows, R..R+C-1 are columns.
Graph basis_graph(const Tableau& t) {
  const std::size_t R = t.basic.rows(), C = t.basic.cols();
  Graph adj(R + C);
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      if (t.basic(r, c)) {
        adj[r].push_back(R + c);
        adj[R + c].push_back(r);
      }
    }
  }
  return adj;
}

void unlink(Graph& adj, std::size_t a, std::size_t b) {
  auto& v = adj[a];
  v.erase(std::find(v.begin(), v.end(), b));
}

// BFS over the basis tree from `root`; parent[root] stays R + C.
void tree_walk(const Graph& adj, std::size_t root, std::vector<std::size_t>& order,
               std::vector<std::size_t>& parent) {
  const std::size_t N = adj.size();
  order.clear();
  parent.assign(N, N);
  std::vector<bool> seen(N, false);
  seen[root] = true;
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t v = order[i];
    for (std::size_t w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      order.push_back(w);
    }
  }
}

void potentials_from(const TransportProblem& p, const Graph& adj, Tableau& t,
                     std::vector<std::size_t>& order, std::vector<std::size_t>& parent) {
  const std::size_t R = p.rows(), C = p.cols();
  tree_walk(adj, 0, order, parent);
  if (order.size() != R + C) throw TransportError("transport basis is not a spanning tree");
  t.row_potential[0] = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const std::size_t w = order[i], v = parent[w];
    if (v < R) {
      t.col_potential[w - R] = p.cost(v, w - R) - t.row_potential[v];
    } else {
      t.row_potential[w] = p.cost(w, v - R) - t.col_potential[v - R];
    }
  }
}

}  // namespace

void compute_potentials(const TransportProblem& p, Tableau& t) {
  const std::size_t R = p.rows(), C = p.cols();
  t.row_potential.assign(R, 0.0);
  t.col_potential.assign(C, 0.0);
  if (R == 0 || C == 0) return;
  std::vector<std::size_t> order, parent;
  potentials_from(p, basis_graph(t), t, order, parent);
}

Tableau modi_optimize(const TransportProblem& p, Tableau t) {
  const std::size_t R = p.rows(), C = p.cols();
  t.row_potential.assign(R, 0.0);
  t.col_potential.assign(C, 0.0);
  if (R == 0 || C == 0) return t;

  double scale = 1.0;
  for (double c : p.cost.data()) scale = std::max(scale, std::abs(c));
  const double tol = 1e-9 * scale;
  const std::size_t cap = 10 * R * C + 10;
  Graph adj = basis_graph(t);
  std::vector<std::size_t> order, parent;

  for (std::size_t iter = 0;; ++iter) {
    potentials_from(p, adj, t, order, parent);
    std::size_t er = R, ec = C;
    double most = -tol;
    for (std::size_t r = 0; r < R; ++r) {
      const double x = t.row_potential[r];
      for (std::size_t c = 0; c < C; ++c) {
        if (t.basic(r, c)) continue;
        const double k = p.cost(r, c) - x - t.col_potential[c];
        if (k < most) {
          most = k;
          er = r;
          ec = c;
        }
      }
    }
    if (er == R) return t;
    if (iter >= cap) throw TransportError("MODI iteration cap reached");

    // Stepping-stone path: tree path from column node ec back to row node er.
    const std::size_t start = R + ec;
    tree_walk(adj, start, order, parent);
    if (parent[er] == R + C) throw TransportError("stepping-stone cycle not found");

    // Walk from ec to er; the i-th path cell gets sign - for even i.
    std::vector<std::size_t> nodes;
    for (std::size_t v = er; v != start; v = parent[v]) nodes.push_back(v);
    nodes.push_back(start);
    std::reverse(nodes.begin(), nodes.end());  // start (col ec) ... er

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const std::size_t a = nodes[i], b = nodes[i + 1];
      cells.emplace_back(a < R ? a : b, a < R ? b - R : a - R);
    }
    std::int64_t theta = -1;
    std::size_t donor = cells.size();
    for (std::size_t i = 0; i < cells.size(); i += 2) {
      const auto [r, c] = cells[i];
      if (theta < 0 || t.chi(r, c) < theta) {
        theta = t.chi(r, c);
        donor = i;
      }
    }
    t.chi(er, ec) += theta;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto [r, c] = cells[i];
      t.chi(r, c) += (i % 2 == 0) ? -theta : theta;
    }
    t.basic(er, ec) = 1;
    adj[er].push_back(R + ec);
    adj[R + ec].push_back(er);
    const auto [dr, dc] = cells[donor];
    t.basic(dr, dc) = 0;
    unlink(adj, dr, R + dc);
    unlink(adj, R + dc, dr);
  }
}

double tableau_cost(const TransportProblem& p, const Tableau& t) {
  double total = 0.0;
  for (std::size_t r = 0; r < p.rows(); ++r) {
    for (std::size_t c = 0; c < p.cols(); ++c) {
      total += p.cost(r, c) * static_cast<double>(t.chi(r, c));
    }
  }
  return total;
}

TransportSolution solve_transport(const Matrix<double>& cost,
                                  const std::vector<std::int64_t>& demand,
                                  const std::vector<std::int64_t>& supply) {
  TransportProblem p{cost, demand, supply, false};
  TransportSolution sol;
  sol.balanced = balance(std::move(p));
  sol.tableau = modi_optimize(sol.balanced, mcc_initial(sol.balanced));
  const std::size_t rows = demand.size();
  sol.assignment = Matrix<std::int64_t>(rows, supply.size(), 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < supply.size(); ++c) {
      sol.assignment(r, c) = sol.tableau.chi(r, c);
      sol.cost += cost(r, c) * static_cast<double>(sol.tableau.chi(r, c));
    }
  }
  return sol;
}

}  // namespace coexist
