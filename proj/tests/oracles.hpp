#pragma once

// Test-only reference computations. Nothing here shares code with the
// library paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "lore/graph.hpp"

namespace lore::oracle {

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  return ev;
}

inline double dense_spectral_norm(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1.0;
  double best = 0.0;
  for (double v : symmetric_eigenvalues(a)) best = std::max(best, std::abs(v));
  return best;
}

inline bool connected(const Graph& g) {
  if (g.num_nodes() == 0) return true;
  std::vector<char> seen(g.num_nodes(), 0);
  std::queue<NodeId> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    for (const auto& nb : g.neighbors(v)) {
      if (!seen[nb.node]) {
        seen[nb.node] = 1;
        ++count;
        q.push(nb.node);
      }
    }
  }
  return count == g.num_nodes();
}

/// Independence by checking every node pair against the adjacency matrix.
inline bool independent_by_pairs(const std::vector<NodeId>& set, const Graph& g) {
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      if (g.has_edge(set[a], set[b])) return false;
  return true;
}

/// Naive step map over an explicit edge list (summing per edge, not per
/// neighbor list).
inline std::vector<double> step_by_edges(const std::vector<double>& x, const std::vector<Edge>& edges, double eta,
                                         double beta) {
  std::vector<double> pressure(x.size(), 0.0);
  for (const auto& e : edges) {
    pressure[e.u] += x[e.v];
    pressure[e.v] += x[e.u];
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::clamp(x[i] + eta * (1.0 - beta * pressure[i]), 0.0, 1.0);
  }
  return out;
}

}  // namespace lore::oracle
