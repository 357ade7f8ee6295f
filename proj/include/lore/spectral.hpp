#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lore/graph.hpp"

namespace lore {

struct SpectralEstimate {
  double lower = 0.0;  // ||A v|| / ||v||, never above ||A||_2
  double upper = 0.0;  // max_i (A v)_i / v_i, never below ||A||_2
  std::size_t iterations = 0;
};

/// Two-sided estimate of the adjacency spectral norm.
///
/// For a nonnegative symmetric A, ||A||_2 is the Perron root, and for any
/// strictly positive v it is bracketed by the Rayleigh-type ratio below and
/// the Collatz-Wielandt ratio above. Iterating with A + I keeps v positive
/// and removes the -lambda oscillation on bipartite graphs.
[[nodiscard]] inline SpectralEstimate spectral_norm_bracket(const Graph& g, double tol = 1e-10,
                                                           std::size_t max_iter = 10000) {
  const std::size_t n = g.num_nodes();
  SpectralEstimate est;
  if (g.num_edges() == 0) return est;

  std::vector<double> v(n, 1.0);
  std::vector<double> av(n);
  auto multiply = [&] {
    for (NodeId i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& nb : g.neighbors(i)) s += v[nb.node];
      av[i] = s;
    }
  };

  est.upper = static_cast<double>(g.max_degree());
  for (std::size_t it = 1; it <= max_iter; ++it) {
    multiply();
    double vv = 0.0, aa = 0.0, cw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      vv += v[i] * v[i];
      aa += av[i] * av[i];
      cw = std::max(cw, av[i] / v[i]);
    }
    est.lower = std::max(est.lower, std::sqrt(aa / vv));
    est.upper = std::min(est.upper, cw);
    est.iterations = it;
    if (est.upper - est.lower <= tol * est.upper) break;

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] += av[i];
      norm = std::max(norm, v[i]);
    }
    // Components far below the dominant one decay geometrically; stop
    // before any entry underflows and voids the upper bound.
    double smallest = norm;
    for (auto& x : v) {
      x /= norm;
      smallest = std::min(smallest, x);
    }
    if (smallest < 1e-250) break;
  }
  return est;
}

/// Certified upper bound on ||A||_2, capped by the maximum degree.
[[nodiscard]] inline double spectral_norm_upper(const Graph& g, double tol = 1e-10) {
  const auto est = spectral_norm_bracket(g, tol);
  return std::min(est.upper, static_cast<double>(g.max_degree()));
}

}  // namespace lore
