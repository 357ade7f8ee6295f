#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "lore/active_set.hpp"
#include "lore/errors.hpp"
#include "lore/graph.hpp"
#include "lore/state.hpp"

namespace lore {

/// Cached summary of the omitted interactions A \ M_t, captured at refresh.
struct BathCache {
  std::vector<double> s_hat;  // omitted-neighbor pressure sum_{j : (i,j) in A\M} x_j
  std::vector<double> alpha;  // coverage d_i(M) / d_i(A), 1 for isolated nodes
  std::vector<double> scale;  // d_i(A) / max(d_i(A) - d_i(M), 1)
  std::size_t refreshed_at = 0;
};

[[nodiscard]] inline BathCache refresh_bath_cache(const SolverState& state, const Graph& g, const ActiveSet& active) {
  check_state(state, g);
  const std::size_t n = g.num_nodes();
  BathCache cache;
  cache.s_hat.assign(n, 0.0);
  cache.alpha.assign(n, 1.0);
  cache.scale.assign(n, 1.0);
  cache.refreshed_at = state.t;
  const auto in_cluster = active.mask(g.num_edges());
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t full = g.degree(i);
    if (full == 0) continue;
    std::size_t covered = 0;
    double omitted = 0.0;
    for (const auto& nb : g.neighbors(i)) {
      if (in_cluster[nb.edge]) {
        ++covered;
      } else {
        omitted += state.x[nb.node];
      }
    }
    cache.s_hat[i] = omitted;
    cache.alpha[i] = static_cast<double>(covered) / static_cast<double>(full);
    cache.scale[i] = static_cast<double>(full) / static_cast<double>(std::max<std::size_t>(full - covered, 1));
  }
  return cache;
}

/// Coverage-weighted blend of the cluster update with the bath signal
///   g_i = clip(x_i + eta (1 - beta s_hat_i scale_i)),
///   out_i = clip(alpha_i * cluster_i + (1 - alpha_i) * g_i).
[[nodiscard]] inline std::vector<double> apply_recall(std::span<const double> cluster_update, const SolverState& state,
                                                      const BathCache& cache, const DynamicsConfig& cfg,
                                                      EvalCounter* counter = nullptr) {
  const std::size_t n = state.x.size();
  if (cluster_update.size() != n || cache.alpha.size() != n || cache.s_hat.size() != n || cache.scale.size() != n) {
    throw UsageError("apply_recall: shape mismatch");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = cache.alpha[i];
    const double g = node_update(state.x[i], cache.s_hat[i] * cache.scale[i], cfg);
    out[i] = clip01(a * cluster_update[i] + (1.0 - a) * g);
  }
  if (counter != nullptr) counter->recall_terms += n;
  return out;
}

}  // namespace lore
