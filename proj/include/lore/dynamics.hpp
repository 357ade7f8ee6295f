#pragma once

#include <cstddef>
#include <string_view>
#include <type_traits>
#include <vector>

#include "lore/active_set.hpp"
#include "lore/errors.hpp"
#include "lore/graph.hpp"
#include "lore/recall.hpp"
#include "lore/state.hpp"

namespace lore {

/// Version tag of the step/decode operators. Every run record carries it.
inline constexpr std::string_view kOperatorVersion = "conflict-descent/clip/greedy-decode-degree-repair/v1";

namespace detail {

template <typename NeighborRange>
[[nodiscard]] inline double pressure(const std::vector<double>& x, const NeighborRange& nbrs) {
  double s = 0.0;
  for (const auto& j : nbrs) {
    if constexpr (std::is_same_v<std::decay_t<decltype(j)>, Incidence>) {
      s += x[j.node];
    } else {
      s += x[j];
    }
  }
  return s;
}

inline SolverState advance(const SolverState& state, std::vector<double> next) {
  SolverState out;
  out.x = std::move(next);
  out.x_prev = state.x;
  out.t = state.t + 1;
  return out;
}

}  // namespace detail

/// One full-support step: every edge is evaluated.
[[nodiscard]] inline SolverState full_step(const SolverState& state, const Graph& g, const DynamicsConfig& cfg,
                                           EvalCounter* counter = nullptr) {
  check_state(state, g);
  std::vector<double> next(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    next[i] = node_update(state.x[i], detail::pressure(state.x, g.neighbors(i)), cfg);
  }
  if (counter != nullptr) {
    counter->node_terms += g.num_nodes();
    counter->messages += 2 * g.num_edges();
  }
  return detail::advance(state, std::move(next));
}

/// Cluster-only update: the neighbor sum ranges over M_t only. No recall.
[[nodiscard]] inline std::vector<double> cluster_update(const SolverState& state, const Graph& g,
                                                        const ActiveSet& active, const DynamicsConfig& cfg,
                                                        EvalCounter* counter = nullptr) {
  check_state(state, g);
  const auto& cluster = active.cluster();
  if (cluster.num_nodes() != g.num_nodes()) throw UsageError("active set was built for a different graph");
  std::vector<double> next(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    next[i] = node_update(state.x[i], detail::pressure(state.x, cluster.neighbors(i)), cfg);
  }
  if (counter != nullptr) {
    counter->node_terms += g.num_nodes();
    counter->messages += 2 * active.size();
  }
  return next;
}

/// Budgeted step. With recall enabled the cluster update is blended with
/// the cached bath signal; `bath` must then be supplied.
[[nodiscard]] inline SolverState budgeted_step(const SolverState& state, const Graph& g, const ActiveSet& active,
                                               const DynamicsConfig& cfg, const BathCache* bath = nullptr,
                                               EvalCounter* counter = nullptr) {
  if (cfg.recall_enabled && bath == nullptr) throw UsageError("budgeted_step: recall enabled without a bath cache");
  auto next = cluster_update(state, g, active, cfg, counter);
  if (cfg.recall_enabled) next = apply_recall(next, state, *bath, cfg, counter);
  return detail::advance(state, std::move(next));
}

/// Soft conflict energy over the full edge set: sum_{(i,j) in E} x_i x_j.
[[nodiscard]] inline double conflict_energy(const SolverState& state, const Graph& g) {
  check_state(state, g);
  double c = 0.0;
  for (const auto& e : g.edges()) c += state.x[e.u] * state.x[e.v];
  return c;
}

[[nodiscard]] inline double objective(const SolverState& state) {
  double s = 0.0;
  for (double v : state.x) s += v;
  return s;
}

}  // namespace lore
