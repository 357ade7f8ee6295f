#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lore/active_set.hpp"
#include "lore/dynamics.hpp"
#include "lore/errors.hpp"
#include "lore/graph.hpp"
#include "lore/recall.hpp"
#include "lore/routing.hpp"
#include "lore/spectral.hpp"
#include "lore/state.hpp"

namespace lore {

/// Slack allowed on e_{t+1} <= L e_t + ||delta_t||.
inline constexpr double kRecursionTolerance = 1e-9;

/// Lipschitz bound of x -> clip(x + eta (1 - beta A x)):
/// ||I - eta beta A||_2 <= 1 + eta beta ||A||_2 <= 1 + eta beta Delta_max.
[[nodiscard]] inline double lipschitz_bound(const Graph& g, const DynamicsConfig& cfg) {
  const double gain = cfg.eta * cfg.beta;
  return std::min(1.0 + gain * spectral_norm_upper(g), 1.0 + gain * static_cast<double>(g.max_degree()));
}

[[nodiscard]] inline double l2_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// eta beta || per-node sum of x_j over omitted neighbors ||_2: the
/// pre-clip interaction mass dropped by restricting the step to M_t.
[[nodiscard]] inline double omitted_message_mass(const SolverState& state, const Graph& g, const ActiveSet& active,
                                                 const DynamicsConfig& cfg) {
  check_state(state, g);
  const auto in_cluster = active.mask(g.num_edges());
  double s = 0.0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    double omitted = 0.0;
    for (const auto& nb : g.neighbors(i)) {
      if (!in_cluster[nb.edge]) omitted += state.x[nb.node];
    }
    s += omitted * omitted;
  }
  return cfg.eta * cfg.beta * std::sqrt(s);
}

struct BoundReport {
  std::vector<double> e;        // e_t, t = 0..T
  std::vector<double> delta;    // ||delta_t||, t = 0..T-1
  std::vector<double> eps_rho;  // omitted-message mass, t = 0..T-1
  std::vector<double> r;        // recall residual, zero with recall off
  std::vector<std::size_t> m_size;
  double L = 1.0;
  std::vector<std::size_t> violated_steps;  // t such that e_{t+1} exceeded the recursion
  std::vector<std::size_t> unrolled_violations;

  /// sum_k L^{T-1-k} ||delta_k||.
  [[nodiscard]] double unrolled_bound() const { return unrolled_bound_at(delta.size()); }

  [[nodiscard]] double unrolled_bound_at(std::size_t t) const {
    double b = 0.0;
    for (std::size_t k = 0; k < t; ++k) b = L * b + delta[k];
    return b;
  }

  /// (L^T - 1)/(L - 1) (eps_max + r_max), the coarse closed form.
  [[nodiscard]] double geometric_bound() const {
    const double eps_max = eps_rho.empty() ? 0.0 : *std::ranges::max_element(eps_rho);
    const double r_max = r.empty() ? 0.0 : *std::ranges::max_element(r);
    const auto steps = static_cast<double>(delta.size());
    const double series = L == 1.0 ? steps : (std::pow(L, steps) - 1.0) / (L - 1.0);
    return series * (eps_max + r_max);
  }
};

/// Advances a full-support and a budgeted trajectory in lockstep from the
/// same initial state and measures the per-step error decomposition. M_t is
/// routed from the budgeted trajectory.
[[nodiscard]] inline BoundReport paired_trajectory_report(const Graph& g, const DynamicsConfig& cfg,
                                                          const BudgetConfig& budget, const SolverState& init_full,
                                                          const SolverState& init_budgeted,
                                                          std::uint64_t routing_seed) {
  cfg.validate();
  budget.validate();
  check_state(init_full, g);
  check_state(init_budgeted, g);
  if (!(init_full == init_budgeted)) throw UsageError("paired trajectories must share the initial state");

  BoundReport rep;
  rep.L = lipschitz_bound(g, cfg);
  Router router(g, budget, routing_seed);
  std::optional<BathCache> bath;

  SolverState full = init_full;
  SolverState approx = init_budgeted;
  rep.e.push_back(l2_distance(approx.x, full.x));
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    const bool refresh = router.is_refresh_step(t);
    const ActiveSet& active = router.route(approx, t);
    if (cfg.recall_enabled && (refresh || !bath)) bath = refresh_bath_cache(approx, g, active);

    const SolverState exact_here = full_step(approx, g, cfg);
    const auto cluster = cluster_update(approx, g, active, cfg);
    std::vector<double> next = cluster;
    double r = 0.0;
    if (cfg.recall_enabled) {
      next = apply_recall(cluster, approx, *bath, cfg);
      r = l2_distance(next, cluster);
    }
    rep.delta.push_back(l2_distance(next, exact_here.x));
    rep.eps_rho.push_back(omitted_message_mass(approx, g, active, cfg));
    rep.r.push_back(r);
    rep.m_size.push_back(active.size());

    full = full_step(full, g, cfg);
    approx = detail::advance(approx, std::move(next));
    const double e_next = l2_distance(approx.x, full.x);
    if (e_next > rep.L * rep.e.back() + rep.delta.back() + kRecursionTolerance) rep.violated_steps.push_back(t);
    rep.e.push_back(e_next);
    const double unrolled = rep.unrolled_bound_at(t + 1);
    if (e_next > unrolled + kRecursionTolerance * std::max(1.0, unrolled)) rep.unrolled_violations.push_back(t + 1);
  }
  return rep;
}

[[nodiscard]] inline BoundReport paired_trajectory_report(const Graph& g, const DynamicsConfig& cfg,
                                                          const BudgetConfig& budget, std::uint64_t seed) {
  const auto init = init_state(g.num_nodes(), seed);
  return paired_trajectory_report(g, cfg, budget, init, init, derive_seed(seed, 1));
}

/// Mean endpoint-uncertainty product u_i u_j over the cluster and the bath.
struct ActivityStats {
  double cluster_mean_u = 0.0;
  std::optional<double> bath_mean_u;  // absent when M_t = E
  std::size_t step = 0;
};

[[nodiscard]] inline ActivityStats activity_stats(const SolverState& state, const ActiveSet& active, const Graph& g) {
  check_state(state, g);
  const auto in_cluster = active.mask(g.num_edges());
  double cluster_sum = 0.0, bath_sum = 0.0;
  std::size_t cluster_n = 0, bath_n = 0;
  for (EdgeId id = 0; id < g.num_edges(); ++id) {
    const auto& e = g.edge(id);
    const double u = node_uncertainty(state.x[e.u]) * node_uncertainty(state.x[e.v]);
    if (in_cluster[id]) {
      cluster_sum += u;
      ++cluster_n;
    } else {
      bath_sum += u;
      ++bath_n;
    }
  }
  ActivityStats st;
  st.step = state.t;
  if (cluster_n > 0) st.cluster_mean_u = cluster_sum / static_cast<double>(cluster_n);
  if (bath_n > 0) st.bath_mean_u = bath_sum / static_cast<double>(bath_n);
  return st;
}

}  // namespace lore
