#pragma once

#include <algorithm>
#include <array>
#include <iterator>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lore/active_set.hpp"
#include "lore/errors.hpp"
#include "lore/graph.hpp"
#include "lore/rng.hpp"
#include "lore/state.hpp"

namespace lore {

enum class Strategy { LoRe, GreedyConflict, GreedyDegDyn, LoReStatic, GreedyDegree, Random };

inline constexpr std::array<Strategy, 6> kAllStrategies = {Strategy::LoRe,       Strategy::GreedyConflict,
                                                           Strategy::GreedyDegDyn, Strategy::LoReStatic,
                                                           Strategy::GreedyDegree, Strategy::Random};

[[nodiscard]] inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::LoRe: return "lore";
    case Strategy::GreedyConflict: return "greedy-conflict";
    case Strategy::GreedyDegDyn: return "greedy-deg-dyn";
    case Strategy::LoReStatic: return "lore-static";
    case Strategy::GreedyDegree: return "greedy-degree";
    case Strategy::Random: return "random";
  }
  return "?";
}

[[nodiscard]] inline Strategy parse_strategy(std::string_view s) {
  for (Strategy st : kAllStrategies) {
    if (s == to_string(st)) return st;
  }
  throw ParameterError("unknown strategy '" + std::string(s) + "'");
}

/// Static strategies route once at t = 0 and keep that set.
[[nodiscard]] constexpr bool is_static(Strategy s) noexcept {
  return s == Strategy::LoReStatic || s == Strategy::GreedyDegree;
}

struct BudgetConfig {
  double rho = 0.08;
  double gamma = 0.05;
  std::size_t refresh = 10;
  double lambda_stab = 0.5;
  Strategy strategy = Strategy::LoRe;

  void validate() const {
    if (!(rho > 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in (0,1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in [0,1]");
    if (refresh < 1) throw ParameterError("refresh interval must be >= 1");
    if (!(lambda_stab >= 0.0) || !std::isfinite(lambda_stab)) throw ParameterError("lambda_stab must be >= 0");
  }
};

namespace detail {
// floor(r * m) with slack for products like 0.29 * 100 = 28.999999999999996.
[[nodiscard]] inline std::size_t floor_product(double r, std::size_t m) {
  return static_cast<std::size_t>(std::floor(r * static_cast<double>(m) + 1e-9));
}
}  // namespace detail

/// B = min(max(floor(rho |E|), 1), |E|); 0 only for edgeless graphs.
[[nodiscard]] inline std::size_t budget_size(std::size_t num_edges, double rho) {
  if (num_edges == 0) return 0;
  return std::min(std::max<std::size_t>(detail::floor_product(rho, num_edges), 1), num_edges);
}

/// u = 1 - |2x - 1|: 1 at x = 1/2, 0 at either endpoint.
[[nodiscard]] inline double node_uncertainty(double x) noexcept { return 1.0 - std::abs(2.0 * x - 1.0); }

/// Hotspot score u_i u_j + lambda (|x_i - x_prev,i| + |x_j - x_prev,j|).
[[nodiscard]] inline double edge_score(const Edge& e, const SolverState& s, double lambda_stab) noexcept {
  const double unc = node_uncertainty(s.x[e.u]) * node_uncertainty(s.x[e.v]);
  const double moved = std::abs(s.x[e.u] - s.x_prev[e.u]) + std::abs(s.x[e.v] - s.x_prev[e.v]);
  return unc + lambda_stab * moved;
}

/// The k highest-scoring candidates, ties to the lower EdgeId, returned in
/// ascending id order. `scores` is indexed by EdgeId.
[[nodiscard]] inline std::vector<EdgeId> top_k(std::vector<EdgeId> candidates, std::span<const double> scores,
                                               std::size_t k) {
  k = std::min(k, candidates.size());
  auto better = [&](EdgeId a, EdgeId b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); };
  std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end(), better);
  candidates.resize(k);
  std::ranges::sort(candidates);
  return candidates;
}

/// Structural skeleton: the floor(gamma B) edges with largest deg(i)+deg(j).
[[nodiscard]] inline std::vector<EdgeId> select_skeleton(const Graph& g, double gamma, std::size_t budget) {
  const std::size_t k = detail::floor_product(gamma, budget);
  if (k == 0) return {};
  std::vector<double> scores(g.num_edges());
  std::vector<EdgeId> all(g.num_edges());
  for (EdgeId id = 0; id < g.num_edges(); ++id) {
    const auto& e = g.edge(id);
    scores[id] = static_cast<double>(g.degree(e.u) + g.degree(e.v));
    all[id] = id;
  }
  return top_k(std::move(all), scores, k);
}

/// |A n B| / |A| for sorted id sets.
[[nodiscard]] inline double overlap_fraction(std::span<const EdgeId> a, std::span<const EdgeId> b) {
  if (a.empty()) throw UsageError("overlap_fraction: first set is empty");
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size());
}

/// Routing work done at refresh steps.
struct RoutingCost {
  std::uint64_t score_evals = 0;     // per-refresh proxy scores
  std::uint64_t skeleton_evals = 0;  // one-off degree-sum scoring
};

/// Recomputes M_t for a refresh step. For the LoRe variants `skeleton` is
/// the run's fixed skeleton (computed here when null).
[[nodiscard]] inline ActiveSet compute_active_set(Strategy strategy, const SolverState& state, const Graph& g,
                                                  const BudgetConfig& cfg, const std::vector<EdgeId>* skeleton,
                                                  std::size_t t, Rng& rng, RoutingCost* cost = nullptr) {
  check_state(state, g);
  const std::size_t m = g.num_edges();
  const std::size_t budget = budget_size(m, cfg.rho);
  RoutingCost local;
  std::vector<double> scores(m);
  std::vector<EdgeId> candidates;
  ActiveSet result;

  switch (strategy) {
    case Strategy::LoRe:
    case Strategy::LoReStatic: {
      std::vector<EdgeId> skel;
      if (skeleton != nullptr) {
        skel = *skeleton;
      } else {
        skel = select_skeleton(g, cfg.gamma, budget);
        local.skeleton_evals += m;
      }
      candidates.reserve(m - skel.size());
      std::size_t s = 0;
      for (EdgeId id = 0; id < m; ++id) {
        if (s < skel.size() && skel[s] == id) {
          ++s;
          continue;
        }
        scores[id] = edge_score(g.edge(id), state, cfg.lambda_stab);
        candidates.push_back(id);
      }
      local.score_evals += candidates.size();
      auto hot = top_k(std::move(candidates), scores, budget - skel.size());
      std::vector<EdgeId> ids;
      ids.reserve(budget);
      std::ranges::merge(skel, hot, std::back_inserter(ids));
      result = ActiveSet(g, std::move(ids), std::move(skel), t);
      break;
    }
    case Strategy::GreedyConflict:
    case Strategy::GreedyDegDyn:
    case Strategy::GreedyDegree: {
      candidates.resize(m);
      for (EdgeId id = 0; id < m; ++id) {
        const auto& e = g.edge(id);
        const double deg_sum = static_cast<double>(g.degree(e.u) + g.degree(e.v));
        candidates[id] = id;
        if (strategy == Strategy::GreedyConflict) {
          scores[id] = state.x[e.u] * state.x[e.v];
        } else if (strategy == Strategy::GreedyDegDyn) {
          scores[id] = deg_sum * (state.x[e.u] + state.x[e.v]);
        } else {
          scores[id] = deg_sum;
        }
      }
      local.score_evals += m;
      result = ActiveSet(g, top_k(std::move(candidates), scores, budget), {}, t);
      break;
    }
    case Strategy::Random: {
      // Partial Fisher-Yates over all edge ids.
      std::vector<EdgeId> ids(m);
      std::iota(ids.begin(), ids.end(), EdgeId{0});
      for (std::size_t i = 0; i < budget; ++i) std::swap(ids[i], ids[i + rng.below(m - i)]);
      ids.resize(budget);
      result = ActiveSet(g, std::move(ids), {}, t);
      break;
    }
  }
  if (cost != nullptr) {
    cost->score_evals += local.score_evals;
    cost->skeleton_evals += local.skeleton_evals;
  }
  return result;
}

[[nodiscard]] inline bool is_refresh_step(Strategy strategy, std::size_t t, std::size_t refresh) noexcept {
  if (t == 0) return true;
  return !is_static(strategy) && t % refresh == 0;
}

/// M_t for `strategy` at step t. Non-refresh steps return `prev` unchanged
/// and require it; refresh steps reuse prev's skeleton when t > 0.
[[nodiscard]] inline ActiveSet build_active_set(Strategy strategy, const SolverState& state, const Graph& g,
                                                const BudgetConfig& cfg, const ActiveSet* prev, std::size_t t,
                                                Rng& rng, RoutingCost* cost = nullptr) {
  cfg.validate();
  if (!is_refresh_step(strategy, t, cfg.refresh)) {
    if (prev == nullptr) throw UsageError("build_active_set: previous set required on a non-refresh step");
    return *prev;
  }
  if (prev != nullptr && t != 0 && (strategy == Strategy::LoRe || strategy == Strategy::LoReStatic)) {
    const std::vector<EdgeId> skel(prev->skeleton_ids().begin(), prev->skeleton_ids().end());
    return compute_active_set(strategy, state, g, cfg, &skel, t, rng, cost);
  }
  return compute_active_set(strategy, state, g, cfg, nullptr, t, rng, cost);
}

/// Per-trajectory router: owns the current M_t, the fixed skeleton, the
/// Random strategy's generator and the routing cost counters.
class Router {
 public:
  Router(const Graph& g, BudgetConfig cfg, std::uint64_t seed)
      : graph_(&g), cfg_(cfg), rng_(seed), budget_(budget_size(g.num_edges(), cfg.rho)) {
    cfg_.validate();
  }

  [[nodiscard]] bool is_refresh_step(std::size_t t) const noexcept {
    return lore::is_refresh_step(cfg_.strategy, t, cfg_.refresh);
  }

  /// M_t for step t; steps are visited in increasing order from 0.
  const ActiveSet& route(const SolverState& state, std::size_t t) {
    last_overlap_.reset();
    if (current_ && !is_refresh_step(t)) return *current_;
    const bool lore_family = cfg_.strategy == Strategy::LoRe || cfg_.strategy == Strategy::LoReStatic;
    auto next = compute_active_set(cfg_.strategy, state, *graph_, cfg_, skeleton_ ? &*skeleton_ : nullptr, t, rng_,
                                   &cost_);
    if (lore_family && !skeleton_) {
      skeleton_.emplace(next.skeleton_ids().begin(), next.skeleton_ids().end());
    }
    if (current_ && current_->size() > 0) last_overlap_ = overlap_fraction(current_->edge_ids(), next.edge_ids());
    current_ = std::move(next);
    ++refreshes_;
    return *current_;
  }

  /// Overlap |M_prev n M_t| / |M_prev|, set only right after a refresh that
  /// replaced an earlier set.
  [[nodiscard]] std::optional<double> last_overlap() const noexcept { return last_overlap_; }
  [[nodiscard]] std::size_t budget() const noexcept { return budget_; }
  [[nodiscard]] std::size_t refreshes() const noexcept { return refreshes_; }
  [[nodiscard]] const RoutingCost& cost() const noexcept { return cost_; }
  [[nodiscard]] const BudgetConfig& config() const noexcept { return cfg_; }

 private:
  const Graph* graph_;
  BudgetConfig cfg_;
  Rng rng_;
  std::size_t budget_;
  std::optional<std::vector<EdgeId>> skeleton_;
  std::optional<ActiveSet> current_;
  std::optional<double> last_overlap_;
  std::size_t refreshes_ = 0;
  RoutingCost cost_;
};

}  // namespace lore
