#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lore/errors.hpp"
#include "lore/graph.hpp"
#include "lore/rng.hpp"

namespace lore {

/// Relaxed vertex indicators at step t plus the previous-step snapshot.
struct SolverState {
  std::vector<double> x;
  std::vector<double> x_prev;
  std::size_t t = 0;

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  friend bool operator==(const SolverState&, const SolverState&) = default;
};

/// Step size and conflict penalty of the conflict-descent update
///   x_i <- clip(x_i + eta (1 - beta sum_{j in N(i)} x_j)).
struct DynamicsConfig {
  double eta = 0.1;
  double beta = 2.0;
  std::size_t steps = 100;
  bool recall_enabled = false;

  void validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ParameterError("eta must be positive and finite");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive and finite");
    if (steps < 1) throw ParameterError("steps must be >= 1");
  }
};

/// Interaction-evaluation accounting for one trajectory.
struct EvalCounter {
  std::uint64_t node_terms = 0;
  std::uint64_t messages = 0;  // directed messages, two per evaluated edge
  std::uint64_t recall_terms = 0;

  friend bool operator==(const EvalCounter&, const EvalCounter&) = default;
};

[[nodiscard]] inline double clip01(double v) noexcept { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

/// x_i ~ Uniform(0.25, 0.75) i.i.d.; x_prev = x; t = 0.
[[nodiscard]] inline SolverState init_state(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("init_state: n must be >= 1");
  Rng rng(seed);
  SolverState s;
  s.x.resize(n);
  for (auto& v : s.x) v = rng.uniform(0.25, 0.75);
  s.x_prev = s.x;
  return s;
}

inline void check_state(const SolverState& s, const Graph& g) {
  if (s.x.size() != g.num_nodes() || s.x_prev.size() != g.num_nodes()) {
    throw UsageError("state length does not match graph node count");
  }
}

/// Single-node update shared by every step map so that the floating-point
/// expression is identical everywhere.
[[nodiscard]] inline double node_update(double xi, double pressure, const DynamicsConfig& cfg) noexcept {
  return clip01(xi + cfg.eta * (1.0 - cfg.beta * pressure));
}

}  // namespace lore
