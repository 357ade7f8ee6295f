#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "lore/graph.hpp"
#include "lore/state.hpp"

namespace lore {

/// Sorted set of node indices.
struct NodeSet {
  std::vector<NodeId> members;

  [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
  friend bool operator==(const NodeSet&, const NodeSet&) = default;
};

/// Full edge scan.
[[nodiscard]] inline bool is_independent(const NodeSet& set, const Graph& g) {
  std::vector<char> in(g.num_nodes(), 0);
  for (NodeId v : set.members) {
    if (v >= g.num_nodes()) return false;
    in[v] = 1;
  }
  return std::ranges::none_of(g.edges(), [&](const Edge& e) { return in[e.u] && in[e.v]; });
}

/// Greedy decode: visit nodes by descending x (ties to the lower index) and
/// keep a node iff none of its neighbors was kept already.
[[nodiscard]] inline NodeSet greedy_decode(std::span<const double> x, const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::ranges::stable_sort(order, [&](NodeId a, NodeId b) { return x[a] > x[b]; });
  std::vector<char> blocked(n, 0);
  NodeSet out;
  for (NodeId v : order) {
    if (blocked[v]) continue;
    out.members.push_back(v);
    for (const auto& nb : g.neighbors(v)) blocked[nb.node] = 1;
  }
  std::ranges::sort(out.members);
  return out;
}

[[nodiscard]] inline NodeSet greedy_decode(const SolverState& state, const Graph& g) {
  check_state(state, g);
  return greedy_decode(state.x, g);
}

/// Removes conflicts until the set is independent: for each conflicting
/// edge (in EdgeId order) drop the endpoint with the higher degree, on a tie
/// the higher index. Independent inputs come back unchanged.
[[nodiscard]] inline NodeSet repair_and_validate(const NodeSet& set, const Graph& g) {
  std::vector<char> in(g.num_nodes(), 0);
  for (NodeId v : set.members) {
    if (v < g.num_nodes()) in[v] = 1;
  }
  // One pass suffices: membership only shrinks, so an edge cleared earlier
  // cannot conflict again.
  for (const auto& e : g.edges()) {
    if (!(in[e.u] && in[e.v])) continue;
    const std::size_t du = g.degree(e.u);
    const std::size_t dv = g.degree(e.v);
    const NodeId victim = du > dv ? e.u : e.v;  // e.u < e.v, so ties drop e.v
    in[victim] = 0;
  }
  NodeSet out;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (in[v]) out.members.push_back(v);
  }
  return out;
}

/// Anytime legal solution: decode then repair, on a copy of the state.
[[nodiscard]] inline NodeSet decode_legal(std::span<const double> x, const Graph& g) {
  return repair_and_validate(greedy_decode(x, g), g);
}

}  // namespace lore
