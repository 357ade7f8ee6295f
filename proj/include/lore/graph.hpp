#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lore/errors.hpp"

namespace lore {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  NodeId u = 0;  // u < v
  NodeId v = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Neighbor entry in the compressed adjacency: the neighbor and the id of
/// the connecting edge.
struct Incidence {
  NodeId node = 0;
  EdgeId edge = 0;

  friend constexpr bool operator==(const Incidence&, const Incidence&) = default;
};

/// Immutable simple undirected graph.
///
/// Edges are stored as (u, v) with u < v in lexicographic order; EdgeId k is
/// the k-th entry. Adjacency lists are sorted by neighbor id, so for node i
/// the incident edge ids also come out ascending.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary edge list. Endpoints may come in either order;
  /// self-loops, duplicates and out-of-range endpoints throw ParameterError.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    for (auto& e : edges) {
      if (e.u == e.v) throw ParameterError("self-loop on node " + std::to_string(e.u));
      if (e.u >= n || e.v >= n) {
        throw ParameterError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") out of range for n=" + std::to_string(n));
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::ranges::sort(edges);
    if (auto dup = std::ranges::adjacent_find(edges); dup != edges.end()) {
      throw ParameterError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }
    edges_ = std::move(edges);
    build_adjacency();
  }

  [[nodiscard]] std::size_t num_nodes() const noexcept { return n_; }
  [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
  [[nodiscard]] const Edge& edge(EdgeId id) const { return edges_[id]; }

  [[nodiscard]] std::span<const Incidence> neighbors(NodeId i) const noexcept {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  [[nodiscard]] std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  [[nodiscard]] std::size_t max_degree() const noexcept {
    std::size_t best = 0;
    for (NodeId i = 0; i < n_; ++i) best = std::max(best, degree(i));
    return best;
  }

  /// Binary search in the sorted edge array.
  [[nodiscard]] bool has_edge(NodeId a, NodeId b) const noexcept {
    if (a > b) std::swap(a, b);
    return std::ranges::binary_search(edges_, Edge{a, b});
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  void build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(offsets_[n_]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Walking edges in id order appends lower neighbors (a, i) ascending,
    // then higher neighbors (i, b) ascending.
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      adjacency_[cursor[e.u]++] = {e.v, id};
      adjacency_[cursor[e.v]++] = {e.u, id};
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> adjacency_;
};

}  // namespace lore
