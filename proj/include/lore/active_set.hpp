#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "lore/errors.hpp"
#include "lore/graph.hpp"

namespace lore {

/// Adjacency restricted to a routed edge subset, in the same per-node
/// neighbor order as the full graph.
class ClusterAdjacency {
 public:
  ClusterAdjacency() = default;

  /// `edge_ids` must be sorted ascending.
  ClusterAdjacency(const Graph& g, std::span<const EdgeId> edge_ids) : offsets_(g.num_nodes() + 1, 0) {
    for (EdgeId id : edge_ids) {
      const auto& e = g.edge(id);
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < g.num_nodes(); ++i) offsets_[i + 1] += offsets_[i];
    neighbors_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id : edge_ids) {
      const auto& e = g.edge(id);
      neighbors_[cursor[e.u]++] = e.v;
      neighbors_[cursor[e.v]++] = e.u;
    }
  }

  [[nodiscard]] std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  [[nodiscard]] std::span<const NodeId> neighbors(NodeId i) const noexcept {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }
  [[nodiscard]] std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

/// The routed interaction subset M_t.
class ActiveSet {
 public:
  ActiveSet() = default;

  /// Both id lists are sorted and deduplicated here; skeleton ids must be a
  /// subset of edge ids.
  ActiveSet(const Graph& g, std::vector<EdgeId> edge_ids, std::vector<EdgeId> skeleton_ids, std::size_t created_at)
      : edge_ids_(std::move(edge_ids)), skeleton_ids_(std::move(skeleton_ids)), created_at_(created_at) {
    normalize(edge_ids_);
    normalize(skeleton_ids_);
    if (!edge_ids_.empty() && edge_ids_.back() >= g.num_edges()) throw UsageError("active set: edge id out of range");
    if (!std::ranges::includes(edge_ids_, skeleton_ids_)) throw UsageError("active set: skeleton not contained in M_t");
    cluster_ = ClusterAdjacency(g, edge_ids_);
  }

  static ActiveSet full(const Graph& g, std::size_t created_at = 0) {
    std::vector<EdgeId> ids(g.num_edges());
    for (EdgeId k = 0; k < ids.size(); ++k) ids[k] = k;
    return ActiveSet(g, std::move(ids), {}, created_at);
  }

  [[nodiscard]] std::span<const EdgeId> edge_ids() const noexcept { return edge_ids_; }
  [[nodiscard]] std::span<const EdgeId> skeleton_ids() const noexcept { return skeleton_ids_; }
  [[nodiscard]] std::size_t size() const noexcept { return edge_ids_.size(); }
  [[nodiscard]] std::size_t created_at() const noexcept { return created_at_; }
  [[nodiscard]] const ClusterAdjacency& cluster() const noexcept { return cluster_; }

  [[nodiscard]] bool contains(EdgeId id) const { return std::ranges::binary_search(edge_ids_, id); }

  /// Membership mask indexed by EdgeId.
  [[nodiscard]] std::vector<char> mask(std::size_t num_edges) const {
    std::vector<char> m(num_edges, 0);
    for (EdgeId id : edge_ids_) m[id] = 1;
    return m;
  }

 private:
  static void normalize(std::vector<EdgeId>& ids) {
    std::ranges::sort(ids);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }

  std::vector<EdgeId> edge_ids_;
  std::vector<EdgeId> skeleton_ids_;
  std::size_t created_at_ = 0;
  ClusterAdjacency cluster_;
};

}  // namespace lore
