#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lore/errors.hpp"
#include "lore/graph.hpp"
#include "lore/rng.hpp"

namespace lore {

enum class GraphFamily { ER, BA, WS };

[[nodiscard]] inline std::string_view to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::ER: return "er";
    case GraphFamily::BA: return "ba";
    case GraphFamily::WS: return "ws";
  }
  return "?";
}

[[nodiscard]] inline GraphFamily parse_family(std::string_view s) {
  if (s == "er" || s == "ER") return GraphFamily::ER;
  if (s == "ba" || s == "BA") return GraphFamily::BA;
  if (s == "ws" || s == "WS") return GraphFamily::WS;
  throw ParameterError("unknown graph family '" + std::string(s) + "'");
}

struct GeneratorSpec {
  GraphFamily family = GraphFamily::ER;
  std::size_t n = 0;
  double p = 0.05;        // ER
  std::size_t m = 3;      // BA
  std::size_t k = 4;      // WS ring degree
  double rewire = 0.1;    // WS
  std::uint64_t seed = 0;
};

/// G(n, p): every unordered pair independently with probability p, pairs
/// visited in lexicographic order.
[[nodiscard]] inline Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw ParameterError("gen_er: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("gen_er: p must lie in [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) edges.push_back({i, j});
    }
  }
  return Graph(n, std::move(edges));
}

/// Barabasi-Albert preferential attachment seeded with K_{m+1}.
/// |E| = C(m+1, 2) + m (n - m - 1).
[[nodiscard]] inline Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw ParameterError("gen_ba: need 1 <= m < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Every edge endpoint is appended here, so a uniform draw is a
  // degree-proportional draw.
  std::vector<NodeId> endpoints;
  for (NodeId i = 0; i <= m; ++i) {
    for (NodeId j = i + 1; j <= m; ++j) {
      edges.push_back({i, j});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<NodeId> targets;
  for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::ranges::find(targets, t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph(n, std::move(edges));
}

/// Watts-Strogatz: ring lattice of degree k, then each lattice edge (i, i+d)
/// has its far endpoint rewired with probability `rewire` to a uniform node
/// that is neither i nor already adjacent to i. Edge count stays n k / 2.
[[nodiscard]] inline Graph gen_ws(std::size_t n, std::size_t k, double rewire, std::uint64_t seed) {
  if (k % 2 != 0) throw ParameterError("gen_ws: k must be even");
  if (k == 0 || k >= n) throw ParameterError("gen_ws: need 0 < k < n");
  if (!(rewire >= 0.0 && rewire <= 1.0)) throw ParameterError("gen_ws: rewire must lie in [0,1]");
  Rng rng(seed);
  auto key = [n](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * n + b;
  };
  std::unordered_set<std::uint64_t> present;
  std::vector<std::size_t> degree(n, k);
  std::vector<std::pair<NodeId, NodeId>> lattice;
  for (std::size_t d = 1; d <= k / 2; ++d) {
    for (NodeId i = 0; i < n; ++i) {
      const auto j = static_cast<NodeId>((i + d) % n);
      lattice.emplace_back(i, j);
      present.insert(key(i, j));
    }
  }
  for (auto& [i, j] : lattice) {
    if (!rng.bernoulli(rewire)) continue;
    if (degree[i] >= n - 1) continue;  // nowhere to go
    NodeId w = 0;
    do {
      w = static_cast<NodeId>(rng.below(n));
    } while (w == i || present.contains(key(i, w)));
    present.erase(key(i, j));
    present.insert(key(i, w));
    --degree[j];
    ++degree[w];
    j = w;
  }
  std::vector<Edge> edges;
  edges.reserve(lattice.size());
  for (auto [i, j] : lattice) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

[[nodiscard]] inline Graph generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case GraphFamily::ER: return gen_er(spec.n, spec.p, spec.seed);
    case GraphFamily::BA: return gen_ba(spec.n, spec.m, spec.seed);
    case GraphFamily::WS: return gen_ws(spec.n, spec.k, spec.rewire, spec.seed);
  }
  throw ParameterError("unknown graph family");
}

}  // namespace lore
