#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lore/errors.hpp"
#include "lore/graph.hpp"

namespace lore {

// Text format: first line "n m", then m lines "i j" with i < j in ascending
// order (i.e. EdgeId order).

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void save_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_edge_list(out, g);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

namespace detail {

inline std::vector<std::uint64_t> parse_fields(std::string_view line, std::size_t lineno, std::size_t expect) {
  std::vector<std::uint64_t> fields;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (true) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    std::uint64_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      throw ParseError(lineno, "expected non-negative integers, got '" + std::string(line) + "'");
    }
    fields.push_back(value);
    p = next;
  }
  if (fields.size() != expect) {
    throw ParseError(lineno, "expected " + std::to_string(expect) + " fields, got " + std::to_string(fields.size()));
  }
  return fields;
}

}  // namespace detail

[[nodiscard]] inline Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(lineno, "missing header");
  const auto header = detail::parse_fields(line, lineno, 2);
  const std::uint64_t n = header[0];
  const std::uint64_t m = header[1];
  if (n > UINT32_MAX) throw ParseError(lineno, "node count too large");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::unordered_set<std::uint64_t> seen;
  while (edges.size() < m) {
    ++lineno;
    if (!std::getline(in, line)) {
      throw ParseError(lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    }
    const auto f = detail::parse_fields(line, lineno, 2);
    if (f[0] == f[1]) throw ParseError(lineno, "self-loop on node " + std::to_string(f[0]));
    if (f[0] >= n || f[1] >= n) {
      throw ParseError(lineno, "node index out of range (n=" + std::to_string(n) + ")");
    }
    const auto a = static_cast<NodeId>(std::min(f[0], f[1]));
    const auto b = static_cast<NodeId>(std::max(f[0], f[1]));
    if (!seen.insert(static_cast<std::uint64_t>(a) * n + b).second) {
      throw ParseError(lineno, "duplicate edge " + std::to_string(a) + " " + std::to_string(b));
    }
    edges.push_back({a, b});
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw ParseError(lineno, "trailing data after edges");
  }
  return Graph(n, std::move(edges));
}

[[nodiscard]] inline Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_edge_list(in);
}

}  // namespace lore
