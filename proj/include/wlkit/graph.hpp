#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wlkit/error.hpp"

namespace wlkit {

using NodeId = std::int32_t;
using ColourId = std::int32_t;
using EdgeLabel = std::int32_t;

struct Neighbour {
  NodeId node;
  EdgeLabel label;

  friend bool operator==(const Neighbour&, const Neighbour&) = default;
};

/// Undirected graph with one categorical colour and one real value per node
/// and non-negative integer edge labels. At most one edge per node pair.
class Graph {
 public:
  NodeId add_node(ColourId colour, double value = 0.0, std::string name = {}) {
    colours_.push_back(colour);
    values_.push_back(value);
    names_.push_back(std::move(name));
    adjacency_.emplace_back();
    return static_cast<NodeId>(colours_.size() - 1);
  }

  void add_edge(NodeId u, NodeId v, EdgeLabel label) {
    check(u);
    check(v);
    if (u == v) fail(ErrorKind::InvalidGraph, "self loop on node " + std::to_string(u));
    if (label < 0) fail(ErrorKind::InvalidGraph, "negative edge label");
    if (edge_label(u, v))
      fail(ErrorKind::InvalidGraph, "parallel edge " + std::to_string(u) + "-" + std::to_string(v));
    insert_sorted(adjacency_[u], {v, label});
    insert_sorted(adjacency_[v], {u, label});
    ++edge_count_;
  }

  std::size_t node_count() const { return colours_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  ColourId colour(NodeId u) const { return colours_[check(u)]; }
  double value(NodeId u) const { return values_[check(u)]; }
  const std::string& name(NodeId u) const { return names_[check(u)]; }

  std::span<const ColourId> colours() const { return colours_; }
  std::span<const double> values() const { return values_; }

  /// N(u) sorted by node id, with the label of each incident edge; grouping by label gives N_l(u).
  std::span<const Neighbour> neighbours(NodeId u) const { return adjacency_[check(u)]; }

  std::optional<EdgeLabel> edge_label(NodeId u, NodeId v) const {
    const auto& adj = adjacency_[check(u)];
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbour& n, NodeId x) { return n.node < x; });
    if (it == adj.end() || it->node != v) return std::nullopt;
    return it->label;
  }

  /// Copy with node i renamed to perm[i].
  Graph permuted(std::span<const NodeId> perm) const {
    const std::size_t n = node_count();
    if (perm.size() != n) fail(ErrorKind::InvalidGraph, "permutation size mismatch");
    std::vector<NodeId> inverse(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      if (perm[i] < 0 || static_cast<std::size_t>(perm[i]) >= n || inverse[perm[i]] != -1)
        fail(ErrorKind::InvalidGraph, "not a permutation");
      inverse[perm[i]] = static_cast<NodeId>(i);
    }
    Graph out;
    for (std::size_t j = 0; j < n; ++j) out.add_node(colours_[inverse[j]], values_[inverse[j]], names_[inverse[j]]);
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& nb : adjacency_[inverse[j]]) {
        NodeId u = static_cast<NodeId>(j), v = perm[nb.node];
        if (u < v) out.add_edge(u, v, nb.label);
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  static void insert_sorted(std::vector<Neighbour>& adj, Neighbour n) {
    auto it = std::lower_bound(adj.begin(), adj.end(), n.node,
                               [](const Neighbour& a, NodeId x) { return a.node < x; });
    adj.insert(it, n);
  }

  NodeId check(NodeId u) const {
    if (u < 0 || static_cast<std::size_t>(u) >= colours_.size())
      fail(ErrorKind::NodeOutOfRange, "node " + std::to_string(u) + " of " + std::to_string(colours_.size()));
    return u;
  }

  std::vector<ColourId> colours_;
  std::vector<double> values_;
  std::vector<std::string> names_;
  std::vector<std::vector<Neighbour>> adjacency_;
  std::size_t edge_count_ = 0;
};

inline std::span<const Neighbour> neighbours(const Graph& g, NodeId u) { return g.neighbours(u); }

namespace graph_detail {
inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}
}  // namespace graph_detail

/// Shortest decimal text that reads back as exactly `v`.
inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

/// Graphviz rendering. Nodes are emitted in id order, edges once each with
/// the smaller endpoint first. `colour_names[c]`, when given, labels colour c.
inline std::string to_dot(const Graph& g, std::span<const std::string> colour_names = {}) {
  std::ostringstream out;
  out << "graph wlkit {\n";
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    NodeId id = static_cast<NodeId>(u);
    ColourId c = g.colour(id);
    std::string colour = c >= 0 && static_cast<std::size_t>(c) < colour_names.size() ? colour_names[c]
                                                                                     : std::to_string(c);
    std::string label = graph_detail::escape(colour);
    if (!g.name(id).empty()) label = graph_detail::escape(g.name(id)) + "\\n" + label;
    out << "  n" << u << " [label=\"" << label << "\"";
    if (g.value(id) != 0.0) out << ", value=" << format_real(g.value(id));
    out << "];\n";
  }
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    for (const auto& nb : g.neighbours(static_cast<NodeId>(u))) {
      if (static_cast<NodeId>(u) < nb.node)
        out << "  n" << u << " -- n" << nb.node << " [label=\"" << nb.label << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

/// {"nodes": [{"name", "colour", "value"}...], "edges": [[u, v, label]...]} with u < v.
inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    NodeId id = static_cast<NodeId>(u);
    nodes.push_back({{"name", g.name(id)}, {"colour", g.colour(id)}, {"value", g.value(id)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t u = 0; u < g.node_count(); ++u)
    for (const auto& nb : g.neighbours(static_cast<NodeId>(u)))
      if (static_cast<NodeId>(u) < nb.node) edges.push_back(nlohmann::json::array({u, nb.node, nb.label}));
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const nlohmann::json& j) {
  try {
    Graph g;
    for (const auto& n : j.at("nodes"))
      g.add_node(n.at("colour").get<ColourId>(), n.at("value").get<double>(), n.value("name", std::string{}));
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) fail(ErrorKind::SchemaError, "edge must be [u, v, label]");
      g.add_edge(e[0].get<NodeId>(), e[1].get<NodeId>(), e[2].get<EdgeLabel>());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("graph: ") + e.what());
  }
}

}  // namespace wlkit
