#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace icue {

// Index of a node inside its Network.
struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(NodeId, NodeId) = default;
};

// Index of an edge inside its Network. Edge order is declaration order and is
// the order used for every lexicographic comparison of paths.
struct EdgeId {
  std::uint32_t value = 0;
  friend auto operator<=>(EdgeId, EdgeId) = default;
};

using EdgeSet = std::set<EdgeId>;

// A simple path given by its edge sequence, origin first.
struct Path {
  std::vector<EdgeId> edges;
  friend auto operator<=>(const Path&, const Path&) = default;
};

struct Edge {
  std::string name;
  NodeId a;
  NodeId b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected multigraph with named nodes and edges. Parallel edges are allowed,
// self-loops are not.
class Network {
 public:
  NodeId add_node(std::string name);
  EdgeId add_edge(std::string name, NodeId a, NodeId b);
  EdgeId add_edge(std::string name, std::string_view a, std::string_view b);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& node_name(NodeId n) const { return nodes_.at(n.value); }
  const Edge& edge(EdgeId e) const { return edges_.at(e.value); }
  const std::string& edge_name(EdgeId e) const { return edge(e).name; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& node_names() const { return nodes_; }

  std::optional<NodeId> find_node(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;
  // Throwing lookups.
  NodeId node(std::string_view name) const;
  EdgeId edge_id(std::string_view name) const;

  bool contains(NodeId n) const { return n.value < nodes_.size(); }
  bool contains(EdgeId e) const { return e.value < edges_.size(); }

  NodeId other_end(EdgeId e, NodeId from) const;
  // Incident edges sorted by EdgeId.
  const std::vector<EdgeId>& incident(NodeId n) const { return adjacency_.at(n.value); }

  EdgeSet all_edges() const;
  // Distinct nodes touched by the given edges, ascending.
  std::vector<NodeId> nodes_of(const EdgeSet& edges) const;
  EdgeSet edges_named(const std::vector<std::string>& names) const;

  friend bool operator==(const Network& lhs, const Network& rhs) {
    return lhs.nodes_ == rhs.nodes_ && lhs.edges_ == rhs.edges_;
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

// Node sequence visited by a path starting at origin. Throws if the edges do
// not chain.
std::vector<NodeId> path_nodes(const Network& network, NodeId origin, const Path& path);

EdgeSet edge_set(const Path& path);
std::string to_string(const Network& network, const Path& path);

}  // namespace icue
