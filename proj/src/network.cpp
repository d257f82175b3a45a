#include "icue/network.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace icue {

NodeId Network::add_node(std::string name) {
  if (name.empty()) throw std::invalid_argument("node name must be nonempty");
  if (node_index_.count(name)) {
    throw std::invalid_argument(fmt::format("duplicate node '{}'", name));
  }
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  node_index_.emplace(name, id);
  nodes_.push_back(std::move(name));
  adjacency_.emplace_back();
  return id;
}

EdgeId Network::add_edge(std::string name, NodeId a, NodeId b) {
  if (name.empty()) throw std::invalid_argument("edge name must be nonempty");
  if (edge_index_.count(name)) {
    throw std::invalid_argument(fmt::format("duplicate edge '{}'", name));
  }
  if (!contains(a) || !contains(b)) {
    throw std::invalid_argument(fmt::format("edge '{}' has an undeclared endpoint", name));
  }
  if (a == b) {
    throw std::invalid_argument(fmt::format("edge '{}' is a self-loop", name));
  }
  EdgeId id{static_cast<std::uint32_t>(edges_.size())};
  edge_index_.emplace(name, id);
  edges_.push_back(Edge{std::move(name), a, b});
  // Ids are issued in increasing order, so adjacency lists stay sorted.
  adjacency_[a.value].push_back(id);
  adjacency_[b.value].push_back(id);
  return id;
}

EdgeId Network::add_edge(std::string name, std::string_view a, std::string_view b) {
  return add_edge(std::move(name), node(a), node(b));
}

std::optional<NodeId> Network::find_node(std::string_view name) const {
  auto it = node_index_.find(std::string(name));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> Network::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

NodeId Network::node(std::string_view name) const {
  if (auto n = find_node(name)) return *n;
  throw std::invalid_argument(fmt::format("unknown node '{}'", name));
}

EdgeId Network::edge_id(std::string_view name) const {
  if (auto e = find_edge(name)) return *e;
  throw std::invalid_argument(fmt::format("unknown edge '{}'", name));
}

NodeId Network::other_end(EdgeId e, NodeId from) const {
  const Edge& ed = edge(e);
  if (ed.a == from) return ed.b;
  if (ed.b == from) return ed.a;
  throw std::invalid_argument(
      fmt::format("edge '{}' is not incident to node '{}'", ed.name, node_name(from)));
}

EdgeSet Network::all_edges() const {
  EdgeSet out;
  for (std::uint32_t i = 0; i < edges_.size(); ++i) out.insert(out.end(), EdgeId{i});
  return out;
}

std::vector<NodeId> Network::nodes_of(const EdgeSet& edges) const {
  std::vector<NodeId> out;
  for (EdgeId e : edges) {
    out.push_back(edge(e).a);
    out.push_back(edge(e).b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EdgeSet Network::edges_named(const std::vector<std::string>& names) const {
  EdgeSet out;
  for (const auto& n : names) out.insert(edge_id(n));
  return out;
}

std::vector<NodeId> path_nodes(const Network& network, NodeId origin, const Path& path) {
  std::vector<NodeId> nodes{origin};
  for (EdgeId e : path.edges) nodes.push_back(network.other_end(e, nodes.back()));
  return nodes;
}

EdgeSet edge_set(const Path& path) { return EdgeSet(path.edges.begin(), path.edges.end()); }

std::string to_string(const Network& network, const Path& path) {
  std::string out = "{";
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    if (i) out += ',';
    out += network.edge_name(path.edges[i]);
  }
  out += '}';
  return out;
}

}  // namespace icue
