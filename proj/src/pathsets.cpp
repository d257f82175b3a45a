#include "icue/pathsets.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace icue {

PathExplosion::PathExplosion(std::size_t cap)
    : std::runtime_error(fmt::format("path explosion: more than {} paths (cap)", cap)), cap_(cap) {}

namespace {

// Depth-first search with visited-node marking. `visit` returns false to stop.
template <class Visit>
void for_each_simple_path(const Network& network, NodeId origin, NodeId destination,
                          const EdgeSet& allowed, Visit&& visit) {
  if (origin == destination) {
    throw std::invalid_argument("origin and destination must differ");
  }
  if (!network.contains(origin) || !network.contains(destination)) {
    throw std::invalid_argument("path endpoints are not nodes of the network");
  }
  std::vector<char> on_path(network.node_count(), 0);
  std::vector<EdgeId> edges;

  struct Frame {
    NodeId node;
    std::size_t next = 0;
  };
  std::vector<Frame> stack{{origin, 0}};
  on_path[origin.value] = 1;

  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto& inc = network.incident(top.node);
    if (top.next == inc.size()) {
      on_path[top.node.value] = 0;
      stack.pop_back();
      if (!edges.empty()) edges.pop_back();
      continue;
    }
    EdgeId e = inc[top.next++];
    if (!allowed.count(e)) continue;
    NodeId nxt = network.other_end(e, top.node);
    if (on_path[nxt.value]) continue;
    if (nxt == destination) {
      edges.push_back(e);
      bool go_on = visit(Path{edges});
      edges.pop_back();
      if (!go_on) return;
      continue;
    }
    edges.push_back(e);
    on_path[nxt.value] = 1;
    stack.push_back({nxt, 0});
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const Network& network, NodeId origin, NodeId destination,
                                  const EdgeSet& allowed, std::size_t cap) {
  std::vector<Path> paths;
  for_each_simple_path(network, origin, destination, allowed, [&](Path p) {
    if (paths.size() == cap) throw PathExplosion(cap);
    paths.push_back(std::move(p));
    return true;
  });
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::size_t count_paths(const Network& network, NodeId origin, NodeId destination,
                        const EdgeSet& allowed, std::size_t limit) {
  std::size_t n = 0;
  if (limit == 0) return 0;
  for_each_simple_path(network, origin, destination, allowed, [&](const Path&) {
    return ++n < limit;
  });
  return n;
}

EdgeSet relevant_edges(const Network& network, NodeId origin, NodeId destination,
                       const EdgeSet& candidates, std::size_t cap) {
  EdgeSet out;
  for (const Path& p : enumerate_paths(network, origin, destination, candidates, cap)) {
    out.insert(p.edges.begin(), p.edges.end());
  }
  return out;
}

StrategySet build_strategy_set(const GameSpec& game, std::size_t type_index, std::size_t cap) {
  const InfoType& type = game.types().at(type_index);
  const Population& pop = game.population_of(type);
  return StrategySet{type.key(), enumerate_paths(game.network(), pop.origin, pop.destination,
                                                 type.known_edges, cap)};
}

StrategySets build_strategy_sets(const GameSpec& game, std::size_t cap) {
  StrategySets sets;
  sets.reserve(game.types().size());
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    sets.push_back(build_strategy_set(game, t, cap));
  }
  return sets;
}

Outcome empty_outcome(const StrategySets& sets) {
  Outcome out;
  out.by_type.reserve(sets.size());
  for (const auto& s : sets) {
    std::vector<PathFlow> flows;
    for (const auto& p : s.paths) flows.push_back({p, 0.0});
    out.by_type.push_back(std::move(flows));
  }
  return out;
}

}  // namespace icue
