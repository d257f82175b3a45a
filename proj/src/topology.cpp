#include "icue/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace icue {

namespace {

// Connected components over the nodes touched by `edges` (or over every node
// when include_isolated is set).
bool connected(const Network& network, const EdgeSet& edges, bool include_isolated) {
  std::vector<NodeId> nodes;
  if (include_isolated) {
    for (std::uint32_t i = 0; i < network.node_count(); ++i) nodes.push_back(NodeId{i});
  } else {
    nodes = network.nodes_of(edges);
  }
  if (nodes.empty()) return false;
  std::vector<char> seen(network.node_count(), 0);
  std::vector<NodeId> stack{nodes.front()};
  seen[nodes.front().value] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (EdgeId e : network.incident(v)) {
      if (!edges.count(e)) continue;
      NodeId w = network.other_end(e, v);
      if (!seen[w.value]) {
        seen[w.value] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == nodes.size();
}

std::map<NodeId, std::size_t> degrees(const Network& network, const EdgeSet& edges) {
  std::map<NodeId, std::size_t> deg;
  for (EdgeId e : edges) {
    ++deg[network.edge(e).a];
    ++deg[network.edge(e).b];
  }
  return deg;
}

bool subset_of(const EdgeSet& a, const EdgeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

EdgeSet intersect(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool same_terminals(const SeriesBlock& x, const SeriesBlock& y) {
  return (x.from == y.from && x.to == y.to) || (x.from == y.to && x.to == y.from);
}

}  // namespace

bool is_simple(const Network& network) { return is_simple(network, network.all_edges()); }

bool is_simple(const Network& network, const EdgeSet& edges) {
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (EdgeId e : edges) {
    const Edge& ed = network.edge(e);
    auto key = std::minmax(ed.a, ed.b);
    if (!pairs.insert({key.first, key.second}).second) return false;
  }
  return true;
}

bool is_tree(const Network& network) {
  if (network.node_count() == 0) return false;
  return network.edge_count() + 1 == network.node_count() &&
         connected(network, network.all_edges(), true);
}

bool is_ring(const Network& network) {
  if (network.node_count() == 0) return false;
  for (std::uint32_t i = 0; i < network.node_count(); ++i) {
    if (network.incident(NodeId{i}).size() != 2) return false;
  }
  return is_simple(network) && connected(network, network.all_edges(), true);
}

bool is_cycle(const Network& network, const EdgeSet& edges) {
  if (edges.empty()) return false;
  for (const auto& [node, d] : degrees(network, edges)) {
    if (d != 2) return false;
  }
  return connected(network, edges, false);
}

LiReport is_li(const Network& network, NodeId origin, NodeId destination) {
  return is_li(network, origin, destination, network.all_edges());
}

LiReport is_li(const Network& network, NodeId origin, NodeId destination, const EdgeSet& allowed,
               std::size_t cap) {
  LiReport report;
  report.origin = origin;
  report.destination = destination;
  report.paths = enumerate_paths(network, origin, destination, allowed, cap);
  std::map<EdgeId, std::size_t> uses;
  for (const Path& p : report.paths) {
    for (EdgeId e : p.edges) ++uses[e];
  }
  report.li = !report.paths.empty();
  for (std::size_t i = 0; i < report.paths.size(); ++i) {
    std::optional<EdgeId> own;
    for (EdgeId e : report.paths[i].edges) {
      if (uses[e] == 1) {
        own = e;
        break;
      }
    }
    report.private_edge.push_back(own);
    if (!own && !report.violating_path) {
      report.violating_path = i;
      report.li = false;
    }
  }
  return report;
}

SliReport is_sli(const Network& network, NodeId origin, NodeId destination) {
  return is_sli(network, origin, destination, network.all_edges());
}

SliReport is_sli(const Network& network, NodeId origin, NodeId destination,
                 const EdgeSet& allowed, std::size_t cap) {
  SliReport report;
  report.origin = origin;
  report.destination = destination;
  const std::vector<Path> paths = enumerate_paths(network, origin, destination, allowed, cap);
  if (paths.empty()) {
    report.note = "no origin-destination path";
    return report;
  }

  // Vertices on every path, in the order the first path visits them.
  std::vector<std::vector<NodeId>> node_seqs;
  for (const Path& p : paths) node_seqs.push_back(path_nodes(network, origin, p));
  std::vector<std::size_t> hits(network.node_count(), 0);
  for (const auto& seq : node_seqs) {
    for (NodeId v : seq) ++hits[v.value];
  }
  std::vector<NodeId> terminals;
  for (NodeId v : node_seqs.front()) {
    if (hits[v.value] == paths.size()) terminals.push_back(v);
  }
  // terminals now runs origin, cut vertices..., destination.
  report.cut_vertices.assign(terminals.begin() + 1, terminals.end() - 1);

  std::vector<EdgeSet> block_edges(terminals.size() - 1);
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    const auto& seq = node_seqs[pi];
    std::size_t block = 0;
    for (std::size_t s = 0; s < paths[pi].edges.size(); ++s) {
      if (seq[s] == terminals[block + 1]) ++block;
      block_edges.at(block).insert(paths[pi].edges[s]);
    }
  }

  report.sli = true;
  for (std::size_t b = 0; b + 1 < terminals.size(); ++b) {
    SeriesBlock blk{terminals[b], terminals[b + 1], block_edges[b],
                    is_li(network, terminals[b], terminals[b + 1], block_edges[b], cap)};
    if (!blk.li.li) report.sli = false;
    report.blocks.push_back(std::move(blk));
  }
  if (!report.sli) report.note = "a series block is not linearly independent";
  return report;
}

std::string to_string(CircuitAxiom axiom) {
  switch (axiom) {
    case CircuitAxiom::members_in_ground: return "members within ground set";
    case CircuitAxiom::nonempty: return "empty set is not a circuit";
    case CircuitAxiom::antichain: return "no circuit contains another";
    case CircuitAxiom::elimination: return "circuit elimination";
  }
  return "?";
}

AxiomReport check_circuit_axioms(const SetSystem& system) {
  std::vector<EdgeSet> members;
  for (const auto& m : system.members) {
    if (std::find(members.begin(), members.end(), m) == members.end()) members.push_back(m);
  }
  auto fail = [](CircuitAxiom ax, std::size_t i, std::size_t j, std::optional<EdgeId> e) {
    return AxiomReport{false, AxiomViolation{ax, i, j, e}};
  };
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!subset_of(members[i], system.ground)) {
      return fail(CircuitAxiom::members_in_ground, i, i, std::nullopt);
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].empty()) return fail(CircuitAxiom::nonempty, i, i, std::nullopt);
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (i != j && subset_of(members[i], members[j])) {
        return fail(CircuitAxiom::antichain, i, j, std::nullopt);
      }
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      for (EdgeId e : intersect(members[i], members[j])) {
        EdgeSet pool = members[i];
        pool.insert(members[j].begin(), members[j].end());
        pool.erase(e);
        bool found = std::any_of(members.begin(), members.end(),
                                 [&](const EdgeSet& m) { return subset_of(m, pool); });
        if (!found) return fail(CircuitAxiom::elimination, i, j, e);
      }
    }
  }
  return {};
}

SetSystem cycle_set_system(const Network& network, const EdgeSet& edges) {
  SetSystem sys;
  sys.ground = edges;
  // Each cycle is generated once, from its smallest edge.
  for (EdgeId e : edges) {
    EdgeSet later(edges.upper_bound(e), edges.end());
    const Edge& ed = network.edge(e);
    for (const Path& p : enumerate_paths(network, ed.b, ed.a, later)) {
      EdgeSet cyc = edge_set(p);
      cyc.insert(e);
      sys.members.push_back(std::move(cyc));
    }
  }
  return sys;
}

EdgeSet relevant_network(const GameSpec& game, const Population& population) {
  return relevant_edges(game.network(), population.origin, population.destination,
                        population.relevant_edges);
}

CircuitGameReport is_circuit_game(const GameSpec& game) {
  CircuitGameReport report;
  report.circuit_game = !game.populations().empty();
  const Network& net = game.network();
  for (const auto& pop : game.populations()) {
    EdgeSet rel = relevant_network(game, pop);
    if (!is_cycle(net, rel)) {
      report.circuit_game = false;
      report.diagnostics.push_back(
          fmt::format("population {}: relevant network is not a single cycle", pop.id));
    }
    report.circuits.push_back(std::move(rel));
  }
  if (!is_simple(net, game.irredundant_edges())) {
    report.circuit_game = false;
    report.diagnostics.push_back(
        "network is not simple: parallel edges rule out a circuit game (a circuit game cannot "
        "exist on a network that is not simple)");
  }
  return report;
}

CoincidentBlocks coincident_blocks(const GameSpec& game, int population_i, int population_j) {
  const Population* pi = game.find_population(population_i);
  const Population* pj = game.find_population(population_j);
  if (!pi || !pj) throw std::invalid_argument("coincident_blocks: unknown population");
  CoincidentBlocks out;
  out.population_i = population_i;
  out.population_j = population_j;
  const Network& net = game.network();
  const EdgeSet ei = relevant_network(game, *pi);
  const EdgeSet ej = relevant_network(game, *pj);
  out.sli_i = is_sli(net, pi->origin, pi->destination, ei);
  out.sli_j = is_sli(net, pj->origin, pj->destination, ej);
  if (!out.sli_i.sli || !out.sli_j.sli) {
    throw std::invalid_argument(
        fmt::format("coincident_blocks: relevant network of population {} is not SLI",
                    out.sli_i.sli ? population_j : population_i));
  }
  out.intersection = intersect(ei, ej);
  EdgeSet covered;
  for (const auto& bi : out.sli_i.blocks) {
    for (const auto& bj : out.sli_j.blocks) {
      if (bi.edges == bj.edges && same_terminals(bi, bj)) {
        out.blocks.push_back(bi);
        covered.insert(bi.edges.begin(), bi.edges.end());
      }
    }
  }
  out.condition_b = out.intersection.empty() || out.intersection == covered;
  return out;
}

bool has_pigou_embedding(const Network& network, NodeId origin, NodeId destination) {
  return has_pigou_embedding(network, origin, destination, network.all_edges());
}

bool has_pigou_embedding(const Network& network, NodeId origin, NodeId destination,
                         const EdgeSet& allowed) {
  return count_paths(network, origin, destination, allowed, 2) >= 2;
}

std::optional<PigouEmbedding> find_pigou_embedding(const Network& network, NodeId origin,
                                                   NodeId destination, const EdgeSet& allowed) {
  std::vector<Path> two;
  // The first two paths found by the search are enough.
  if (count_paths(network, origin, destination, allowed, 2) < 2) return std::nullopt;
  {
    std::vector<Path> all = enumerate_paths(network, origin, destination, allowed);
    two = {all[0], all[1]};
  }
  const Path& p = two[0];
  const Path& other = two[1];
  const auto pn = path_nodes(network, origin, p);
  const auto on = path_nodes(network, origin, other);
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < pn.size(); ++i) pos[pn[i]] = i;

  std::size_t split = 0;
  while (split < p.edges.size() && split < other.edges.size() &&
         p.edges[split] == other.edges[split]) {
    ++split;
  }
  // other leaves p at node on[split] and next touches p at on[join].
  std::size_t join = split + 1;
  while (!pos.count(on[join])) ++join;
  std::vector<EdgeId> segment(other.edges.begin() + split, other.edges.begin() + join);
  std::size_t u = pos.at(on[split]);
  std::size_t w = pos.at(on[join]);

  PigouEmbedding emb;
  emb.base = p;
  std::vector<EdgeId> q;
  if (w > u) {
    q.assign(p.edges.begin(), p.edges.begin() + u);
    q.insert(q.end(), segment.begin(), segment.end());
    q.insert(q.end(), p.edges.begin() + w, p.edges.end());
    emb.base_arc = EdgeSet(p.edges.begin() + u, p.edges.begin() + w);
  } else {
    q.assign(p.edges.begin(), p.edges.begin() + w);
    q.insert(q.end(), segment.rbegin(), segment.rend());
    q.insert(q.end(), p.edges.begin() + u, p.edges.end());
    emb.base_arc = EdgeSet(p.edges.begin() + w, p.edges.begin() + u);
  }
  emb.detour = Path{q};
  emb.detour_arc = EdgeSet(segment.begin(), segment.end());
  return emb;
}

std::string to_string(Immunity verdict) {
  switch (verdict) {
    case Immunity::immune_sli: return "ImmuneSLI";
    case Immunity::immune_circuit_game: return "ImmuneCircuitGame";
    case Immunity::immune_theorem2: return "ImmuneTheorem2";
    case Immunity::unknown: return "Unknown";
  }
  return "?";
}

ImmunityCertificate immunity_certificate(const GameSpec& game) {
  ImmunityCertificate cert;
  const Network& net = game.network();
  const auto& pops = game.populations();
  if (pops.empty()) {
    cert.note = "game has no populations";
    return cert;
  }

  auto unordered = [](const Population& p) { return std::minmax(p.origin, p.destination); };
  const bool two_terminal = std::all_of(pops.begin(), pops.end(), [&](const Population& p) {
    return unordered(p) == unordered(pops.front());
  });
  if (two_terminal) {
    EdgeSet all;
    for (const auto& p : pops) {
      EdgeSet rel = relevant_network(game, p);
      all.insert(rel.begin(), rel.end());
    }
    SliReport sli = is_sli(net, pops.front().origin, pops.front().destination, all);
    const bool ok = sli.sli;
    cert.decompositions.push_back(std::move(sli));
    if (ok) {
      cert.verdict = Immunity::immune_sli;
      cert.note = "two-terminal SLI network";
    } else {
      cert.note = "two-terminal network is not SLI: IBP possible (SLI is necessary and sufficient)";
    }
    return cert;
  }

  cert.circuit = is_circuit_game(game);
  if (cert.circuit.circuit_game) {
    cert.verdict = Immunity::immune_circuit_game;
    cert.note = "every relevant network is a circuit";
    return cert;
  }

  bool all_sli = true;
  for (const auto& p : pops) {
    cert.decompositions.push_back(is_sli(net, p.origin, p.destination, relevant_network(game, p)));
    all_sli = all_sli && cert.decompositions.back().sli;
  }
  if (!all_sli) {
    cert.note = "some relevant network is not SLI; no sufficient condition applies";
    return cert;
  }
  bool all_b = true;
  for (std::size_t i = 0; i < pops.size(); ++i) {
    for (std::size_t j = i + 1; j < pops.size(); ++j) {
      cert.pairs.push_back(coincident_blocks(game, pops[i].id, pops[j].id));
      all_b = all_b && cert.pairs.back().condition_b;
    }
  }
  if (all_b) {
    cert.verdict = Immunity::immune_theorem2;
    cert.note = "all relevant networks SLI and overlaps consist of coincident blocks";
  } else {
    cert.note = "an overlap is not made of coincident blocks; immunity not established";
  }
  return cert;
}

bool verify_certificate(const GameSpec& game, const ImmunityCertificate& cert) {
  const Network& net = game.network();
  auto block_ok = [&](const SliReport& r) {
    if (!r.sli || r.blocks.empty()) return false;
    if (r.blocks.front().from != r.origin || r.blocks.back().to != r.destination) return false;
    for (std::size_t b = 0; b < r.blocks.size(); ++b) {
      const auto& blk = r.blocks[b];
      if (b + 1 < r.blocks.size() && blk.to != r.blocks[b + 1].from) return false;
      if (!is_li(net, blk.from, blk.to, blk.edges).li) return false;
    }
    return true;
  };
  switch (cert.verdict) {
    case Immunity::immune_sli:
      return cert.decompositions.size() == 1 && block_ok(cert.decompositions.front());
    case Immunity::immune_circuit_game: {
      if (cert.circuit.circuits.size() != game.populations().size()) return false;
      for (std::size_t i = 0; i < game.populations().size(); ++i) {
        const EdgeSet& c = cert.circuit.circuits[i];
        if (c != relevant_network(game, game.populations()[i]) || !is_cycle(net, c)) return false;
        SetSystem sys = cycle_set_system(net, c);
        if (sys.members.size() != 1 || !check_circuit_axioms(sys).ok) return false;
      }
      return is_simple(net, game.irredundant_edges());
    }
    case Immunity::immune_theorem2:
      for (const auto& d : cert.decompositions) {
        if (!block_ok(d)) return false;
      }
      return std::all_of(cert.pairs.begin(), cert.pairs.end(), [&](const CoincidentBlocks& cb) {
        return coincident_blocks(game, cb.population_i, cb.population_j).condition_b;
      });
    default:
      return true;
  }
}

}  // namespace icue
