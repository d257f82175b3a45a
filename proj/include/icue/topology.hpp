#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icue/game.hpp"
#include "icue/network.hpp"
#include "icue/pathsets.hpp"

namespace icue {

// True iff no two edges join the same pair of nodes.
bool is_simple(const Network& network);
bool is_simple(const Network& network, const EdgeSet& edges);

// Connected and acyclic over all nodes.
bool is_tree(const Network& network);
// Connected, simple, and every node has degree exactly two.
bool is_ring(const Network& network);
// The subgraph spanned by `edges` is a single cycle (connected, all degrees 2).
bool is_cycle(const Network& network, const EdgeSet& edges);

// Two-terminal linear independence: every origin-destination path owns an
// edge used by no other path.
struct LiReport {
  bool li = false;
  NodeId origin;
  NodeId destination;
  std::vector<Path> paths;
  std::vector<std::optional<EdgeId>> private_edge;  // one per path
  std::optional<std::size_t> violating_path;
};

LiReport is_li(const Network& network, NodeId origin, NodeId destination);
LiReport is_li(const Network& network, NodeId origin, NodeId destination, const EdgeSet& allowed,
               std::size_t cap = kDefaultPathCap);

struct SeriesBlock {
  NodeId from;
  NodeId to;
  EdgeSet edges;
  LiReport li;
};

// Series decomposition at the vertices every origin-destination path crosses.
// The network is SLI iff every block is LI.
struct SliReport {
  bool sli = false;
  NodeId origin;
  NodeId destination;
  std::vector<NodeId> cut_vertices;  // in travel order
  std::vector<SeriesBlock> blocks;
  std::string note;
};

SliReport is_sli(const Network& network, NodeId origin, NodeId destination);
SliReport is_sli(const Network& network, NodeId origin, NodeId destination,
                 const EdgeSet& allowed, std::size_t cap = kDefaultPathCap);

struct SetSystem {
  EdgeSet ground;
  std::vector<EdgeSet> members;
};

enum class CircuitAxiom { members_in_ground, nonempty, antichain, elimination };
std::string to_string(CircuitAxiom axiom);

struct AxiomViolation {
  CircuitAxiom axiom;
  std::size_t first = 0;
  std::size_t second = 0;
  std::optional<EdgeId> element;
};

struct AxiomReport {
  bool ok = true;
  std::optional<AxiomViolation> violation;  // first one found
};

// Duplicate members are treated as one member.
AxiomReport check_circuit_axioms(const SetSystem& system);

// Edge sets of every cycle in the subgraph spanned by `edges`; parallel edges
// form 2-cycles.
SetSystem cycle_set_system(const Network& network, const EdgeSet& edges);

struct CircuitGameReport {
  bool circuit_game = false;
  std::vector<EdgeSet> circuits;  // one per population, in population order
  std::vector<std::string> diagnostics;
};

CircuitGameReport is_circuit_game(const GameSpec& game);

// Relevant network of a population: its relevant edges, with edges lying on
// no origin-destination path stripped.
EdgeSet relevant_network(const GameSpec& game, const Population& population);

struct CoincidentBlocks {
  int population_i = 0;
  int population_j = 0;
  SliReport sli_i;
  SliReport sli_j;
  std::vector<SeriesBlock> blocks;  // shared LI blocks with equal terminal pairs
  EdgeSet intersection;
  bool condition_b = false;
};

// Throws std::invalid_argument when either relevant network is not SLI.
CoincidentBlocks coincident_blocks(const GameSpec& game, int population_i, int population_j);

// A base path and a second path that differs from it by one internally
// disjoint detour; the two arcs realize an embedded Pigou network.
struct PigouEmbedding {
  Path base;
  Path detour;
  EdgeSet base_arc;    // edges of base not on detour
  EdgeSet detour_arc;  // edges of detour not on base
};

bool has_pigou_embedding(const Network& network, NodeId origin, NodeId destination);
bool has_pigou_embedding(const Network& network, NodeId origin, NodeId destination,
                         const EdgeSet& allowed);
std::optional<PigouEmbedding> find_pigou_embedding(const Network& network, NodeId origin,
                                                   NodeId destination, const EdgeSet& allowed);

enum class Immunity { immune_sli, immune_circuit_game, immune_theorem2, unknown };
std::string to_string(Immunity verdict);

struct ImmunityCertificate {
  Immunity verdict = Immunity::unknown;
  std::vector<SliReport> decompositions;
  CircuitGameReport circuit;
  std::vector<CoincidentBlocks> pairs;
  std::string note;
};

ImmunityCertificate immunity_certificate(const GameSpec& game);
// Re-checks the witnesses carried by a certificate.
bool verify_certificate(const GameSpec& game, const ImmunityCertificate& cert);

}  // namespace icue
