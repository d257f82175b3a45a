#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "icue/equilibrium.hpp"
#include "icue/game.hpp"

namespace icue {

// Enlarges the known edges of one type; every other type is unchanged.
struct Expansion {
  TypeKey target{1, 1};
  EdgeSet added;
  friend bool operator==(const Expansion&, const Expansion&) = default;
};

struct ExpandedGame {
  GameSpec game;
  bool strategy_set_changed = false;
  std::vector<std::string> warnings;
};

// Throws std::invalid_argument when the target is unknown, the expansion is
// not strict, or an added edge is not relevant to the target's population.
ExpandedGame expand_information(const GameSpec& game, const Expansion& expansion,
                                std::size_t cap = kDefaultPathCap);

enum class ParadoxKind { bp, ibp, ibpsc };
enum class Confidence { certified, witness_dependent };
enum class VerdictStatus { computed, withheld };

std::string to_string(ParadoxKind kind);
std::string to_string(Confidence confidence);
ParadoxKind parse_paradox_kind(std::string_view text);

struct ParadoxOptions {
  SolverOptions solver;
  // A paradox occurs when the compared cost rises by more than this.
  double compare_tolerance = 1e-6;
};

struct ParadoxVerdict {
  ParadoxKind kind = ParadoxKind::ibp;
  VerdictStatus status = VerdictStatus::computed;
  std::string diagnostic;
  EquilibriumResult before;
  EquilibriumResult after;
  TypeKey target{1, 1};
  double value_before = 0.0;  // target type cost (IBP) or social cost (BP, IBPSC)
  double value_after = 0.0;
  double delta = 0.0;
  double target_cost_before = 0.0;
  double target_cost_after = 0.0;
  std::vector<double> type_deltas;  // after minus before, per type
  bool occurred = false;
  Confidence confidence = Confidence::certified;
};

// Precondition of an operation that is only meaningful for some games.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ParadoxVerdict detect_ibp(const GameSpec& game, const Expansion& expansion,
                          const ParadoxOptions& options = {});
ParadoxVerdict detect_ibpsc(const GameSpec& game, const Expansion& expansion,
                            const ParadoxOptions& options = {});

// Both verdicts from one pair of equilibrium solves.
struct JointVerdict {
  ParadoxVerdict ibp;
  ParadoxVerdict ibpsc;
};
JointVerdict detect_information_paradoxes(const GameSpec& game, const Expansion& expansion,
                                          const ParadoxOptions& options = {});

// Compares the game with one whose costs and demands are pointwise no larger.
// Throws PreconditionError when that dominance does not hold.
ParadoxVerdict detect_bp(const GameSpec& game, const std::vector<CostFunction>& modified_costs,
                         const std::vector<double>& modified_demands,
                         const ParadoxOptions& options = {});
ParadoxVerdict detect_bp(const GameSpec& game, const GameSpec& modified,
                         const ParadoxOptions& options = {});

struct NotAllWorseReport {
  bool holds = false;
  std::vector<double> deltas;  // after minus before, per type
  ParadoxVerdict verdict;
};

// Whether some type's equilibrium cost does not rise under the expansion.
// Throws PreconditionError for games that are not circuit games.
NotAllWorseReport check_not_all_worse(const GameSpec& game, const Expansion& expansion,
                                      const ParadoxOptions& options = {});

// A game plus the change whose effect is being examined.
struct ParadoxInstance {
  GameSpec game;
  std::optional<Expansion> expansion;  // IBP, IBPSC
  std::optional<GameSpec> modified;    // BP
};

struct IbpscWitnessParams {
  double slope = 1.0;     // linear edge on the base arc
  double constant = 2.0;  // constant edge on the detour arc
  double restricted_demand = 1.0;
  double informed_demand = 1.0;
};

// Two populations sharing one origin-destination pair on an embedded Pigou
// network: population 1 only knows the detour path (constant cost), population
// 2 knows both arcs. Expanding population 1 to both arcs raises social cost
// for the default parameters. Throws PreconditionError when fewer than two
// origin-destination paths exist.
ParadoxInstance make_ibpsc_witness(const Network& network, NodeId origin, NodeId destination,
                                   const IbpscWitnessParams& params = {});

}  // namespace icue
