#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "icue/cost.hpp"
#include "icue/network.hpp"

namespace icue {

// One origin-destination population and the edges its members may ever use.
struct Population {
  int id = 0;
  NodeId origin;
  NodeId destination;
  EdgeSet relevant_edges;
  friend bool operator==(const Population&, const Population&) = default;
};

// Identifies information type k of population i, written (i,k).
struct TypeKey {
  int population = 0;
  int k = 0;
  friend auto operator<=>(const TypeKey&, const TypeKey&) = default;
};

std::string to_string(TypeKey key);

// A sub-group of a population that only knows some of its relevant edges.
struct InfoType {
  int population = 0;
  int k = 0;
  EdgeSet known_edges;
  double demand = 0.0;

  TypeKey key() const { return {population, k}; }
  friend bool operator==(const InfoType&, const InfoType&) = default;
};

// The full game: network, populations, information types, and one cost
// function per network edge. Values are immutable once built; structural
// checks beyond sizes are reported by validate_game rather than thrown.
class GameSpec {
 public:
  GameSpec() = default;
  GameSpec(Network network, std::vector<Population> populations, std::vector<InfoType> types,
           std::vector<CostFunction> costs);

  const Network& network() const { return network_; }
  const std::vector<Population>& populations() const { return populations_; }
  const std::vector<InfoType>& types() const { return types_; }
  const std::vector<CostFunction>& costs() const { return costs_; }
  const CostFunction& cost(EdgeId e) const { return costs_.at(e.value); }

  const Population* find_population(int id) const;
  const Population& population_of(const InfoType& type) const;
  std::optional<std::size_t> type_index(TypeKey key) const;

  // Union of all populations' relevant edges.
  EdgeSet irredundant_edges() const;

  GameSpec with_types(std::vector<InfoType> types) const;
  GameSpec with_costs(std::vector<CostFunction> costs) const;

  const std::string& name() const { return name_; }
  const std::string& description() const { return description_; }
  GameSpec& set_name(std::string name) {
    name_ = std::move(name);
    return *this;
  }
  GameSpec& set_description(std::string text) {
    description_ = std::move(text);
    return *this;
  }

  friend bool operator==(const GameSpec&, const GameSpec&) = default;

 private:
  Network network_;
  std::vector<Population> populations_;
  std::vector<InfoType> types_;
  std::vector<CostFunction> costs_;
  std::string name_;
  std::string description_;
};

struct PathFlow {
  Path path;
  double flow = 0.0;
  friend bool operator==(const PathFlow&, const PathFlow&) = default;
};

// Strategy distribution: by_type[t] lists path flows of game.types()[t].
struct Outcome {
  std::vector<std::vector<PathFlow>> by_type;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Edge loads indexed by EdgeId::value.
using LoadVector = std::vector<double>;

// Largest |sum of flows - demand| over types; throws if the outcome does not
// match the game's type count or has a negative flow.
double feasibility_error(const GameSpec& game, const Outcome& outcome);

LoadVector edge_loads(const GameSpec& game, const Outcome& outcome);

double strategy_cost(const GameSpec& game, const Path& strategy, const LoadVector& loads);
double strategy_cost(const GameSpec& game, const Path& strategy, const Outcome& outcome);

struct TypeCost {
  double cost = 0.0;    // flow-weighted average over used strategies
  double spread = 0.0;  // max minus min cost among used strategies
  bool zero_demand = false;
};

// For a zero-demand type, cost is the cheapest strategy in its full strategy
// set (enumerated from the game) and zero_demand is set.
TypeCost type_cost(const GameSpec& game, std::size_t type_index, const Outcome& outcome);
TypeCost type_cost(const GameSpec& game, std::size_t type_index, const Outcome& outcome,
                   const LoadVector& loads);

double social_cost(const GameSpec& game, const Outcome& outcome);

// Sum over edges of c_e(f_e) * f_e.
double total_edge_cost(const GameSpec& game, const LoadVector& loads);

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
  std::string summary() const;
};

ValidationReport validate_game(const GameSpec& game);

}  // namespace icue
