#include "icue/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "icue/pathsets.hpp"

namespace icue {

std::string to_string(TypeKey key) { return fmt::format("({},{})", key.population, key.k); }

GameSpec::GameSpec(Network network, std::vector<Population> populations,
                   std::vector<InfoType> types, std::vector<CostFunction> costs)
    : network_(std::move(network)),
      populations_(std::move(populations)),
      types_(std::move(types)),
      costs_(std::move(costs)) {
  if (costs_.size() != network_.edge_count()) {
    throw std::invalid_argument(fmt::format("game has {} edges but {} cost functions",
                                            network_.edge_count(), costs_.size()));
  }
}

const Population* GameSpec::find_population(int id) const {
  for (const auto& p : populations_) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Population& GameSpec::population_of(const InfoType& type) const {
  if (const Population* p = find_population(type.population)) return *p;
  throw std::invalid_argument(fmt::format("type {} names unknown population", to_string(type.key())));
}

std::optional<std::size_t> GameSpec::type_index(TypeKey key) const {
  for (std::size_t t = 0; t < types_.size(); ++t) {
    if (types_[t].key() == key) return t;
  }
  return std::nullopt;
}

EdgeSet GameSpec::irredundant_edges() const {
  EdgeSet out;
  for (const auto& p : populations_) out.insert(p.relevant_edges.begin(), p.relevant_edges.end());
  return out;
}

GameSpec GameSpec::with_types(std::vector<InfoType> types) const {
  GameSpec copy = *this;
  copy.types_ = std::move(types);
  return copy;
}

GameSpec GameSpec::with_costs(std::vector<CostFunction> costs) const {
  GameSpec copy(network_, populations_, types_, std::move(costs));
  copy.name_ = name_;
  copy.description_ = description_;
  return copy;
}

double feasibility_error(const GameSpec& game, const Outcome& outcome) {
  if (outcome.by_type.size() != game.types().size()) {
    throw std::invalid_argument(fmt::format("outcome has {} types, game has {}",
                                            outcome.by_type.size(), game.types().size()));
  }
  double worst = 0.0;
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    double sum = 0.0;
    for (const auto& pf : outcome.by_type[t]) {
      if (!(pf.flow >= 0.0)) throw std::invalid_argument("outcome has a negative flow");
      sum += pf.flow;
    }
    worst = std::max(worst, std::abs(sum - game.types()[t].demand));
  }
  return worst;
}

LoadVector edge_loads(const GameSpec& game, const Outcome& outcome) {
  const Network& net = game.network();
  LoadVector loads(net.edge_count(), 0.0);
  for (const auto& flows : outcome.by_type) {
    for (const auto& pf : flows) {
      for (EdgeId e : pf.path.edges) {
        if (!net.contains(e)) {
          throw std::invalid_argument(
              fmt::format("outcome references unknown edge #{}", e.value));
        }
        loads[e.value] += pf.flow;
      }
    }
  }
  return loads;
}

double strategy_cost(const GameSpec& game, const Path& strategy, const LoadVector& loads) {
  double c = 0.0;
  for (EdgeId e : strategy.edges) {
    if (!game.network().contains(e)) throw std::invalid_argument("strategy references unknown edge");
    c += game.cost(e)(std::max(0.0, loads.at(e.value)));
  }
  return c;
}

double strategy_cost(const GameSpec& game, const Path& strategy, const Outcome& outcome) {
  return strategy_cost(game, strategy, edge_loads(game, outcome));
}

TypeCost type_cost(const GameSpec& game, std::size_t type_index, const Outcome& outcome) {
  return type_cost(game, type_index, outcome, edge_loads(game, outcome));
}

TypeCost type_cost(const GameSpec& game, std::size_t type_index, const Outcome& outcome,
                   const LoadVector& loads) {
  const InfoType& type = game.types().at(type_index);
  const auto& flows = outcome.by_type.at(type_index);
  double mass = 0.0;
  double weighted = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& pf : flows) {
    if (pf.flow <= 0.0) continue;
    double c = strategy_cost(game, pf.path, loads);
    mass += pf.flow;
    weighted += pf.flow * c;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (type.demand <= 0.0 || mass <= 0.0) {
    TypeCost out;
    out.zero_demand = true;
    const StrategySet set = build_strategy_set(game, type_index);
    if (set.empty()) {
      out.cost = std::numeric_limits<double>::infinity();
      return out;
    }
    out.cost = std::numeric_limits<double>::infinity();
    for (const auto& p : set.paths) out.cost = std::min(out.cost, strategy_cost(game, p, loads));
    return out;
  }
  return TypeCost{weighted / mass, hi - lo, false};
}

double social_cost(const GameSpec& game, const Outcome& outcome) {
  const LoadVector loads = edge_loads(game, outcome);
  double sc = 0.0;
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    const double d = game.types()[t].demand;
    if (d <= 0.0) continue;
    sc += type_cost(game, t, outcome, loads).cost * d;
  }
  return sc;
}

double total_edge_cost(const GameSpec& game, const LoadVector& loads) {
  double total = 0.0;
  for (std::size_t e = 0; e < loads.size(); ++e) {
    if (loads[e] > 0.0) {
      total += game.cost(EdgeId{static_cast<std::uint32_t>(e)})(loads[e]) * loads[e];
    }
  }
  return total;
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport validate_game(const GameSpec& game) {
  ValidationReport report;
  auto add = [&](std::string code, std::string msg) {
    report.violations.push_back({std::move(code), std::move(msg)});
  };
  const Network& net = game.network();

  std::map<int, int> type_count;
  for (const auto& pop : game.populations()) {
    if (type_count.count(pop.id)) {
      add("duplicate_population", fmt::format("duplicate population id {}", pop.id));
      continue;
    }
    type_count[pop.id] = 0;
    if (!net.contains(pop.origin) || !net.contains(pop.destination)) {
      add("unknown_node", fmt::format("population {}: unknown terminal node", pop.id));
      continue;
    }
    if (pop.origin == pop.destination) {
      add("same_terminals", fmt::format("population {}: origin equals destination", pop.id));
      continue;
    }
    bool edges_ok = true;
    for (EdgeId e : pop.relevant_edges) {
      if (!net.contains(e)) {
        add("unknown_edge", fmt::format("population {}: unknown edge #{}", pop.id, e.value));
        edges_ok = false;
      }
    }
    if (!edges_ok) continue;
    try {
      EdgeSet rel = relevant_edges(net, pop.origin, pop.destination, pop.relevant_edges);
      for (EdgeId e : pop.relevant_edges) {
        if (!rel.count(e)) {
          add("irrelevant_edge",
              fmt::format("population {}: irrelevant edge '{}' lies on no origin-destination path",
                          pop.id, net.edge_name(e)));
        }
      }
    } catch (const PathExplosion& ex) {
      add("path_explosion", fmt::format("population {}: {}", pop.id, ex.what()));
    }
  }

  std::map<TypeKey, int> seen;
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    const InfoType& type = game.types()[t];
    const std::string label = to_string(type.key());
    if (seen[type.key()]++) add("duplicate_type", fmt::format("type {}: duplicate", label));
    if (!std::isfinite(type.demand) || type.demand < 0.0) {
      add("negative_demand", fmt::format("type {}: negative demand {}", label, type.demand));
    }
    const Population* pop = game.find_population(type.population);
    if (!pop) {
      add("unknown_population", fmt::format("type {}: unknown population", label));
      continue;
    }
    ++type_count[pop->id];
    bool edges_ok = true;
    for (EdgeId e : type.known_edges) {
      if (!net.contains(e)) {
        add("unknown_edge", fmt::format("type {}: unknown edge #{}", label, e.value));
        edges_ok = false;
      } else if (!pop->relevant_edges.count(e)) {
        add("known_outside_relevant",
            fmt::format("type {}: known edge '{}' is not a relevant edge of population {}", label,
                        net.edge_name(e), pop->id));
      }
    }
    if (!edges_ok || !net.contains(pop->origin) || !net.contains(pop->destination) ||
        pop->origin == pop->destination) {
      continue;
    }
    if (type.demand > 0.0 &&
        count_paths(net, pop->origin, pop->destination, type.known_edges, 1) == 0) {
      add("empty_strategy_set", fmt::format("type {}: type has empty strategy set", label));
    }
  }
  for (const auto& [id, n] : type_count) {
    if (n == 0) add("population_without_type", fmt::format("population {} has no type", id));
  }
  return report;
}

}  // namespace icue
