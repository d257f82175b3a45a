#include "icue/paradox.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "icue/topology.hpp"

namespace icue {

std::string to_string(ParadoxKind kind) {
  switch (kind) {
    case ParadoxKind::bp: return "BP";
    case ParadoxKind::ibp: return "IBP";
    case ParadoxKind::ibpsc: return "IBPSC";
  }
  return "?";
}

std::string to_string(Confidence confidence) {
  return confidence == Confidence::certified ? "certified" : "witness-dependent";
}

ParadoxKind parse_paradox_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "bp") return ParadoxKind::bp;
  if (lower == "ibp") return ParadoxKind::ibp;
  if (lower == "ibpsc") return ParadoxKind::ibpsc;
  throw std::invalid_argument(fmt::format("unknown paradox kind '{}'", text));
}

ExpandedGame expand_information(const GameSpec& game, const Expansion& expansion,
                                std::size_t cap) {
  const auto index = game.type_index(expansion.target);
  if (!index) {
    throw std::invalid_argument(
        fmt::format("expansion targets unknown type {}", to_string(expansion.target)));
  }
  const InfoType& type = game.types()[*index];
  const Population& pop = game.population_of(type);
  const Network& net = game.network();
  for (EdgeId e : expansion.added) {
    if (!net.contains(e)) throw std::invalid_argument("expansion adds an unknown edge");
    if (!pop.relevant_edges.count(e)) {
      throw std::invalid_argument(fmt::format(
          "expansion edge '{}' is not a relevant edge of population {}", net.edge_name(e), pop.id));
    }
  }
  EdgeSet known = type.known_edges;
  known.insert(expansion.added.begin(), expansion.added.end());
  if (known == type.known_edges) {
    throw std::invalid_argument(fmt::format(
        "expansion of type {} is not strict: no valid expansion adds only known edges",
        to_string(expansion.target)));
  }

  std::vector<InfoType> types = game.types();
  types[*index].known_edges = known;
  ExpandedGame out{game.with_types(std::move(types)), false, {}};
  const auto before = build_strategy_set(game, *index, cap);
  const auto after = build_strategy_set(out.game, *index, cap);
  out.strategy_set_changed = before.paths != after.paths;
  if (!out.strategy_set_changed) {
    out.warnings.push_back(fmt::format(
        "expansion of type {} adds no origin-destination path; strategy set unchanged",
        to_string(expansion.target)));
  }
  return out;
}

namespace {

Confidence confidence_of(const EquilibriumResult& a, const EquilibriumResult& b) {
  return a.loads_possibly_non_unique || b.loads_possibly_non_unique
             ? Confidence::witness_dependent
             : Confidence::certified;
}

// Fills the comparison fields shared by every verdict kind.
ParadoxVerdict compare(ParadoxKind kind, TypeKey target, std::size_t target_index,
                       EquilibriumResult before, EquilibriumResult after,
                       const ParadoxOptions& options) {
  ParadoxVerdict v;
  v.kind = kind;
  v.target = target;
  v.confidence = confidence_of(before, after);
  if (!before.converged || !after.converged) {
    v.status = VerdictStatus::withheld;
    v.diagnostic = fmt::format(
        "equilibrium solver did not converge (relative gaps {:.3g} before, {:.3g} after); verdict "
        "withheld",
        before.max_relative_gap(), after.max_relative_gap());
  }
  const std::size_t n = std::min(before.type_costs.size(), after.type_costs.size());
  for (std::size_t t = 0; t < n; ++t) v.type_deltas.push_back(after.type_costs[t] - before.type_costs[t]);
  if (target_index < n) {
    v.target_cost_before = before.type_costs[target_index];
    v.target_cost_after = after.type_costs[target_index];
  }
  if (kind == ParadoxKind::ibp) {
    v.value_before = v.target_cost_before;
    v.value_after = v.target_cost_after;
  } else {
    v.value_before = before.social_cost;
    v.value_after = after.social_cost;
  }
  v.delta = v.value_after - v.value_before;
  v.occurred = v.status == VerdictStatus::computed && v.delta > options.compare_tolerance;
  v.before = std::move(before);
  v.after = std::move(after);
  return v;
}

}  // namespace

JointVerdict detect_information_paradoxes(const GameSpec& game, const Expansion& expansion,
                                          const ParadoxOptions& options) {
  const ExpandedGame expanded = expand_information(game, expansion, options.solver.path_cap);
  const std::size_t target = *game.type_index(expansion.target);
  EquilibriumResult before = solve_icue(game, options.solver);
  // An unchanged strategy set yields the same equilibrium; reuse it verbatim.
  EquilibriumResult after = expanded.strategy_set_changed ? solve_icue(expanded.game, options.solver)
                                                          : before;
  JointVerdict out{compare(ParadoxKind::ibp, expansion.target, target, before, after, options),
                   compare(ParadoxKind::ibpsc, expansion.target, target, std::move(before),
                           std::move(after), options)};
  for (const auto& w : expanded.warnings) {
    for (auto* v : {&out.ibp, &out.ibpsc}) {
      if (!v->diagnostic.empty()) v->diagnostic += "; ";
      v->diagnostic += w;
    }
  }
  return out;
}

ParadoxVerdict detect_ibp(const GameSpec& game, const Expansion& expansion,
                          const ParadoxOptions& options) {
  return detect_information_paradoxes(game, expansion, options).ibp;
}

ParadoxVerdict detect_ibpsc(const GameSpec& game, const Expansion& expansion,
                            const ParadoxOptions& options) {
  return detect_information_paradoxes(game, expansion, options).ibpsc;
}

ParadoxVerdict detect_bp(const GameSpec& game, const std::vector<CostFunction>& modified_costs,
                         const std::vector<double>& modified_demands,
                         const ParadoxOptions& options) {
  if (modified_costs.size() != game.costs().size()) {
    throw PreconditionError("modified costs must cover every edge");
  }
  if (modified_demands.size() != game.types().size()) {
    throw PreconditionError("modified demands must cover every type");
  }
  for (std::size_t e = 0; e < modified_costs.size(); ++e) {
    if (!modified_costs[e].dominated_by(game.costs()[e])) {
      throw PreconditionError(fmt::format("modified cost of edge '{}' is not pointwise <= the original",
                                          game.network().edges()[e].name));
    }
  }
  std::vector<InfoType> types = game.types();
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (!(modified_demands[t] >= 0.0) || modified_demands[t] > types[t].demand) {
      throw PreconditionError(fmt::format("modified demand of type {} must lie in [0, {}]",
                                          to_string(types[t].key()), types[t].demand));
    }
    types[t].demand = modified_demands[t];
  }
  const GameSpec modified = game.with_types(std::move(types)).with_costs(modified_costs);
  EquilibriumResult before = solve_icue(game, options.solver);
  EquilibriumResult after = solve_icue(modified, options.solver);
  const TypeKey target = game.types().empty() ? TypeKey{} : game.types().front().key();
  return compare(ParadoxKind::bp, target, 0, std::move(before), std::move(after), options);
}

ParadoxVerdict detect_bp(const GameSpec& game, const GameSpec& modified,
                         const ParadoxOptions& options) {
  if (!(game.network() == modified.network()) || game.populations() != modified.populations() ||
      game.types().size() != modified.types().size()) {
    throw PreconditionError("modified game must share the network, populations and types");
  }
  std::vector<double> demands;
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    const InfoType& a = game.types()[t];
    const InfoType& b = modified.types()[t];
    if (a.key() != b.key() || a.known_edges != b.known_edges) {
      throw PreconditionError("modified game must keep every type's information set");
    }
    demands.push_back(b.demand);
  }
  return detect_bp(game, modified.costs(), demands, options);
}

NotAllWorseReport check_not_all_worse(const GameSpec& game, const Expansion& expansion,
                                      const ParadoxOptions& options) {
  const CircuitGameReport circuit = is_circuit_game(game);
  if (!circuit.circuit_game) {
    throw PreconditionError("check_not_all_worse requires a circuit game: " +
                            (circuit.diagnostics.empty() ? std::string("not a circuit game")
                                                         : circuit.diagnostics.front()));
  }
  NotAllWorseReport report;
  report.verdict = detect_ibp(game, expansion, options);
  report.deltas = report.verdict.type_deltas;
  report.holds = std::any_of(report.deltas.begin(), report.deltas.end(),
                             [&](double d) { return d <= options.compare_tolerance; });
  return report;
}

ParadoxInstance make_ibpsc_witness(const Network& network, NodeId origin, NodeId destination,
                                   const IbpscWitnessParams& params) {
  const auto emb = find_pigou_embedding(network, origin, destination, network.all_edges());
  if (!emb) {
    throw PreconditionError(
        "fewer than two origin-destination paths: no information expansion is possible");
  }
  std::vector<CostFunction> costs(network.edge_count(), CostFunction::polynomial({}));
  costs[emb->base_arc.begin()->value] = CostFunction::linear(params.slope);
  costs[emb->detour_arc.begin()->value] = CostFunction::constant(params.constant);

  EdgeSet both = edge_set(emb->base);
  const EdgeSet detour = edge_set(emb->detour);
  both.insert(detour.begin(), detour.end());

  std::vector<Population> pops{{1, origin, destination, both}, {2, origin, destination, both}};
  std::vector<InfoType> types{{1, 1, detour, params.restricted_demand},
                              {2, 1, both, params.informed_demand}};
  EdgeSet added;
  std::set_difference(both.begin(), both.end(), detour.begin(), detour.end(),
                      std::inserter(added, added.end()));
  ParadoxInstance inst{GameSpec(network, std::move(pops), std::move(types), std::move(costs)),
                       Expansion{{1, 1}, std::move(added)}, std::nullopt};
  inst.game.set_name("ibpsc_witness");
  return inst;
}

}  // namespace icue
