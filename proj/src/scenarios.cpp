#include "icue/scenarios.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace icue {
namespace {

EdgeSet named(const Network& net, std::initializer_list<const char*> names) {
  EdgeSet out;
  for (const char* n : names) out.insert(net.edge_id(n));
  return out;
}

// O -> D through 1 and 2, with the cross edge 12.
Network wheatstone_network() {
  Network net;
  for (const char* n : {"O", "1", "2", "D"}) net.add_node(n);
  net.add_edge("O1", "O", "1");
  net.add_edge("1D", "1", "D");
  net.add_edge("O2", "O", "2");
  net.add_edge("2D", "2", "D");
  net.add_edge("12", "1", "2");
  return net;
}

std::vector<CostFunction> wheatstone_costs(CostFunction middle) {
  return {CostFunction::linear(1.0), CostFunction::constant(1.0), CostFunction::constant(1.0),
          CostFunction::linear(1.0), std::move(middle)};
}

Scenario wheatstone_bp() {
  Network net = wheatstone_network();
  const EdgeSet all = net.all_edges();
  std::vector<Population> pops{{1, net.node("O"), net.node("D"), all}};
  std::vector<InfoType> types{{1, 1, all, 1.0}};
  GameSpec game(net, pops, types, wheatstone_costs(CostFunction::big_m()));
  game.set_name("wheatstone_bp").set_description(
      "Braess network, unit demand. The cross edge is unusable (big-M) and then free.");
  GameSpec modified(net, pops, types, wheatstone_costs(CostFunction::constant(0.0)));
  modified.set_name("wheatstone_bp_modified");
  return {"wheatstone_bp", ParadoxKind::bp, {std::move(game), std::nullopt, std::move(modified)}};
}

Scenario wheatstone_ibp() {
  Network net = wheatstone_network();
  const EdgeSet all = net.all_edges();
  std::vector<Population> pops{{1, net.node("O"), net.node("D"), all}};
  std::vector<InfoType> types{{1, 1, named(net, {"O1", "1D", "O2", "2D"}), 1.0}};
  GameSpec game(net, pops, types, wheatstone_costs(CostFunction::constant(0.0)));
  game.set_name("wheatstone_ibp").set_description(
      "Braess network, unit demand. The only type does not know the free cross edge until it "
      "is revealed.");
  return {"wheatstone_ibp", ParadoxKind::ibp,
          {std::move(game), Expansion{{1, 1}, named(net, {"12"})}, std::nullopt}};
}

Scenario pigou_ibpsc() {
  Network net;
  net.add_node("O");
  net.add_node("D");
  net.add_edge("e1", "O", "D");
  net.add_edge("e2", "O", "D");
  const EdgeSet all = net.all_edges();
  std::vector<Population> pops{{1, net.node("O"), net.node("D"), all},
                               {2, net.node("O"), net.node("D"), all}};
  std::vector<InfoType> types{{1, 1, named(net, {"e2"}), 1.0}, {2, 1, all, 1.0}};
  GameSpec game(net, pops, types, {CostFunction::linear(1.0), CostFunction::constant(2.0)});
  game.set_name("pigou_ibpsc").set_description(
      "Two parallel edges, e1 with cost t and e2 with constant cost 2, two unit populations. "
      "Population 1 initially knows only the constant-cost edge e2; knowing e1 as well moves "
      "the social cost from 3 to 4. Restricting population 1 to e1 instead would already give "
      "social cost 4 before the expansion.");
  return {"pigou_ibpsc", ParadoxKind::ibpsc,
          {std::move(game), Expansion{{1, 1}, named(net, {"e1"})}, std::nullopt}};
}

Scenario two_pop_ring() {
  Network net;
  for (const char* n : {"O1", "O2", "D1", "D2"}) net.add_node(n);
  net.add_edge("e1", "O1", "O2");
  net.add_edge("e2", "O2", "D1");
  net.add_edge("e3", "D1", "D2");
  net.add_edge("e4", "D2", "O1");
  const EdgeSet all = net.all_edges();
  std::vector<Population> pops{{1, net.node("O1"), net.node("D1"), all},
                               {2, net.node("O2"), net.node("D2"), all}};
  std::vector<InfoType> types{{1, 1, named(net, {"e1", "e2"}), 1.0},
                              {1, 2, all, 1.0},
                              {2, 2, all, 1.0}};
  std::vector<CostFunction> costs(4, CostFunction::linear(1.0));
  GameSpec game(net, pops, types, costs);
  game.set_name("two_pop_ring").set_description(
      "Four-edge ring shared by two populations with crossing routes, all costs t, unit "
      "demands. Type (1,1) starts out knowing one arc.");
  return {"two_pop_ring", ParadoxKind::ibp,
          {std::move(game), Expansion{{1, 1}, named(net, {"e3", "e4"})}, std::nullopt}};
}

Scenario grid_2x3() {
  // Two rows of three: E C A over D F B; the Braess pattern runs E to B.
  Network net;
  for (const char* n : {"E", "C", "A", "D", "F", "B"}) net.add_node(n);
  net.add_edge("AB", "A", "B");
  net.add_edge("AC", "A", "C");
  net.add_edge("CF", "C", "F");
  net.add_edge("FB", "F", "B");
  net.add_edge("FD", "F", "D");
  net.add_edge("DE", "D", "E");
  net.add_edge("CE", "C", "E");
  const EdgeSet all = net.all_edges();
  std::vector<Population> pops{{1, net.node("E"), net.node("B"), all}};
  std::vector<InfoType> types{{1, 1, named(net, {"AB", "AC", "FB", "FD", "DE", "CE"}), 1.0}};
  std::vector<CostFunction> costs{CostFunction::constant(0.5), CostFunction::constant(0.5),
                                  CostFunction::constant(0.0), CostFunction::linear(1.0),
                                  CostFunction::constant(0.5), CostFunction::constant(0.5),
                                  CostFunction::linear(1.0)};
  GameSpec game(net, pops, types, costs);
  game.set_name("grid_2x3").set_description(
      "Braess network laid out on a 2x3 grid from corner E to corner B. The free rung CF is "
      "unknown until the expansion.");
  return {"grid_2x3", ParadoxKind::ibp,
          {std::move(game), Expansion{{1, 1}, named(net, {"CF"})}, std::nullopt}};
}

Scenario stadium_ring() {
  GameSpec game = stadium_game(false);
  const Network& net = game.network();
  return {"stadium_ring", ParadoxKind::ibp,
          {game, Expansion{{1, 1}, named(net, {"FG", "GH", "HA"})}, std::nullopt}};
}

}  // namespace

GameSpec stadium_game(bool inter_block_walking) {
  Network net;
  const char* gates[] = {"A", "B", "C", "D", "E", "F", "G", "H"};
  for (const char* g : gates) net.add_node(g);
  for (int i = 0; i < 8; ++i) {
    net.add_edge(fmt::format("{}{}", gates[i], gates[(i + 1) % 8]), gates[i], gates[(i + 1) % 8]);
  }
  for (const char* s : {"S1", "S2", "S3", "S4", "T1", "T2"}) net.add_node(s);
  net.add_edge("S1A", "S1", "A");
  net.add_edge("S2C", "S2", "C");
  net.add_edge("S3E", "S3", "E");
  net.add_edge("S4G", "S4", "G");
  net.add_edge("T1B", "T1", "B");
  net.add_edge("T2F", "T2", "F");
  if (inter_block_walking) {
    net.add_edge("AE", "A", "E");
    net.add_edge("CG", "C", "G");
  }
  EdgeSet ring;
  for (int i = 0; i < 8; ++i) ring.insert(EdgeId{static_cast<std::uint32_t>(i)});
  EdgeSet usable = ring;
  if (inter_block_walking) usable.insert({net.edge_id("AE"), net.edge_id("CG")});

  // Crowds leave the seat blocks at A, C and E for the stops at F and B.
  std::vector<Population> pops{{1, net.node("A"), net.node("F"), usable},
                               {2, net.node("C"), net.node("B"), usable},
                               {3, net.node("E"), net.node("B"), usable}};
  std::vector<InfoType> types{{1, 1, named(net, {"AB", "BC", "CD", "DE", "EF"}), 1.0},
                              {1, 2, usable, 0.5},
                              {2, 1, usable, 1.0},
                              {3, 1, usable, 0.8}};
  std::vector<CostFunction> costs;
  for (int i = 0; i < 8; ++i) costs.push_back(CostFunction::linear(1.0 + 0.25 * (i % 3), 0.2));
  for (int i = 0; i < 6; ++i) costs.push_back(CostFunction::constant(0.1));
  if (inter_block_walking) {
    costs.push_back(CostFunction::linear(0.5, 0.6));
    costs.push_back(CostFunction::linear(0.5, 0.6));
  }
  GameSpec game(std::move(net), std::move(pops), std::move(types), std::move(costs));
  game.set_name(inter_block_walking ? "stadium_walkways" : "stadium_ring")
      .set_description(
          "Stadium evacuation on the concourse ring. Type (1,1) knows only the eastern half of "
          "the ring.");
  return game;
}

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids{"wheatstone_bp", "wheatstone_ibp", "pigou_ibpsc",
                                            "two_pop_ring",  "grid_2x3",       "stadium_ring"};
  return ids;
}

Scenario builtin_scenario(std::string_view id) {
  if (id == "wheatstone_bp") return wheatstone_bp();
  if (id == "wheatstone_ibp") return wheatstone_ibp();
  if (id == "pigou_ibpsc") return pigou_ibpsc();
  if (id == "two_pop_ring") return two_pop_ring();
  if (id == "grid_2x3") return grid_2x3();
  if (id == "stadium_ring") return stadium_ring();
  throw std::invalid_argument(fmt::format("unknown scenario '{}'", id));
}

ScenarioRun run_scenario(const Scenario& scenario, const ParadoxOptions& options) {
  ScenarioRun run{scenario, immunity_certificate(scenario.instance.game), {}, {}, std::nullopt};
  const ParadoxInstance& inst = scenario.instance;
  if (scenario.kind == ParadoxKind::bp) {
    run.verdict = detect_bp(inst.game, *inst.modified, options);
    run.equilibrium = run.verdict.before;
    return run;
  }
  JointVerdict joint = detect_information_paradoxes(inst.game, *inst.expansion, options);
  run.equilibrium = joint.ibp.before;
  if (scenario.kind == ParadoxKind::ibp) {
    run.verdict = std::move(joint.ibp);
    run.companion = std::move(joint.ibpsc);
  } else {
    run.verdict = std::move(joint.ibpsc);
    run.companion = std::move(joint.ibp);
  }
  return run;
}

}  // namespace icue
