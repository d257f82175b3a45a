// Command-line front end. Exit codes: 0 computed, 2 paradox occurred, 1 error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "icue/export.hpp"
#include "icue/families.hpp"
#include "icue/game_io.hpp"
#include "icue/scenarios.hpp"
#include "icue/topology.hpp"

namespace fs = std::filesystem;
using namespace icue;

namespace {

constexpr int kExitComputed = 0;
constexpr int kExitError = 1;
constexpr int kExitParadox = 2;

std::string num(double x) { return fmt::format("{:.10g}", x); }

// A game file, an instance or witness file, or a builtin scenario id.
InstanceDocument load_any(const std::string& source) {
  if (!fs::exists(source)) {
    for (const auto& id : scenario_ids()) {
      if (id == source) {
        Scenario sc = builtin_scenario(id);
        return {sc.kind, std::move(sc.instance), std::nullopt};
      }
    }
    throw std::runtime_error(fmt::format("no such file or scenario '{}'", source));
  }
  std::ifstream in(source);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error&) {
    return {ParadoxKind::ibp, {load_game(source), std::nullopt, std::nullopt}, std::nullopt};
  }
  if (doc.is_object() && doc.contains("game")) return instance_from_json(doc);
  return {ParadoxKind::ibp, {game_from_json(doc), std::nullopt, std::nullopt}, std::nullopt};
}

Expansion parse_expansion(const GameSpec& game, const std::vector<std::string>& args) {
  if (args.size() < 2) throw std::invalid_argument("--expand needs a type i,k and at least one edge");
  int pop = 0, k = 0;
  char comma = 0;
  std::istringstream ss(args[0]);
  if (!(ss >> pop >> comma >> k) || comma != ',' || !ss.eof()) {
    throw std::invalid_argument(fmt::format("bad type '{}', expected i,k", args[0]));
  }
  Expansion exp{{pop, k}, {}};
  for (std::size_t i = 1; i < args.size(); ++i) exp.added.insert(game.network().edge_id(args[i]));
  return exp;
}

void print_verdict(const ParadoxVerdict& v, const GameSpec& game) {
  fmt::print("kind: {}\n", to_string(v.kind));
  fmt::print("occurred: {}\n", v.occurred ? "true" : "false");
  fmt::print("status: {}\n", v.status == VerdictStatus::computed ? "computed" : "withheld");
  fmt::print("confidence: {}\n", to_string(v.confidence));
  fmt::print("social_cost_before: {}\n", num(v.before.social_cost));
  fmt::print("social_cost_after: {}\n", num(v.after.social_cost));
  fmt::print("target: {}\n", to_string(v.target));
  fmt::print("target_cost_before: {}\n", num(v.target_cost_before));
  fmt::print("target_cost_after: {}\n", num(v.target_cost_after));
  fmt::print("delta: {}\n", num(v.delta));
  for (std::size_t t = 0; t < v.type_deltas.size() && t < game.types().size(); ++t) {
    fmt::print("type_delta {}: {}\n", to_string(game.types()[t].key()), num(v.type_deltas[t]));
  }
  if (!v.diagnostic.empty()) fmt::print("diagnostic: {}\n", v.diagnostic);
}

void print_equilibrium(const GameSpec& game, const EquilibriumResult& r) {
  fmt::print("converged: {}\n", r.converged ? "true" : "false");
  fmt::print("iterations: {}\n", r.iterations);
  fmt::print("loads_possibly_non_unique: {}\n", r.loads_possibly_non_unique ? "true" : "false");
  fmt::print("social_cost: {}\n", num(r.social_cost));
  for (std::size_t t = 0; t < game.types().size(); ++t) {
    fmt::print("type {}: cost {} gap {} relative_gap {}\n", to_string(game.types()[t].key()),
               num(r.type_costs[t]), num(r.gaps[t].absolute), num(r.gaps[t].relative));
  }
  const Network& net = game.network();
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    fmt::print("edge {}: load {}\n", net.edges()[e].name, num(r.loads[e]));
  }
}

void print_classification(const GameSpec& game) {
  const Network& net = game.network();
  fmt::print("nodes: {}\nedges: {}\n", net.node_count(), net.edge_count());
  fmt::print("simple: {}\ntree: {}\nring: {}\n", is_simple(net), is_tree(net), is_ring(net));
  for (const Population& pop : game.populations()) {
    const EdgeSet rel = relevant_network(game, pop);
    const LiReport li = is_li(net, pop.origin, pop.destination, rel);
    const SliReport sli = is_sli(net, pop.origin, pop.destination, rel);
    fmt::print("population {} ({} -> {}): paths {} li {} sli {} pigou_embedding {}\n", pop.id,
               net.node_name(pop.origin), net.node_name(pop.destination), li.paths.size(), li.li,
               sli.sli, has_pigou_embedding(net, pop.origin, pop.destination, rel));
  }
  const CircuitGameReport circuit = is_circuit_game(game);
  fmt::print("circuit_game: {}\n", circuit.circuit_game);
  for (const auto& d : circuit.diagnostics) fmt::print("circuit_diagnostic: {}\n", d);
  const ImmunityCertificate cert = immunity_certificate(game);
  fmt::print("certificate: {}\n", to_string(cert.verdict));
  if (!cert.note.empty()) fmt::print("certificate_note: {}\n", cert.note);
  fmt::print("certificate_verified: {}\n", verify_certificate(game, cert));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-constrained equilibria and paradox detection in congestion games"};
  app.require_subcommand(1);
  app.fallthrough();

  ParadoxOptions options;
  app.add_option("--tol", options.solver.tolerance, "Relative equilibrium gap tolerance");
  app.add_option("--max-iters", options.solver.max_iterations, "Solver iteration limit");
  app.add_option("--big-m", options.solver.big_m, "Value standing in for infinite cost");
  app.add_option("--grid", options.solver.grid_resolution, "Brute-force oracle grid resolution");
  std::uint64_t& seed = options.solver.seed;
  app.add_option("--seed", seed, "Random seed");

  int exit_code = kExitComputed;
  std::string file, modified_file, family = "circuit", kind = "IBP", scenario_id, witness_dir;
  std::vector<std::string> expand;
  std::uint64_t budget = 100;
  unsigned threads = 1;
  bool run = false, dot = false, csv = false;

  auto* classify = app.add_subcommand("classify", "Topology classes and immunity certificate");
  classify->add_option("file", file, "Game file or scenario id")->required();
  classify->callback([&] { print_classification(load_any(file).instance.game); });

  auto* solve = app.add_subcommand("solve", "Compute the equilibrium");
  solve->add_option("file", file, "Game file or scenario id")->required();
  solve->callback([&] {
    const GameSpec game = load_any(file).instance.game;
    print_equilibrium(game, solve_icue(game, options.solver));
  });

  auto info_detector = [&](ParadoxKind k) {
    const InstanceDocument doc = load_any(file);
    const Expansion exp = expand.empty() ? (doc.instance.expansion
                                                ? *doc.instance.expansion
                                                : throw std::invalid_argument("--expand is required"))
                                         : parse_expansion(doc.instance.game, expand);
    const JointVerdict joint = detect_information_paradoxes(doc.instance.game, exp, options);
    const ParadoxVerdict& v = k == ParadoxKind::ibp ? joint.ibp : joint.ibpsc;
    const ParadoxVerdict& other = k == ParadoxKind::ibp ? joint.ibpsc : joint.ibp;
    print_verdict(v, doc.instance.game);
    fmt::print("companion_{}_occurred: {}\n", to_string(other.kind), other.occurred);
    if (v.occurred) exit_code = kExitParadox;
  };
  for (ParadoxKind k : {ParadoxKind::ibp, ParadoxKind::ibpsc}) {
    auto* sub = app.add_subcommand(k == ParadoxKind::ibp ? "ibp" : "ibpsc",
                                   k == ParadoxKind::ibp
                                       ? "Does expanding a type's information raise its own cost?"
                                       : "Does expanding a type's information raise social cost?");
    sub->add_option("file", file, "Game, instance file or scenario id")->required();
    sub->add_option("--expand", expand, "Type i,k followed by the edges to add")->expected(2, -1);
    sub->callback([&, k] { info_detector(k); });
  }

  auto* bp = app.add_subcommand("bp", "Does lowering costs or demands raise social cost?");
  bp->add_option("file", file, "Game, instance file or scenario id")->required();
  bp->add_option("modified", modified_file, "Game with dominated costs and demands");
  bp->callback([&] {
    const InstanceDocument doc = load_any(file);
    GameSpec modified;
    if (!modified_file.empty()) {
      modified = load_any(modified_file).instance.game;
    } else if (doc.instance.modified) {
      modified = *doc.instance.modified;
    } else {
      throw std::invalid_argument("a modified game is required");
    }
    const ParadoxVerdict v = detect_bp(doc.instance.game, modified, options);
    print_verdict(v, doc.instance.game);
    if (v.occurred) exit_code = kExitParadox;
  });

  auto* search = app.add_subcommand("search", "Seeded random search for paradox witnesses (CSV)");
  search->add_option("--family", family, "circuit, sli, wheatstone, pigou, topology:<id> or JSON file");
  search->add_option("--kind", kind, "IBP, IBPSC or BP");
  search->add_option("--budget", budget, "Number of samples");
  search->add_option("--threads", threads, "Worker threads (0 = all cores)");
  search->add_option("--witness-dir", witness_dir, "Write each witness as JSON here");
  search->callback([&] {
    const FamilySpec spec = resolve_family(family);
    const SearchReport report =
        search_paradox(spec, parse_paradox_kind(kind), budget, seed, options, threads);
    fmt::print("{}", export_csv(search_csv_header(), search_csv_rows(report)));
    fmt::print(stderr, "sampled {} witnesses {} skipped {} withheld {}\n", report.sampled,
               report.witnesses.size(), report.skipped, report.withheld);
    if (!witness_dir.empty()) {
      fs::create_directories(witness_dir);
      for (const Witness& w : report.witnesses) {
        std::ofstream out(fs::path(witness_dir) / fmt::format("witness_{:06}.json", w.sample));
        out << witness_to_json(w, spec, seed).dump(2) << "\n";
      }
    }
    if (!report.witnesses.empty()) exit_code = kExitParadox;
  });

  auto* scenario = app.add_subcommand("scenario", "Print or run a builtin scenario");
  scenario->add_option("id", scenario_id, "Scenario id")->required();
  scenario->add_flag("--run", run, "Solve and report the paradox verdict");
  scenario->callback([&] {
    const Scenario sc = builtin_scenario(scenario_id);
    if (!run) {
      fmt::print("{}\n", instance_to_json(sc.kind, sc.instance).dump(2));
      return;
    }
    const ScenarioRun r = run_scenario(sc, options);
    fmt::print("scenario: {}\n", sc.id);
    fmt::print("certificate: {}\n", to_string(r.certificate.verdict));
    print_verdict(r.verdict, sc.instance.game);
    if (r.companion) {
      fmt::print("companion_{}_occurred: {}\n", to_string(r.companion->kind), r.companion->occurred);
    }
    if (r.verdict.occurred) exit_code = kExitParadox;
  });

  auto* exp = app.add_subcommand("export", "DOT graph or equilibrium CSV");
  exp->add_option("file", file, "Game file or scenario id")->required();
  auto* dot_flag = exp->add_flag("--dot", dot, "Graphviz output with equilibrium loads");
  auto* csv_flag = exp->add_flag("--csv", csv, "Per-edge equilibrium loads and costs");
  dot_flag->excludes(csv_flag);
  exp->callback([&] {
    if (!dot && !csv) throw std::invalid_argument("choose --dot or --csv");
    const GameSpec game = load_any(file).instance.game;
    const EquilibriumResult r = solve_icue(game, options.solver);
    fmt::print("{}", dot ? export_dot(game, r.loads) : equilibrium_csv(game, r));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitComputed : kExitError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  }
  return exit_code;
}
