#include "icue/families.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "icue/scenarios.hpp"
#include "icue/topology.hpp"

namespace icue {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream: sample i of seed s depends on (s, i) alone.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index)
      : state_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64(state_);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // (lo, hi]
  double upper_closed(double lo, double hi) { return hi - (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

CostFunction random_cost(const FamilySpec& f, Rng& rng) {
  const int degree = rng.between(1, std::max(1, f.max_degree));
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  c[0] = rng.uniform(0.0, f.coeff_max);
  c[1] = rng.uniform(std::min(f.linear_min, f.coeff_max), f.coeff_max);
  for (int j = 2; j <= degree; ++j) c[static_cast<std::size_t>(j)] = rng.uniform(0.0, f.coeff_max);
  return CostFunction::polynomial(std::move(c));
}

std::vector<CostFunction> random_costs(const FamilySpec& f, std::size_t n, Rng& rng) {
  std::vector<CostFunction> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_cost(f, rng));
  return out;
}

// Scales some costs down coefficient-wise, so each stays dominated.
GameSpec cheaper_copy(const GameSpec& game, Rng& rng) {
  std::vector<CostFunction> costs = game.costs();
  bool changed = false;
  for (auto& c : costs) {
    if (c.is_big_m() || !rng.chance(0.4)) continue;
    std::vector<double> coeffs = c.coefficients();
    for (double& x : coeffs) x *= rng.uniform();
    c = CostFunction::polynomial(std::move(coeffs));
    changed = true;
  }
  if (!changed && !costs.empty()) {
    auto& c = costs[rng.below(costs.size())];
    if (!c.is_big_m()) {
      std::vector<double> coeffs = c.coefficients();
      for (double& x : coeffs) x *= 0.5;
      c = CostFunction::polynomial(std::move(coeffs));
    }
  }
  GameSpec out = game.with_costs(std::move(costs));
  out.set_name(game.name() + "_modified");
  return out;
}

EdgeSet random_subset(const EdgeSet& from, Rng& rng) {
  EdgeSet out;
  for (EdgeId e : from) {
    if (rng.chance(0.5)) out.insert(e);
  }
  if (out.empty() && !from.empty()) {
    auto it = from.begin();
    std::advance(it, static_cast<long>(rng.below(from.size())));
    out.insert(*it);
  }
  return out;
}

EdgeSet minus(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// One population on a two-terminal network; known sets are unions of random
// origin-destination paths, and a partially informed type is expanded.
std::optional<ParadoxInstance> two_terminal_instance(const FamilySpec& f, ParadoxKind kind,
                                                     const Network& net, NodeId o, NodeId d,
                                                     Rng& rng, std::string name) {
  const EdgeSet relevant = relevant_edges(net, o, d, net.all_edges());
  const std::vector<Path> paths = enumerate_paths(net, o, d, net.all_edges());
  if (paths.size() < 2) return std::nullopt;

  std::vector<Population> pops{{1, o, d, relevant}};
  std::vector<InfoType> types;
  if (kind == ParadoxKind::bp) {
    types.push_back({1, 1, relevant, rng.upper_closed(f.demand_min, f.demand_max)});
  } else {
    const int k_count = rng.between(1, std::max(1, f.max_types));
    for (int k = 1; k <= k_count; ++k) {
      EdgeSet known;
      for (const Path& p : paths) {
        if (rng.chance(0.5)) known.insert(p.edges.begin(), p.edges.end());
      }
      if (known.empty()) {
        const Path& p = paths[rng.below(paths.size())];
        known.insert(p.edges.begin(), p.edges.end());
      }
      types.push_back({1, k, known, rng.upper_closed(f.demand_min, f.demand_max)});
    }
  }
  GameSpec game(net, pops, types, random_costs(f, net.edge_count(), rng));
  game.set_name(std::move(name));
  if (kind == ParadoxKind::bp) {
    GameSpec modified = cheaper_copy(game, rng);
    return ParadoxInstance{std::move(game), std::nullopt, std::move(modified)};
  }

  std::vector<std::size_t> partial;
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (types[t].known_edges != relevant) partial.push_back(t);
  }
  if (partial.empty()) {
    const Path& p = paths[rng.below(paths.size())];
    types[0].known_edges = edge_set(p);
    game = game.with_types(types);
    partial.push_back(0);
  }
  const InfoType& target = types[partial[rng.below(partial.size())]];
  Expansion exp{target.key(), random_subset(minus(relevant, target.known_edges), rng)};
  return ParadoxInstance{std::move(game), std::move(exp), std::nullopt};
}

std::optional<ParadoxInstance> circuit_instance(const FamilySpec& f, ParadoxKind kind, Rng& rng) {
  const int n = rng.between(std::max(3, f.min_size), std::max(3, f.max_size));
  Network net;
  for (int i = 0; i < n; ++i) net.add_node(fmt::format("v{}", i));
  for (int i = 0; i < n; ++i) {
    net.add_edge(fmt::format("r{}", i), NodeId{static_cast<std::uint32_t>(i)},
                 NodeId{static_cast<std::uint32_t>((i + 1) % n)});
  }
  const EdgeSet ring = net.all_edges();

  const int pop_count = rng.between(1, std::max(1, f.max_populations));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int tries = 0; static_cast<int>(pairs.size()) < pop_count && tries < 100; ++tries) {
    NodeId o{static_cast<std::uint32_t>(rng.below(static_cast<std::size_t>(n)))};
    NodeId d{static_cast<std::uint32_t>(rng.below(static_cast<std::size_t>(n)))};
    if (o == d || std::find(pairs.begin(), pairs.end(), std::pair{o, d}) != pairs.end()) continue;
    pairs.emplace_back(o, d);
  }

  std::vector<Population> pops;
  std::vector<InfoType> types;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    pops.push_back({id, pairs[i].first, pairs[i].second, ring});
    const auto arcs = enumerate_paths(net, pairs[i].first, pairs[i].second, ring);
    const int k_count = kind == ParadoxKind::bp ? 1 : rng.between(1, std::max(1, f.max_types));
    for (int k = 1; k <= k_count; ++k) {
      EdgeSet known = ring;
      if (kind != ParadoxKind::bp && rng.chance(0.5)) known = edge_set(arcs[rng.below(arcs.size())]);
      types.push_back({id, k, known, rng.upper_closed(f.demand_min, f.demand_max)});
    }
  }
  GameSpec game(net, pops, types, random_costs(f, net.edge_count(), rng));
  game.set_name("circuit");
  if (kind == ParadoxKind::bp) {
    GameSpec modified = cheaper_copy(game, rng);
    return ParadoxInstance{std::move(game), std::nullopt, std::move(modified)};
  }

  std::vector<std::size_t> partial;
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (types[t].known_edges != ring) partial.push_back(t);
  }
  if (partial.empty()) {
    const auto arcs = enumerate_paths(net, pops[0].origin, pops[0].destination, ring);
    types[0].known_edges = edge_set(arcs[rng.below(arcs.size())]);
    game = game.with_types(types);
    partial.push_back(0);
  }
  const InfoType& target = types[partial[rng.below(partial.size())]];
  // On a ring only the complete other arc adds a route.
  Expansion exp{target.key(), minus(ring, target.known_edges)};
  return ParadoxInstance{std::move(game), std::move(exp), std::nullopt};
}

std::optional<ParadoxInstance> sli_instance(const FamilySpec& f, ParadoxKind kind, Rng& rng) {
  Network net;
  int node_counter = 0;
  auto new_node = [&] { return net.add_node(fmt::format("n{}", node_counter++)); };
  const NodeId origin = new_node();
  NodeId at = origin;
  const int blocks = rng.between(std::max(1, f.min_size), std::max(1, f.max_size));
  int edge_counter = 0;
  auto new_edge = [&](NodeId a, NodeId b) { net.add_edge(fmt::format("s{}", edge_counter++), a, b); };
  // At least one ring, so that some expansion exists.
  const int forced_ring = rng.between(0, blocks - 1);
  for (int b = 0; b < blocks; ++b) {
    const NodeId next = new_node();
    if (b != forced_ring && rng.chance(1.0 / 3.0)) {
      new_edge(at, next);
    } else {
      for (int arc = 0; arc < 2; ++arc) {
        const int len = rng.between(1, 3);
        NodeId prev = at;
        for (int j = 1; j < len; ++j) {
          const NodeId mid = new_node();
          new_edge(prev, mid);
          prev = mid;
        }
        new_edge(prev, next);
      }
    }
    at = next;
  }
  return two_terminal_instance(f, kind, net, origin, at, rng, "sli_chain");
}

std::optional<ParadoxInstance> wheatstone_instance(const FamilySpec& f, ParadoxKind kind,
                                                   Rng& rng) {
  Network net;
  for (const char* n : {"O", "1", "2", "D"}) net.add_node(n);
  net.add_edge("O1", "O", "1");
  net.add_edge("1D", "1", "D");
  net.add_edge("O2", "O", "2");
  net.add_edge("2D", "2", "D");
  net.add_edge("12", "1", "2");
  auto steep = [&] { return CostFunction::linear(rng.uniform(0.5, 1.5), rng.uniform(0.0, 0.25)); };
  auto flat = [&] { return CostFunction::linear(rng.uniform(0.0, 0.25), rng.uniform(0.5, 1.5)); };
  auto cross = [&] { return CostFunction::linear(rng.uniform(0.0, 0.2), rng.uniform(0.0, 0.2)); };
  std::vector<CostFunction> costs{steep(), flat(), flat(), steep(), cross()};
  const EdgeSet all = net.all_edges();
  const EdgeSet outer{EdgeId{0}, EdgeId{1}, EdgeId{2}, EdgeId{3}};
  std::vector<Population> pops{{1, net.node("O"), net.node("D"), all}};

  if (kind == ParadoxKind::bp) {
    std::vector<InfoType> types{{1, 1, all, rng.uniform(0.3, 1.5)}};
    std::vector<CostFunction> original = costs;
    if (rng.chance(0.5)) {
      original[4] = CostFunction::big_m();
    } else {
      std::vector<double> c = costs[4].coefficients();
      c[0] += rng.uniform(0.5, 2.0);
      original[4] = CostFunction::polynomial(std::move(c));
    }
    GameSpec game(net, pops, types, std::move(original));
    game.set_name("wheatstone");
    GameSpec modified(net, pops, types, std::move(costs));
    modified.set_name("wheatstone_modified");
    return ParadoxInstance{std::move(game), std::nullopt, std::move(modified)};
  }
  std::vector<InfoType> types{{1, 1, outer, rng.uniform(0.3, 1.5)}};
  if (f.max_types > 1 && rng.chance(0.5)) types.push_back({1, 2, all, rng.uniform(0.0, 0.5)});
  GameSpec game(net, pops, types, std::move(costs));
  game.set_name("wheatstone");
  return ParadoxInstance{std::move(game), Expansion{{1, 1}, {EdgeId{4}}}, std::nullopt};
}

IbpscWitnessParams random_witness_params(Rng& rng) {
  IbpscWitnessParams p;
  p.slope = rng.uniform(0.5, 2.0);
  p.restricted_demand = rng.upper_closed(0.2, 2.0);
  p.informed_demand = rng.upper_closed(0.2, 2.0);
  // Social cost rises exactly when slope*d2 < constant < slope*(d1 + 2*d2);
  // the range reaches a little past the upper end.
  const double u = rng.uniform(0.05, 1.2);
  p.constant = p.slope * (p.informed_demand + u * (p.restricted_demand + p.informed_demand));
  return p;
}

std::optional<ParadoxInstance> pigou_instance(const FamilySpec& f, ParadoxKind kind, Rng& rng) {
  const int n = rng.between(2, 5);
  Network net;
  for (int i = 0; i < n; ++i) net.add_node(fmt::format("u{}", i));
  int edge_counter = 0;
  for (int i = 1; i < n; ++i) {
    net.add_edge(fmt::format("g{}", edge_counter++), NodeId{static_cast<std::uint32_t>(rng.below(i))},
                 NodeId{static_cast<std::uint32_t>(i)});
  }
  const int extra = rng.between(1, 3);
  for (int j = 0; j < extra; ++j) {
    const auto a = static_cast<std::uint32_t>(rng.below(static_cast<std::size_t>(n)));
    auto b = static_cast<std::uint32_t>(rng.below(static_cast<std::size_t>(n - 1)));
    if (b >= a) ++b;
    net.add_edge(fmt::format("g{}", edge_counter++), NodeId{a}, NodeId{b});
  }
  const NodeId o{0};
  const NodeId d{static_cast<std::uint32_t>(rng.between(1, n - 1))};
  if (kind == ParadoxKind::ibpsc) {
    if (!has_pigou_embedding(net, o, d)) return std::nullopt;
    ParadoxInstance inst = make_ibpsc_witness(net, o, d, random_witness_params(rng));
    inst.game.set_name("pigou");
    return inst;
  }
  return two_terminal_instance(f, kind, net, o, d, rng, "pigou");
}

std::optional<ParadoxInstance> fixed_instance(const FamilySpec& f, ParadoxKind kind, Rng& rng) {
  const Scenario sc = builtin_scenario(f.scenario);
  const GameSpec& game = sc.instance.game;
  const Network& net = game.network();
  for (const Population& pop : game.populations()) {
    if (!has_pigou_embedding(net, pop.origin, pop.destination)) continue;
    const std::string name = "topology_" + f.scenario;
    if (kind == ParadoxKind::ibpsc) {
      ParadoxInstance inst =
          make_ibpsc_witness(net, pop.origin, pop.destination, random_witness_params(rng));
      inst.game.set_name(name);
      return inst;
    }
    return two_terminal_instance(f, kind, net, pop.origin, pop.destination, rng, name);
  }
  return std::nullopt;  // every population has a single route
}

FamilyTemplate parse_template(const std::string& text) {
  if (text == "circuit") return FamilyTemplate::circuit;
  if (text == "sli_chain" || text == "sli") return FamilyTemplate::sli_chain;
  if (text == "wheatstone") return FamilyTemplate::wheatstone;
  if (text == "pigou") return FamilyTemplate::pigou;
  if (text == "fixed_network") return FamilyTemplate::fixed_network;
  throw std::invalid_argument(fmt::format("unknown family template '{}'", text));
}

}  // namespace

std::string to_string(FamilyTemplate tmpl) {
  switch (tmpl) {
    case FamilyTemplate::circuit: return "circuit";
    case FamilyTemplate::sli_chain: return "sli_chain";
    case FamilyTemplate::wheatstone: return "wheatstone";
    case FamilyTemplate::pigou: return "pigou";
    case FamilyTemplate::fixed_network: return "fixed_network";
  }
  return "?";
}

FamilySpec builtin_family(std::string_view name) {
  FamilySpec f;
  f.name = std::string(name);
  if (name == "circuit") {
    f.tmpl = FamilyTemplate::circuit;
    return f;
  }
  if (name == "sli") {
    f.tmpl = FamilyTemplate::sli_chain;
    f.min_size = 1;
    f.max_size = 4;
    f.max_populations = 1;
    return f;
  }
  if (name == "wheatstone") {
    f.tmpl = FamilyTemplate::wheatstone;
    f.max_populations = 1;
    return f;
  }
  if (name == "pigou") {
    f.tmpl = FamilyTemplate::pigou;
    f.max_populations = 1;
    return f;
  }
  constexpr std::string_view prefix = "topology:";
  if (name.substr(0, prefix.size()) == prefix) {
    f.tmpl = FamilyTemplate::fixed_network;
    f.scenario = std::string(name.substr(prefix.size()));
    (void)builtin_scenario(f.scenario);  // rejects unknown ids
    return f;
  }
  throw std::invalid_argument(fmt::format(
      "unknown family '{}' (expected circuit, sli, wheatstone, pigou, topology:<scenario> or a "
      "JSON file)",
      name));
}

FamilySpec resolve_family(std::string_view name_or_path) {
  const std::string text(name_or_path);
  std::ifstream in(text);
  if (!in) return builtin_family(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("family file '{}': {}", text, e.what()));
  }
  FamilySpec f;
  try {
    f.name = j.value("name", text);
    f.tmpl = parse_template(j.at("template").get<std::string>());
    f.min_size = j.value("min_size", f.min_size);
    f.max_size = j.value("max_size", f.max_size);
    f.max_populations = j.value("max_populations", f.max_populations);
    f.max_types = j.value("max_types", f.max_types);
    f.max_degree = j.value("max_degree", f.max_degree);
    f.coeff_max = j.value("coeff_max", f.coeff_max);
    f.linear_min = j.value("linear_min", f.linear_min);
    f.demand_min = j.value("demand_min", f.demand_min);
    f.demand_max = j.value("demand_max", f.demand_max);
    f.scenario = j.value("scenario", f.scenario);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("family file '{}': {}", text, e.what()));
  }
  if (f.min_size > f.max_size || f.max_degree < 1 || f.coeff_max < 0.0 || f.demand_min < 0.0 ||
      f.demand_max < f.demand_min) {
    throw std::invalid_argument(fmt::format("family file '{}': inconsistent ranges", text));
  }
  if (f.tmpl == FamilyTemplate::fixed_network) (void)builtin_scenario(f.scenario);
  return f;
}

std::optional<ParadoxInstance> sample_instance(const FamilySpec& family, ParadoxKind kind,
                                               std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, index);
  switch (family.tmpl) {
    case FamilyTemplate::circuit: return circuit_instance(family, kind, rng);
    case FamilyTemplate::sli_chain: return sli_instance(family, kind, rng);
    case FamilyTemplate::wheatstone: return wheatstone_instance(family, kind, rng);
    case FamilyTemplate::pigou: return pigou_instance(family, kind, rng);
    case FamilyTemplate::fixed_network: return fixed_instance(family, kind, rng);
  }
  return std::nullopt;
}

namespace {

enum class Outcome3 { skipped, withheld, quiet, witness };

struct Slot {
  Outcome3 outcome = Outcome3::skipped;
  std::optional<Witness> witness;
};

Slot evaluate(const FamilySpec& family, ParadoxKind kind, std::uint64_t seed, std::uint64_t index,
              const ParadoxOptions& options) {
  Slot slot;
  std::optional<ParadoxInstance> inst = sample_instance(family, kind, seed, index);
  if (!inst) return slot;
  ParadoxVerdict verdict;
  std::optional<ParadoxVerdict> companion;
  if (kind == ParadoxKind::bp) {
    verdict = detect_bp(inst->game, *inst->modified, options);
  } else {
    JointVerdict joint = detect_information_paradoxes(inst->game, *inst->expansion, options);
    verdict = std::move(kind == ParadoxKind::ibp ? joint.ibp : joint.ibpsc);
    companion = std::move(kind == ParadoxKind::ibp ? joint.ibpsc : joint.ibp);
  }
  if (verdict.status == VerdictStatus::withheld) {
    slot.outcome = Outcome3::withheld;
    return slot;
  }
  slot.outcome = verdict.occurred ? Outcome3::witness : Outcome3::quiet;
  if (verdict.occurred) {
    slot.witness = Witness{index, std::move(*inst), std::move(verdict), std::move(companion)};
  }
  return slot;
}

}  // namespace

SearchReport search_paradox(const FamilySpec& family, ParadoxKind kind, std::uint64_t budget,
                            std::uint64_t seed, const ParadoxOptions& options, unsigned threads) {
  SearchReport report;
  report.sampled = budget;
  if (budget == 0) return report;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, budget));

  std::vector<Slot> slots(budget);
  std::atomic<std::uint64_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned w) {
    try {
      for (std::uint64_t i = next++; i < budget; i = next++) {
        slots[i] = evaluate(family, kind, seed, i, options);
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next = budget;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (Slot& s : slots) {
    switch (s.outcome) {
      case Outcome3::skipped: ++report.skipped; break;
      case Outcome3::withheld: ++report.withheld; break;
      case Outcome3::quiet: break;
      case Outcome3::witness: report.witnesses.push_back(std::move(*s.witness)); break;
    }
  }
  return report;
}

std::vector<std::string> search_csv_header() {
  return {"sample",           "kind",          "occurred",           "confidence",
          "target",           "value_before",  "value_after",        "delta",
          "social_before",    "social_after",  "target_cost_before", "target_cost_after",
          "companion_kind",   "companion_occurred", "game"};
}

std::vector<std::vector<std::string>> search_csv_rows(const SearchReport& report) {
  auto num = [](double x) { return fmt::format("{:.12g}", x); };
  std::vector<std::vector<std::string>> rows;
  for (const Witness& w : report.witnesses) {
    const ParadoxVerdict& v = w.verdict;
    rows.push_back({std::to_string(w.sample), to_string(v.kind), v.occurred ? "true" : "false",
                    to_string(v.confidence), to_string(v.target), num(v.value_before),
                    num(v.value_after), num(v.delta), num(v.before.social_cost),
                    num(v.after.social_cost), num(v.target_cost_before), num(v.target_cost_after),
                    w.companion ? to_string(w.companion->kind) : "",
                    w.companion ? (w.companion->occurred ? "true" : "false") : "",
                    w.instance.game.name()});
  }
  return rows;
}

}  // namespace icue
