#include "icue/game_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace icue {

using nlohmann::json;

GameFormatError::GameFormatError(std::string where, const std::string& message)
    : std::runtime_error(where.empty() ? message : fmt::format("{}: {}", where, message)),
      where_(std::move(where)),
      message_(message) {}

namespace {

json edge_names(const Network& net, const EdgeSet& edges) {
  json out = json::array();
  for (EdgeId e : edges) out.push_back(net.edge_name(e));
  return out;
}

json cost_to_json(const CostFunction& c) {
  if (c.is_big_m()) return {{"kind", "big_m"}, {"value", c.big_m_value()}};
  return {{"kind", "polynomial"}, {"coefficients", c.coefficients()}};
}

// Accessors that report the JSON pointer of whatever is missing or mistyped.
class Reader {
 public:
  const json& at(const json& obj, const std::string& key, const std::string& ptr) const {
    if (!obj.is_object()) throw GameFormatError(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw GameFormatError(ptr, fmt::format("missing field '{}'", key));
    return *it;
  }
  const json& array(const json& obj, const std::string& key, const std::string& ptr) const {
    const json& v = at(obj, key, ptr);
    if (!v.is_array()) throw GameFormatError(ptr + "/" + key, "expected an array");
    return v;
  }
  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) throw GameFormatError(ptr, "expected a string");
    return v.get<std::string>();
  }
  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) throw GameFormatError(ptr, "expected a number");
    return v.get<double>();
  }
  int integer(const json& v, const std::string& ptr) const {
    if (!v.is_number_integer()) throw GameFormatError(ptr, "expected an integer");
    return v.get<int>();
  }
};

NodeId node_ref(const Network& net, const Reader& r, const json& v, const std::string& ptr) {
  const std::string name = r.string(v, ptr);
  auto id = net.find_node(name);
  if (!id) throw GameFormatError(ptr, fmt::format("unknown node '{}'", name));
  return *id;
}

EdgeSet edge_refs(const Network& net, const Reader& r, const json& arr, const std::string& ptr) {
  EdgeSet out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = fmt::format("{}/{}", ptr, i);
    const std::string name = r.string(arr[i], p);
    auto id = net.find_edge(name);
    if (!id) throw GameFormatError(p, fmt::format("unknown edge '{}'", name));
    out.insert(*id);
  }
  return out;
}

CostFunction cost_from_json(const Reader& r, const json& c, const std::string& ptr) {
  const std::string kind = r.string(r.at(c, "kind", ptr), ptr + "/kind");
  try {
    if (kind == "polynomial") {
      const json& coeffs = r.array(c, "coefficients", ptr);
      std::vector<double> v;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        v.push_back(r.number(coeffs[i], fmt::format("{}/coefficients/{}", ptr, i)));
      }
      return CostFunction::polynomial(std::move(v));
    }
    if (kind == "big_m") {
      return CostFunction::big_m(c.contains("value") ? r.number(c["value"], ptr + "/value")
                                                     : kDefaultBigM);
    }
  } catch (const std::invalid_argument& e) {
    throw GameFormatError(ptr, e.what());
  }
  throw GameFormatError(ptr + "/kind", fmt::format("unknown cost kind '{}'", kind));
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // The byte offset is turned into a line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw GameFormatError(fmt::format("line {}, column {}", line, col), "syntax error");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_version(const Reader& r, const json& doc) {
  const int version = r.integer(r.at(doc, "schema_version", ""), "/schema_version");
  if (version != kSchemaVersion) {
    throw GameFormatError("/schema_version",
                          fmt::format("unsupported schema version {} (expected {})", version,
                                      kSchemaVersion));
  }
}

}  // namespace

json game_to_json(const GameSpec& game) {
  const Network& net = game.network();
  json nodes = json::array();
  for (const auto& n : net.node_names()) nodes.push_back(n);
  json edges = json::array();
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edges()[e];
    edges.push_back({{"id", edge.name},
                     {"a", net.node_name(edge.a)},
                     {"b", net.node_name(edge.b)},
                     {"cost", cost_to_json(game.costs()[e])}});
  }
  json pops = json::array();
  for (const Population& p : game.populations()) {
    pops.push_back({{"id", p.id},
                    {"origin", net.node_name(p.origin)},
                    {"destination", net.node_name(p.destination)},
                    {"relevant_edges", edge_names(net, p.relevant_edges)}});
  }
  json types = json::array();
  for (const InfoType& t : game.types()) {
    types.push_back({{"population", t.population},
                     {"k", t.k},
                     {"known_edges", edge_names(net, t.known_edges)},
                     {"demand", t.demand}});
  }
  return {{"schema_version", kSchemaVersion},
          {"name", game.name()},
          {"description", game.description()},
          {"nodes", nodes},
          {"edges", edges},
          {"populations", pops},
          {"types", types}};
}

GameSpec game_from_json(const json& doc) {
  const Reader r;
  if (!doc.is_object()) throw GameFormatError("", "game document must be an object");
  check_version(r, doc);

  Network net;
  const json& nodes = r.array(doc, "nodes", "");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = fmt::format("/nodes/{}", i);
    const std::string name = r.string(nodes[i], p);
    if (net.find_node(name)) throw GameFormatError(p, fmt::format("duplicate node '{}'", name));
    net.add_node(name);
  }
  std::vector<CostFunction> costs;
  const json& edges = r.array(doc, "edges", "");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = fmt::format("/edges/{}", i);
    const std::string name = r.string(r.at(edges[i], "id", p), p + "/id");
    const NodeId a = node_ref(net, r, r.at(edges[i], "a", p), p + "/a");
    const NodeId b = node_ref(net, r, r.at(edges[i], "b", p), p + "/b");
    try {
      net.add_edge(name, a, b);
    } catch (const std::invalid_argument& e) {
      throw GameFormatError(p, e.what());
    }
    costs.push_back(cost_from_json(r, r.at(edges[i], "cost", p), p + "/cost"));
  }
  std::vector<Population> pops;
  const json& pj = r.array(doc, "populations", "");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string p = fmt::format("/populations/{}", i);
    Population pop;
    pop.id = r.integer(r.at(pj[i], "id", p), p + "/id");
    pop.origin = node_ref(net, r, r.at(pj[i], "origin", p), p + "/origin");
    pop.destination = node_ref(net, r, r.at(pj[i], "destination", p), p + "/destination");
    pop.relevant_edges = edge_refs(net, r, r.array(pj[i], "relevant_edges", p), p + "/relevant_edges");
    pops.push_back(std::move(pop));
  }
  std::vector<InfoType> types;
  const json& tj = r.array(doc, "types", "");
  for (std::size_t i = 0; i < tj.size(); ++i) {
    const std::string p = fmt::format("/types/{}", i);
    InfoType t;
    t.population = r.integer(r.at(tj[i], "population", p), p + "/population");
    t.k = r.integer(r.at(tj[i], "k", p), p + "/k");
    t.known_edges = edge_refs(net, r, r.array(tj[i], "known_edges", p), p + "/known_edges");
    t.demand = r.number(r.at(tj[i], "demand", p), p + "/demand");
    if (t.demand < 0.0) {
      throw GameFormatError(p + "/demand", fmt::format("negative demand {}", t.demand));
    }
    types.push_back(std::move(t));
  }

  GameSpec game(std::move(net), std::move(pops), std::move(types), std::move(costs));
  if (doc.contains("name")) game.set_name(r.string(doc["name"], "/name"));
  if (doc.contains("description")) game.set_description(r.string(doc["description"], "/description"));
  const ValidationReport report = validate_game(game);
  if (!report.ok()) throw GameFormatError("", "invalid game: " + report.summary());
  return game;
}

std::string dump_game(const GameSpec& game) { return game_to_json(game).dump(2) + "\n"; }

GameSpec parse_game(std::string_view text) { return game_from_json(parse_text(text)); }

GameSpec load_game(const std::filesystem::path& path) { return parse_game(read_file(path)); }

void save_game(const GameSpec& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << dump_game(game);
}

json expansion_to_json(const GameSpec& game, const Expansion& expansion) {
  return {{"population", expansion.target.population},
          {"type", expansion.target.k},
          {"add", edge_names(game.network(), expansion.added)}};
}

Expansion expansion_from_json(const GameSpec& game, const json& doc) {
  const Reader r;
  const std::string p = "/expansion";
  Expansion exp;
  exp.target.population = r.integer(r.at(doc, "population", p), p + "/population");
  exp.target.k = r.integer(r.at(doc, "type", p), p + "/type");
  exp.added = edge_refs(game.network(), r, r.array(doc, "add", p), p + "/add");
  return exp;
}

json instance_to_json(ParadoxKind kind, const ParadoxInstance& instance,
                      std::optional<std::uint64_t> sample) {
  json doc{{"schema_version", kSchemaVersion},
           {"kind", to_string(kind)},
           {"game", game_to_json(instance.game)}};
  if (sample) doc["sample"] = *sample;
  if (instance.expansion) doc["expansion"] = expansion_to_json(instance.game, *instance.expansion);
  if (instance.modified) doc["modified_game"] = game_to_json(*instance.modified);
  return doc;
}

json witness_to_json(const Witness& witness, const FamilySpec& family, std::uint64_t seed) {
  json doc = instance_to_json(witness.verdict.kind, witness.instance, witness.sample);
  doc["family"] = family.name;
  doc["seed"] = seed;
  const ParadoxVerdict& v = witness.verdict;
  doc["verdict"] = {{"occurred", v.occurred},
                    {"confidence", to_string(v.confidence)},
                    {"value_before", v.value_before},
                    {"value_after", v.value_after},
                    {"delta", v.delta}};
  if (witness.companion) {
    doc["companion"] = {{"kind", to_string(witness.companion->kind)},
                        {"occurred", witness.companion->occurred},
                        {"delta", witness.companion->delta}};
  }
  return doc;
}

InstanceDocument instance_from_json(const json& doc) {
  const Reader r;
  if (!doc.is_object()) throw GameFormatError("", "instance document must be an object");
  check_version(r, doc);
  InstanceDocument out;
  try {
    out.kind = parse_paradox_kind(r.string(r.at(doc, "kind", ""), "/kind"));
  } catch (const std::invalid_argument& e) {
    throw GameFormatError("/kind", e.what());
  }
  auto nested = [&](const char* key) {
    try {
      return game_from_json(r.at(doc, key, ""));
    } catch (const GameFormatError& e) {
      throw GameFormatError(fmt::format("/{}{}", key, e.where()), e.message());
    }
  };
  out.instance.game = nested("game");
  if (doc.contains("sample")) out.sample = doc["sample"].get<std::uint64_t>();
  if (out.kind == ParadoxKind::bp) {
    out.instance.modified = nested("modified_game");
  } else {
    out.instance.expansion = expansion_from_json(out.instance.game, r.at(doc, "expansion", ""));
  }
  return out;
}

InstanceDocument load_instance(const std::filesystem::path& path) {
  return instance_from_json(parse_text(read_file(path)));
}

}  // namespace icue
