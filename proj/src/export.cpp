#include "icue/export.hpp"

#include <fmt/format.h>

namespace icue {
namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
}

}  // namespace

std::string export_dot(const GameSpec& game, const std::optional<LoadVector>& loads) {
  const Network& net = game.network();
  std::string out = fmt::format("graph {} {{\n", quoted(game.name().empty() ? "game" : game.name()));
  for (const auto& n : net.node_names()) out += fmt::format("  {};\n", quoted(n));
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edges()[e];
    std::string label = edge.name;
    if (loads && e < loads->size()) label += fmt::format(" ({:.6g})", (*loads)[e]);
    out += fmt::format("  {} -- {} [label={}];\n", quoted(net.node_name(edge.a)),
                       quoted(net.node_name(edge.b)), quoted(label));
  }
  return out + "}\n";
}

std::string export_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  csv_line(out, header);
  for (const auto& r : rows) csv_line(out, r);
  return out;
}

std::string equilibrium_csv(const GameSpec& game, const EquilibriumResult& result) {
  std::vector<std::vector<std::string>> rows;
  const Network& net = game.network();
  for (std::size_t e = 0; e < net.edge_count() && e < result.loads.size(); ++e) {
    const double load = result.loads[e];
    rows.push_back({net.edges()[e].name, fmt::format("{:.12g}", load),
                    fmt::format("{:.12g}", game.costs()[e](std::max(0.0, load)))});
  }
  return export_csv({"edge", "load", "cost"}, rows);
}

}  // namespace icue
