#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icue/equilibrium.hpp"
#include "icue/game.hpp"

namespace icue {

// Undirected DOT graph: nodes, then edges, both in id order. With loads,
// every edge label carries its load.
std::string export_dot(const GameSpec& game, const std::optional<LoadVector>& loads = std::nullopt);

// RFC 4180 style: fields with commas, quotes or newlines are quoted.
std::string export_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

// One row per edge: edge, load, cost.
std::string equilibrium_csv(const GameSpec& game, const EquilibriumResult& result);

}  // namespace icue
