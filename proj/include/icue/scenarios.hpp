#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icue/paradox.hpp"
#include "icue/topology.hpp"

namespace icue {

struct Scenario {
  std::string id;
  ParadoxKind kind = ParadoxKind::ibp;
  ParadoxInstance instance;
};

const std::vector<std::string>& scenario_ids();
// Throws std::invalid_argument for unknown ids.
Scenario builtin_scenario(std::string_view id);

// Ring concourse of eight gates with seat blocks and transport stops hanging
// off it. With walking enabled, two cross-concourse walkways join opposite
// gates and each population may use them.
GameSpec stadium_game(bool inter_block_walking = false);

struct ScenarioRun {
  Scenario scenario;
  ImmunityCertificate certificate;
  EquilibriumResult equilibrium;  // of the unmodified game
  ParadoxVerdict verdict;
  std::optional<ParadoxVerdict> companion;  // the other information detector
};

ScenarioRun run_scenario(const Scenario& scenario, const ParadoxOptions& options = {});

}  // namespace icue
