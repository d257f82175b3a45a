#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "icue/families.hpp"
#include "icue/game.hpp"
#include "icue/paradox.hpp"

namespace icue {

inline constexpr int kSchemaVersion = 1;

// Malformed or invalid game document. where() is a JSON pointer into the
// document, or "line L, column C" for syntax errors.
class GameFormatError : public std::runtime_error {
 public:
  GameFormatError(std::string where, const std::string& message);
  const std::string& where() const { return where_; }
  const std::string& message() const { return message_; }

 private:
  std::string where_;
  std::string message_;
};

nlohmann::json game_to_json(const GameSpec& game);
// Structural errors and validate_game violations both raise GameFormatError.
GameSpec game_from_json(const nlohmann::json& doc);

std::string dump_game(const GameSpec& game);
GameSpec parse_game(std::string_view text);
GameSpec load_game(const std::filesystem::path& path);
void save_game(const GameSpec& game, const std::filesystem::path& path);

nlohmann::json expansion_to_json(const GameSpec& game, const Expansion& expansion);
Expansion expansion_from_json(const GameSpec& game, const nlohmann::json& doc);

// A search witness or a hand-written paradox instance: the game plus the
// expansion (IBP, IBPSC) or the modified game (BP).
struct InstanceDocument {
  ParadoxKind kind = ParadoxKind::ibp;
  ParadoxInstance instance;
  std::optional<std::uint64_t> sample;
};

nlohmann::json instance_to_json(ParadoxKind kind, const ParadoxInstance& instance,
                                std::optional<std::uint64_t> sample = std::nullopt);
nlohmann::json witness_to_json(const Witness& witness, const FamilySpec& family,
                               std::uint64_t seed);
InstanceDocument instance_from_json(const nlohmann::json& doc);
InstanceDocument load_instance(const std::filesystem::path& path);

}  // namespace icue
