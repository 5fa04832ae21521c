#pragma once

#include "playstyle/engine/types.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace playstyle::engine {

[[nodiscard]] nlohmann::json to_json(const UnitCommand &cmd);
[[nodiscard]] UnitCommand command_from_json(const nlohmann::json &j);

[[nodiscard]] nlohmann::json to_json(const Unit &unit);
[[nodiscard]] Unit unit_from_json(const nlohmann::json &j);

[[nodiscard]] nlohmann::json to_json(const GameState &state);
[[nodiscard]] GameState state_from_json(const nlohmann::json &j);

/// Canonical text form; equal states produce identical strings.
[[nodiscard]] std::string serialize(const GameState &state);

}// namespace playstyle::engine
