#pragma once

#include "playstyle/engine/types.hpp"
#include "playstyle/engine/unit_stats.hpp"

#include <span>
#include <string>
#include <vector>

namespace playstyle::engine {

/// Every command that can start executing this tick for `player`. Busy units
/// contribute nothing; idle units always contribute a noop.
[[nodiscard]] std::vector<UnitCommand> legal_commands(const GameState &state,
  Player player,
  const UnitStatsTable &stats = UnitStatsTable::defaults());

/// Legal commands for a single unit (empty when busy, missing or not owned by `player`).
[[nodiscard]] std::vector<UnitCommand> legal_unit_commands(const GameState &state,
  const Unit &unit,
  const UnitStatsTable &stats = UnitStatsTable::defaults());

/// Empty string when `cmd` may start this tick, otherwise the reason it may not.
[[nodiscard]] std::string check_command(const GameState &state,
  Player player,
  const UnitCommand &cmd,
  const UnitStatsTable &stats = UnitStatsTable::defaults());

/// Advance one tick. New commands start durative execution; actions whose
/// counter reaches zero apply their effects. Conflicting new intents on the
/// same cell, or produce orders that together exceed the stockpile, are
/// resolved by ascending unit id and the losers are cancelled. Throws
/// EngineError for an illegal command.
[[nodiscard]] GameState step(const GameState &state,
  std::span<const UnitCommand> cmds_p1,
  std::span<const UnitCommand> cmds_p2,
  const UnitStatsTable &stats = UnitStatsTable::defaults());

[[nodiscard]] Outcome outcome(const GameState &state) noexcept;

/// Cells currently claimed by in-progress move or produce actions.
[[nodiscard]] std::vector<Position> reserved_cells(const GameState &state);

/// Worker-carried resources plus mine remainders plus both stockpiles.
[[nodiscard]] long total_resources(const GameState &state) noexcept;

/// Number of cells shared by two units, or lying outside the grid.
[[nodiscard]] int occupancy_violations(const GameState &state);

}// namespace playstyle::engine
