#pragma once

#include "playstyle/engine/types.hpp"
#include "playstyle/engine/unit_stats.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace playstyle::engine {

/*
 * Match replay, stored as JSON lines:
 *
 *   {"type":"header","format":"playstyle-replay/1","match_id":"...","variant":"A",
 *    "p1":"<agent>","p2":"<agent>","seed":<u64>,"max_ticks":2000,"stats_version":"..."}
 *   {"type":"tick","tick":<t>,"p1":[<cmd>...],"p2":[<cmd>...]}      one per tick with any command
 *   {"type":"end","tick":<final tick>,"outcome":"p1_wins|p2_wins|draw|ongoing"}
 *
 * <cmd> is {"unit":<id>,"action":"noop|move|harvest|return|produce|attack"} with
 * "dir" (N/E/S/W), "kind" (unit kind) and "dx"/"dy" present when the action
 * takes them. Commands are stored as issued; cancellations are reproduced by
 * re-simulation from generate_map(variant).
 */

inline constexpr const char *kReplayFormat = "playstyle-replay/1";

struct ReplayHeader {
    std::string match_id;
    char variant = 'A';
    std::string p1_agent;
    std::string p2_agent;
    std::uint64_t seed = 0;
    int max_ticks = 2000;
    std::string stats_version;
};

struct ReplayTick {
    int tick = 0;
    std::vector<UnitCommand> p1;
    std::vector<UnitCommand> p2;
};

struct Replay {
    ReplayHeader header;
    std::vector<ReplayTick> ticks;// strictly increasing tick
    int final_tick = 0;
    Outcome result = Outcome::ongoing;
};

void write_replay(std::ostream &os, const Replay &replay);
void write_replay(const std::filesystem::path &path, const Replay &replay);
[[nodiscard]] Replay read_replay(std::istream &is);
[[nodiscard]] Replay read_replay(const std::filesystem::path &path);

/// Replays every tick from the variant's starting map. The visitor receives the
/// state before each step together with the commands applied at that tick.
/// Returns the final state.
using ReplayVisitor =
  std::function<void(const GameState &before, const std::vector<UnitCommand> &p1, const std::vector<UnitCommand> &p2)>;

GameState resimulate(const Replay &replay,
  const ReplayVisitor &visit = {},
  const UnitStatsTable &stats = UnitStatsTable::defaults());

}// namespace playstyle::engine
