#pragma once

#include "playstyle/agents/agent.hpp"
#include "playstyle/codec/tensors.hpp"
#include "playstyle/engine/replay.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace playstyle::codec {

/// One decision point of a player: the units on the board before the step and
/// the non-noop commands the player issued. Dense tensors are derived on demand.
struct TraceFrame {
    int tick = 0;
    std::vector<engine::Unit> units;
    std::vector<engine::UnitCommand> commands;
    friend bool operator==(const TraceFrame &, const TraceFrame &) = default;
};

/// The frame sequence of one player in one match.
struct PlayTrace {
    std::string match_id;
    char map_variant = 'A';
    engine::Player pov = engine::Player::p1;
    std::string agent;// ground-truth label
    std::string opponent;
    int repeat = 0;
    int width = 12;
    int height = 12;
    std::vector<TraceFrame> frames;

    [[nodiscard]] std::string trace_id() const;
    friend bool operator==(const PlayTrace &, const PlayTrace &) = default;
};

[[nodiscard]] std::string match_id(char variant, const std::string &p1, const std::string &p2, int repeat);
[[nodiscard]] std::string trace_id(const std::string &match_id, engine::Player pov);

/// The state a frame was recorded in (tick, size and units; stockpiles are not kept).
[[nodiscard]] engine::GameState frame_state(const PlayTrace &trace, std::size_t frame);
[[nodiscard]] ObservationTensor frame_observation(const PlayTrace &trace, std::size_t frame, const CodecConfig &config = {});
[[nodiscard]] ActionTensor frame_actions(const PlayTrace &trace, std::size_t frame, const CodecConfig &config = {});

struct MatchOptions {
    char variant = 'A';
    std::uint64_t seed = 0;
    int repeat = 0;
    std::optional<int> max_ticks;
};

struct MatchRecord {
    PlayTrace p1;
    PlayTrace p2;
    engine::Replay replay;
    /// Error message of an agent that threw; that side played passively afterwards.
    std::array<std::optional<std::string>, 2> agent_failures;

    [[nodiscard]] bool failed() const noexcept { return agent_failures[0] || agent_failures[1]; }
};

/// Plays one match and records both players' traces plus the replay. Frames are
/// kept only at ticks where the player issued at least one non-noop command.
/// Engine errors are rethrown as CodecError naming the match.
[[nodiscard]] MatchRecord record_match(const agents::AgentSpec &p1,
  const agents::AgentSpec &p2,
  const MatchOptions &options,
  const engine::UnitStatsTable &stats = engine::UnitStatsTable::defaults());

/// Rebuilds both traces from a replay by re-simulation.
[[nodiscard]] std::array<PlayTrace, 2> traces_from_replay(const engine::Replay &replay,
  int repeat,
  const engine::UnitStatsTable &stats = engine::UnitStatsTable::defaults());

}// namespace playstyle::codec
