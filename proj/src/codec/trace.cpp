#include "playstyle/codec/trace.hpp"

#include "playstyle/engine/maps.hpp"
#include "playstyle/engine/rules.hpp"

#include <algorithm>
#include <tuple>
#include <fmt/format.h>

namespace playstyle::codec {

using engine::Player;

std::string match_id(char variant, const std::string &p1, const std::string &p2, int repeat)
{
    return fmt::format("{}.{}.{}.{:02}", variant, p1, p2, repeat);
}

std::string trace_id(const std::string &match_id, Player pov)
{
    return fmt::format("{}.{}", match_id, engine::to_string(pov));
}

std::string PlayTrace::trace_id() const { return codec::trace_id(match_id, pov); }

engine::GameState frame_state(const PlayTrace &trace, std::size_t frame)
{
    const auto &f = trace.frames.at(frame);
    engine::GameState s;
    s.tick = f.tick;
    s.width = trace.width;
    s.height = trace.height;
    s.units = f.units;
    return s;
}

ObservationTensor frame_observation(const PlayTrace &trace, std::size_t frame, const CodecConfig &config)
{
    return encode_observation(frame_state(trace, frame), trace.pov, config);
}

ActionTensor frame_actions(const PlayTrace &trace, std::size_t frame, const CodecConfig &config)
{
    return encode_actions(trace.frames.at(frame).commands, frame_state(trace, frame), trace.pov, config);
}

namespace {

    std::vector<engine::UnitCommand> without_noops(std::vector<engine::UnitCommand> cmds)
    {
        std::erase_if(cmds, [](const engine::UnitCommand &c) { return c.action == engine::ActionType::noop; });
        return cmds;
    }

    PlayTrace empty_trace(const engine::ReplayHeader &h, Player pov, int repeat, const engine::GameState &start)
    {
        PlayTrace t;
        t.match_id = h.match_id;
        t.map_variant = h.variant;
        t.pov = pov;
        t.agent = pov == Player::p1 ? h.p1_agent : h.p2_agent;
        t.opponent = pov == Player::p1 ? h.p2_agent : h.p1_agent;
        t.repeat = repeat;
        t.width = start.width;
        t.height = start.height;
        return t;
    }

    void add_frame(PlayTrace &trace, const engine::GameState &before, const std::vector<engine::UnitCommand> &cmds)
    {
        if (cmds.empty()) { return; }
        trace.frames.push_back(TraceFrame{ before.tick, before.units, cmds });
    }

}// namespace

MatchRecord record_match(const agents::AgentSpec &p1,
  const agents::AgentSpec &p2,
  const MatchOptions &options,
  const engine::UnitStatsTable &stats)
{
    auto state = engine::generate_map(options.variant);
    if (options.max_ticks) { state.max_ticks = *options.max_ticks; }

    MatchRecord record;
    auto &h = record.replay.header;
    h.match_id = match_id(options.variant, p1.name, p2.name, options.repeat);
    h.variant = options.variant;
    h.p1_agent = p1.name;
    h.p2_agent = p2.name;
    h.seed = options.seed;
    h.max_ticks = state.max_ticks;
    h.stats_version = stats.version();
    record.p1 = empty_trace(h, Player::p1, options.repeat, state);
    record.p2 = empty_trace(h, Player::p2, options.repeat, state);

    std::array<std::unique_ptr<agents::Agent>, 2> agents;
    for (const auto &[side, spec, player] : { std::tuple{ 0, &p1, Player::p1 }, std::tuple{ 1, &p2, Player::p2 } }) {
        try {
            agents[static_cast<std::size_t>(side)] = agents::make_agent(*spec, options.seed, player, stats);
        } catch (const std::exception &e) {
            record.agent_failures[static_cast<std::size_t>(side)] = fmt::format("construction: {}", e.what());
        }
    }

    const auto decide = [&](int side, Player player) -> std::vector<engine::UnitCommand> {
        if (!agents[static_cast<std::size_t>(side)]) { return {}; }
        try {
            return without_noops(agents[static_cast<std::size_t>(side)]->act(state, player));
        } catch (const std::exception &e) {
            record.agent_failures[static_cast<std::size_t>(side)] = fmt::format("tick {}: {}", state.tick, e.what());
            agents[static_cast<std::size_t>(side)].reset();
            return {};
        }
    };

    while (engine::outcome(state) == engine::Outcome::ongoing) {
        auto c1 = decide(0, Player::p1);
        auto c2 = decide(1, Player::p2);
        add_frame(record.p1, state, c1);
        add_frame(record.p2, state, c2);
        const bool any = !c1.empty() || !c2.empty();
        try {
            auto next = engine::step(state, c1, c2, stats);
            if (any) { record.replay.ticks.push_back(engine::ReplayTick{ state.tick, std::move(c1), std::move(c2) }); }
            state = std::move(next);
        } catch (const engine::EngineError &e) {
            throw CodecError(fmt::format("match {} at tick {}: {}", h.match_id, state.tick, e.what()));
        }
    }
    record.replay.final_tick = state.tick;
    record.replay.result = engine::outcome(state);
    return record;
}

std::array<PlayTrace, 2> traces_from_replay(const engine::Replay &replay, int repeat, const engine::UnitStatsTable &stats)
{
    auto start = engine::generate_map(replay.header.variant);
    std::array<PlayTrace, 2> traces{ empty_trace(replay.header, Player::p1, repeat, start),
        empty_trace(replay.header, Player::p2, repeat, start) };
    (void)engine::resimulate(
      replay,
      [&](const engine::GameState &before, const auto &c1, const auto &c2) {
          add_frame(traces[0], before, without_noops(c1));
          add_frame(traces[1], before, without_noops(c2));
      },
      stats);
    return traces;
}

}// namespace playstyle::codec
