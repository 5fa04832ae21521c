#include "playstyle/engine/replay.hpp"

#include "playstyle/engine/maps.hpp"
#include "playstyle/engine/rules.hpp"
#include "playstyle/engine/serialize.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace playstyle::engine {

using nlohmann::json;

namespace {

json commands_json(const std::vector<UnitCommand> &cmds)
{
    json out = json::array();
    for (const auto &c : cmds) { out.push_back(to_json(c)); }
    return out;
}

std::vector<UnitCommand> commands_from(const json &j)
{
    std::vector<UnitCommand> out;
    for (const auto &c : j) { out.push_back(command_from_json(c)); }
    return out;
}

}// namespace

void write_replay(std::ostream &os, const Replay &replay)
{
    const auto &h = replay.header;
    os << json{ { "type", "header" },
        { "format", kReplayFormat },
        { "match_id", h.match_id },
        { "variant", std::string(1, h.variant) },
        { "p1", h.p1_agent },
        { "p2", h.p2_agent },
        { "seed", h.seed },
        { "max_ticks", h.max_ticks },
        { "stats_version", h.stats_version } }
            .dump()
       << '\n';
    for (const auto &t : replay.ticks) {
        os << json{ { "type", "tick" }, { "tick", t.tick }, { "p1", commands_json(t.p1) }, { "p2", commands_json(t.p2) } }.dump()
           << '\n';
    }
    os << json{ { "type", "end" }, { "tick", replay.final_tick }, { "outcome", to_string(replay.result) } }.dump() << '\n';
}

void write_replay(const std::filesystem::path &path, const Replay &replay)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw std::runtime_error("cannot write replay " + path.string()); }
    write_replay(out, replay);
}

Replay read_replay(std::istream &is)
{
    Replay replay;
    std::string line;
    bool have_header = false;
    bool have_end = false;
    while (std::getline(is, line)) {
        if (line.empty()) { continue; }
        const auto j = json::parse(line);
        const auto type = j.at("type").get<std::string>();
        if (type == "header") {
            if (j.at("format").get<std::string>() != kReplayFormat) {
                throw std::runtime_error("unsupported replay format " + j.at("format").get<std::string>());
            }
            auto &h = replay.header;
            h.match_id = j.at("match_id").get<std::string>();
            h.variant = j.at("variant").get<std::string>().at(0);
            h.p1_agent = j.at("p1").get<std::string>();
            h.p2_agent = j.at("p2").get<std::string>();
            h.seed = j.at("seed").get<std::uint64_t>();
            h.max_ticks = j.at("max_ticks").get<int>();
            h.stats_version = j.at("stats_version").get<std::string>();
            have_header = true;
        } else if (type == "tick") {
            ReplayTick t{ j.at("tick").get<int>(), commands_from(j.at("p1")), commands_from(j.at("p2")) };
            if (!replay.ticks.empty() && t.tick <= replay.ticks.back().tick) {
                throw std::runtime_error("replay ticks are not strictly increasing at tick " + std::to_string(t.tick));
            }
            replay.ticks.push_back(std::move(t));
        } else if (type == "end") {
            replay.final_tick = j.at("tick").get<int>();
            replay.result = parse_outcome(j.at("outcome").get<std::string>());
            have_end = true;
        } else {
            throw std::runtime_error("unknown replay record type " + type);
        }
    }
    if (!have_header || !have_end) { throw std::runtime_error("truncated replay: missing header or end record"); }
    return replay;
}

Replay read_replay(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw std::runtime_error("cannot open replay " + path.string()); }
    return read_replay(in);
}

GameState resimulate(const Replay &replay, const ReplayVisitor &visit, const UnitStatsTable &stats)
{
    GameState state = generate_map(replay.header.variant);
    state.max_ticks = replay.header.max_ticks;
    const std::vector<UnitCommand> none;
    auto next = replay.ticks.begin();
    while (state.tick < replay.final_tick) {
        const bool has = next != replay.ticks.end() && next->tick == state.tick;
        const auto &p1 = has ? next->p1 : none;
        const auto &p2 = has ? next->p2 : none;
        if (visit) { visit(state, p1, p2); }
        state = step(state, p1, p2, stats);
        if (has) { ++next; }
    }
    return state;
}

}// namespace playstyle::engine
