#include "playstyle/engine/serialize.hpp"

namespace playstyle::engine {

using nlohmann::json;

json to_json(const UnitCommand &cmd)
{
    json j{ { "unit", cmd.unit_id }, { "action", to_string(cmd.action) } };
    if (cmd.direction) { j["dir"] = to_string(*cmd.direction); }
    if (cmd.produce_kind) { j["kind"] = to_string(*cmd.produce_kind); }
    if (cmd.attack_offset) {
        j["dx"] = cmd.attack_offset->dx;
        j["dy"] = cmd.attack_offset->dy;
    }
    return j;
}

UnitCommand command_from_json(const json &j)
{
    UnitCommand cmd;
    cmd.unit_id = j.at("unit").get<int>();
    cmd.action = parse_action_type(j.at("action").get<std::string>());
    if (j.contains("dir")) { cmd.direction = parse_direction(j.at("dir").get<std::string>()); }
    if (j.contains("kind")) { cmd.produce_kind = parse_unit_kind(j.at("kind").get<std::string>()); }
    if (j.contains("dx")) { cmd.attack_offset = Offset{ j.at("dx").get<int>(), j.at("dy").get<int>() }; }
    return cmd;
}

json to_json(const Unit &unit)
{
    json j{ { "id", unit.id },
        { "owner", to_string(unit.owner) },
        { "kind", to_string(unit.kind) },
        { "x", unit.pos.x },
        { "y", unit.pos.y },
        { "hp", unit.hp },
        { "carried", unit.carried } };
    if (unit.busy) {
        const auto &b = *unit.busy;
        UnitCommand as_cmd{ unit.id, b.type, b.direction, b.produce_kind, b.attack_offset };
        json busy = to_json(as_cmd);
        busy.erase("unit");
        busy["remaining"] = b.remaining;
        j["busy"] = std::move(busy);
    }
    return j;
}

Unit unit_from_json(const json &j)
{
    Unit u;
    u.id = j.at("id").get<int>();
    u.owner = parse_player(j.at("owner").get<std::string>());
    u.kind = parse_unit_kind(j.at("kind").get<std::string>());
    u.pos = { j.at("x").get<int>(), j.at("y").get<int>() };
    u.hp = j.at("hp").get<int>();
    u.carried = j.at("carried").get<int>();
    if (j.contains("busy")) {
        json b = j.at("busy");
        b["unit"] = u.id;
        const auto cmd = command_from_json(b);
        u.busy = BusyAction{ cmd.action, cmd.direction, cmd.produce_kind, cmd.attack_offset, b.at("remaining").get<int>() };
    }
    return u;
}

json to_json(const GameState &state)
{
    json units = json::array();
    for (const auto &u : state.units) { units.push_back(to_json(u)); }
    return json{ { "tick", state.tick },
        { "width", state.width },
        { "height", state.height },
        { "max_ticks", state.max_ticks },
        { "resources", state.resources },
        { "next_unit_id", state.next_unit_id },
        { "units", std::move(units) } };
}

GameState state_from_json(const json &j)
{
    GameState s;
    s.tick = j.at("tick").get<int>();
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    s.max_ticks = j.at("max_ticks").get<int>();
    s.resources = j.at("resources").get<std::array<int, 2>>();
    s.next_unit_id = j.at("next_unit_id").get<int>();
    for (const auto &u : j.at("units")) { s.units.push_back(unit_from_json(u)); }
    return s;
}

std::string serialize(const GameState &state) { return to_json(state).dump(); }

}// namespace playstyle::engine
