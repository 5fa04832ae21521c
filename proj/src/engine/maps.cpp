#include "playstyle/engine/maps.hpp"

#include "playstyle/engine/unit_stats.hpp"
#include "playstyle/generated/embedded_config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace playstyle::engine {

namespace {

const nlohmann::json &map_table()
{
    static const nlohmann::json table = nlohmann::json::parse(embedded::kMapsJson);
    return table;
}

Position read_pos(const nlohmann::json &j) { return { j.at(0).get<int>(), j.at(1).get<int>() }; }

}// namespace

const std::vector<char> &map_variants()
{
    static const std::vector<char> letters = [] {
        std::vector<char> out;
        for (const auto &[key, value] : map_table().at("variants").items()) { out.push_back(key.at(0)); }
        std::sort(out.begin(), out.end());
        return out;
    }();
    return letters;
}

bool is_map_variant(char variant) noexcept
{
    const auto &v = map_variants();
    return std::find(v.begin(), v.end(), variant) != v.end();
}

int default_max_ticks() { return map_table().at("max_ticks").get<int>(); }

GameState generate_map(char variant)
{
    if (!is_map_variant(variant)) { throw std::invalid_argument(std::string("unknown map variant '") + variant + "'"); }
    const auto &table = map_table();
    const auto &entry = table.at("variants").at(std::string(1, variant));
    const auto &stats = UnitStatsTable::defaults();

    GameState state;
    state.width = table.at("width").get<int>();
    state.height = table.at("height").get<int>();
    state.max_ticks = table.at("max_ticks").get<int>();
    const int start = table.at("starting_resources").get<int>();
    state.resources = { start, start };
    const int mine_amount = table.at("mine_resources").get<int>();

    const auto rotate = [&](Position p) { return Position{ state.width - 1 - p.x, state.height - 1 - p.y }; };
    int next_id = 1;
    const auto add = [&](Player owner, UnitKind kind, Position pos, int carried) {
        state.units.push_back(Unit{ next_id++, owner, kind, pos, stats[kind].hp, carried, std::nullopt });
    };

    const Position base = read_pos(entry.at("base"));
    const Position worker = read_pos(entry.at("worker"));
    add(Player::p1, UnitKind::base, base, 0);
    add(Player::p1, UnitKind::worker, worker, 0);
    add(Player::p2, UnitKind::base, rotate(base), 0);
    add(Player::p2, UnitKind::worker, rotate(worker), 0);
    for (const auto &m : entry.at("mines")) { add(Player::none, UnitKind::resource, read_pos(m), mine_amount); }
    for (const auto &m : entry.at("mines")) { add(Player::none, UnitKind::resource, rotate(read_pos(m)), mine_amount); }
    state.next_unit_id = next_id;
    return state;
}

}// namespace playstyle::engine
