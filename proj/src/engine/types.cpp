#include "playstyle/engine/types.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace playstyle::engine {

namespace {

constexpr std::array<std::string_view, 3> kPlayerNames{ "none", "p1", "p2" };
constexpr std::array<std::string_view, kUnitKindCount> kKindNames{
    "resource", "base", "barracks", "worker", "light", "heavy", "ranged"
};
constexpr std::array<std::string_view, kActionTypeCount> kActionNames{
    "noop", "move", "harvest", "return", "produce", "attack"
};
constexpr std::array<std::string_view, kDirectionCount> kDirectionNames{ "N", "E", "S", "W" };
constexpr std::array<std::string_view, 4> kOutcomeNames{ "ongoing", "p1_wins", "p2_wins", "draw" };

template<typename Enum, std::size_t N>
Enum parse_named(const std::array<std::string_view, N> &names, std::string_view s, const char *what)
{
    const auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end()) { throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(s) + "'"); }
    return static_cast<Enum>(std::distance(names.begin(), it));
}

}// namespace

const Unit *GameState::find(int id) const noexcept
{
    const auto it = std::lower_bound(
      units.begin(), units.end(), id, [](const Unit &u, int value) { return u.id < value; });
    return it != units.end() && it->id == id ? &*it : nullptr;
}

Unit *GameState::find(int id) noexcept
{
    return const_cast<Unit *>(static_cast<const GameState *>(this)->find(id));
}

const Unit *GameState::unit_at(Position p) const noexcept
{
    for (const auto &u : units) {
        if (u.pos == p) { return &u; }
    }
    return nullptr;
}

int GameState::count_units(Player owner) const noexcept
{
    return static_cast<int>(std::count_if(units.begin(), units.end(), [owner](const Unit &u) { return u.owner == owner; }));
}

EngineError::EngineError(int unit_id, const std::string &reason)
  : std::runtime_error("unit " + std::to_string(unit_id) + ": " + reason), unit_id_(unit_id)
{}

std::string_view to_string(Player p) noexcept { return kPlayerNames[static_cast<std::size_t>(p)]; }
std::string_view to_string(UnitKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(ActionType a) noexcept { return kActionNames[static_cast<std::size_t>(a)]; }
std::string_view to_string(Direction d) noexcept { return kDirectionNames[static_cast<std::size_t>(d)]; }
std::string_view to_string(Outcome o) noexcept { return kOutcomeNames[static_cast<std::size_t>(o)]; }

Player parse_player(std::string_view s) { return parse_named<Player>(kPlayerNames, s, "player"); }
UnitKind parse_unit_kind(std::string_view s) { return parse_named<UnitKind>(kKindNames, s, "unit kind"); }
ActionType parse_action_type(std::string_view s) { return parse_named<ActionType>(kActionNames, s, "action"); }
Direction parse_direction(std::string_view s) { return parse_named<Direction>(kDirectionNames, s, "direction"); }
Outcome parse_outcome(std::string_view s) { return parse_named<Outcome>(kOutcomeNames, s, "outcome"); }

}// namespace playstyle::engine
