#include "playstyle/engine/rules.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace playstyle::engine {

namespace {

// Occupied or reserved cells of a state.
class Occupancy
{
  public:
    explicit Occupancy(const GameState &state)
      : width_(state.width), height_(state.height), cells_(static_cast<std::size_t>(state.width * state.height), -1),
        reserved_(cells_.size(), false)
    {
        for (std::size_t i = 0; i < state.units.size(); ++i) {
            const auto &u = state.units[i];
            if (state.in_bounds(u.pos)) { cells_[index(u.pos)] = static_cast<int>(i); }
        }
        for (const auto p : reserved_cells(state)) {
            if (state.in_bounds(p)) { reserved_[index(p)] = true; }
        }
    }

    [[nodiscard]] bool in_bounds(Position p) const noexcept
    {
        return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
    }
    [[nodiscard]] bool free(Position p) const noexcept
    {
        return in_bounds(p) && cells_[index(p)] < 0 && !reserved_[index(p)];
    }
    // Index into state.units, or -1.
    [[nodiscard]] int unit_index(Position p) const noexcept { return in_bounds(p) ? cells_[index(p)] : -1; }

  private:
    [[nodiscard]] std::size_t index(Position p) const noexcept { return static_cast<std::size_t>(p.y * width_ + p.x); }

    int width_;
    int height_;
    std::vector<int> cells_;
    std::vector<bool> reserved_;
};

constexpr std::array<Direction, kDirectionCount> kDirections{ Direction::N, Direction::E, Direction::S, Direction::W };

void append_unit_commands(const GameState &state,
  const Occupancy &occ,
  const Unit &unit,
  const UnitStatsTable &table,
  std::vector<UnitCommand> &out)
{
    if (unit.busy || unit.owner == Player::none) { return; }
    const auto &s = table[unit.kind];
    out.push_back(UnitCommand{ unit.id, ActionType::noop, std::nullopt, std::nullopt, std::nullopt });

    for (const auto d : kDirections) {
        const Position target = unit.pos + delta(d);
        if (s.can_move() && occ.free(target)) { out.push_back(UnitCommand{ unit.id, ActionType::move, d, std::nullopt, std::nullopt }); }
        if (s.can_harvest()) {
            const int idx = occ.unit_index(target);
            if (idx >= 0) {
                const auto &other = state.units[static_cast<std::size_t>(idx)];
                if (unit.carried == 0 && other.kind == UnitKind::resource && other.carried > 0) {
                    out.push_back(UnitCommand{ unit.id, ActionType::harvest, d, std::nullopt, std::nullopt });
                }
                if (unit.carried > 0 && other.kind == UnitKind::base && other.owner == unit.owner) {
                    out.push_back(UnitCommand{ unit.id, ActionType::ret, d, std::nullopt, std::nullopt });
                }
            }
        }
    }
    for (const auto kind : s.produces) {
        if (state.resources[static_cast<std::size_t>(player_index(unit.owner))] < table[kind].cost) { continue; }
        for (const auto d : kDirections) {
            if (occ.free(unit.pos + delta(d))) { out.push_back(UnitCommand{ unit.id, ActionType::produce, d, kind, std::nullopt }); }
        }
    }
    if (s.can_attack()) {
        const int r = s.range;
        const Player enemy = opponent(unit.owner);
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if ((dx == 0 && dy == 0) || dx * dx + dy * dy > r * r) { continue; }
                const int idx = occ.unit_index(unit.pos + Offset{ dx, dy });
                if (idx >= 0 && state.units[static_cast<std::size_t>(idx)].owner == enemy) {
                    out.push_back(UnitCommand{ unit.id, ActionType::attack, std::nullopt, std::nullopt, Offset{ dx, dy } });
                }
            }
        }
    }
}

int action_duration(const Unit &unit, const UnitCommand &cmd, const UnitStatsTable &table)
{
    const auto &s = table[unit.kind];
    switch (cmd.action) {
    case ActionType::move: return s.move_time;
    case ActionType::harvest: return s.harvest_time;
    case ActionType::ret: return s.return_time;
    case ActionType::produce: return table[*cmd.produce_kind].produce_time;
    case ActionType::attack: return s.attack_time;
    case ActionType::noop: return 0;
    }
    return 0;
}

std::string describe(const UnitCommand &cmd)
{
    std::string out(to_string(cmd.action));
    if (cmd.produce_kind) { out += fmt::format(" {}", to_string(*cmd.produce_kind)); }
    if (cmd.direction) { out += fmt::format(" {}", to_string(*cmd.direction)); }
    if (cmd.attack_offset) { out += fmt::format(" ({},{})", cmd.attack_offset->dx, cmd.attack_offset->dy); }
    return out;
}

std::string check_with(const GameState &state,
  const Occupancy &occ,
  Player player,
  const UnitCommand &cmd,
  const UnitStatsTable &table)
{
    const Unit *unit = state.find(cmd.unit_id);
    if (unit == nullptr) { return "no such unit"; }
    if (unit->owner != player) { return fmt::format("unit is not owned by {}", to_string(player)); }
    if (unit->busy) { return "unit is busy"; }
    std::vector<UnitCommand> legal;
    append_unit_commands(state, occ, *unit, table, legal);
    if (std::find(legal.begin(), legal.end(), cmd) == legal.end()) {
        return fmt::format("'{}' is not executable at ({},{})", describe(cmd), unit->pos.x, unit->pos.y);
    }
    return {};
}

void validate(const GameState &state,
  const Occupancy &occ,
  Player player,
  std::span<const UnitCommand> cmds,
  const UnitStatsTable &table)
{
    std::vector<int> seen;
    for (const auto &cmd : cmds) {
        if (auto reason = check_with(state, occ, player, cmd, table); !reason.empty()) {
            throw EngineError(cmd.unit_id, reason);
        }
        if (std::find(seen.begin(), seen.end(), cmd.unit_id) != seen.end()) {
            throw EngineError(cmd.unit_id, "more than one command in the same tick");
        }
        seen.push_back(cmd.unit_id);
    }
}

void complete_action(GameState &next, std::size_t index, const UnitStatsTable &table)
{
    Unit &unit = next.units[index];
    const BusyAction action = *unit.busy;
    unit.busy.reset();
    const auto &s = table[unit.kind];
    const auto occupant = [&next](Position p) -> Unit * {
        for (auto &u : next.units) {
            if (u.pos == p && u.hp > 0) { return &u; }
        }
        return nullptr;
    };

    switch (action.type) {
    case ActionType::move: {
        const Position target = unit.pos + delta(*action.direction);
        if (next.in_bounds(target) && occupant(target) == nullptr) { unit.pos = target; }
        break;
    }
    case ActionType::harvest: {
        Unit *mine = occupant(unit.pos + delta(*action.direction));
        if (mine != nullptr && mine->kind == UnitKind::resource && mine->carried > 0 && unit.carried == 0) {
            const int amount = std::min(s.harvest_amount, mine->carried);
            mine->carried -= amount;
            unit.carried += amount;
        }
        break;
    }
    case ActionType::ret: {
        const Unit *base = occupant(unit.pos + delta(*action.direction));
        if (base != nullptr && base->kind == UnitKind::base && base->owner == unit.owner) {
            next.resources[static_cast<std::size_t>(player_index(unit.owner))] += unit.carried;
            unit.carried = 0;
        }
        break;
    }
    case ActionType::produce: {
        const Position target = unit.pos + delta(*action.direction);
        if (next.in_bounds(target) && occupant(target) == nullptr) {
            const UnitKind kind = *action.produce_kind;
            const Player owner = unit.owner;
            // push_back may reallocate; `unit` is not used afterwards.
            next.units.push_back(Unit{ next.next_unit_id++, owner, kind, target, table[kind].hp, 0, std::nullopt });
        }
        break;
    }
    case ActionType::attack: {
        Unit *target = occupant(unit.pos + *action.attack_offset);
        if (target != nullptr && target->owner == opponent(unit.owner)) { target->hp -= s.damage; }
        break;
    }
    case ActionType::noop: break;
    }
}

}// namespace

std::vector<UnitCommand> legal_commands(const GameState &state, Player player, const UnitStatsTable &stats)
{
    std::vector<UnitCommand> out;
    if (player == Player::none) { return out; }
    const Occupancy occ(state);
    for (const auto &u : state.units) {
        if (u.owner == player) { append_unit_commands(state, occ, u, stats, out); }
    }
    return out;
}

std::vector<UnitCommand> legal_unit_commands(const GameState &state, const Unit &unit, const UnitStatsTable &stats)
{
    std::vector<UnitCommand> out;
    append_unit_commands(state, Occupancy(state), unit, stats, out);
    return out;
}

std::string check_command(const GameState &state, Player player, const UnitCommand &cmd, const UnitStatsTable &stats)
{
    return check_with(state, Occupancy(state), player, cmd, stats);
}

GameState step(const GameState &state,
  std::span<const UnitCommand> cmds_p1,
  std::span<const UnitCommand> cmds_p2,
  const UnitStatsTable &stats)
{
    if (!cmds_p1.empty() || !cmds_p2.empty()) {
        const Occupancy occ(state);
        validate(state, occ, Player::p1, cmds_p1, stats);
        validate(state, occ, Player::p2, cmds_p2, stats);
    }

    std::vector<UnitCommand> issued;
    for (const auto &c : cmds_p1) {
        if (c.action != ActionType::noop) { issued.push_back(c); }
    }
    for (const auto &c : cmds_p2) {
        if (c.action != ActionType::noop) { issued.push_back(c); }
    }
    std::sort(issued.begin(), issued.end(), [](const auto &a, const auto &b) { return a.unit_id < b.unit_id; });

    GameState next = state;
    std::vector<Position> claimed;
    for (const auto &cmd : issued) {
        Unit &unit = *next.find(cmd.unit_id);
        if (cmd.action == ActionType::move || cmd.action == ActionType::produce) {
            const Position target = unit.pos + delta(*cmd.direction);
            if (std::find(claimed.begin(), claimed.end(), target) != claimed.end()) { continue; }
            if (cmd.action == ActionType::produce) {
                int &stock = next.resources[static_cast<std::size_t>(player_index(unit.owner))];
                const int cost = stats[*cmd.produce_kind].cost;
                if (stock < cost) { continue; }
                stock -= cost;
            }
            claimed.push_back(target);
        }
        unit.busy = BusyAction{ cmd.action, cmd.direction, cmd.produce_kind, cmd.attack_offset, action_duration(unit, cmd, stats) };
    }

    // Units spawned this tick are appended and never busy, so the original count suffices.
    const std::size_t count = next.units.size();
    for (std::size_t i = 0; i < count; ++i) {
        Unit &unit = next.units[i];
        if (!unit.busy || unit.hp <= 0) { continue; }
        if (--unit.busy->remaining <= 0) { complete_action(next, i, stats); }
    }

    std::erase_if(next.units, [](const Unit &u) {
        return u.kind == UnitKind::resource ? u.carried <= 0 : u.hp <= 0;
    });
    ++next.tick;
    return next;
}

Outcome outcome(const GameState &state) noexcept
{
    const int p1 = state.count_units(Player::p1);
    const int p2 = state.count_units(Player::p2);
    if (p1 == 0 && p2 == 0) { return Outcome::draw; }
    if (p1 == 0) { return Outcome::p2_wins; }
    if (p2 == 0) { return Outcome::p1_wins; }
    if (state.tick >= state.max_ticks) { return Outcome::draw; }
    return Outcome::ongoing;
}

std::vector<Position> reserved_cells(const GameState &state)
{
    std::vector<Position> out;
    for (const auto &u : state.units) {
        if (u.busy && (u.busy->type == ActionType::move || u.busy->type == ActionType::produce)) {
            out.push_back(u.pos + delta(*u.busy->direction));
        }
    }
    return out;
}

long total_resources(const GameState &state) noexcept
{
    long total = static_cast<long>(state.resources[0]) + state.resources[1];
    for (const auto &u : state.units) { total += u.carried; }
    return total;
}

int occupancy_violations(const GameState &state)
{
    int violations = 0;
    for (std::size_t i = 0; i < state.units.size(); ++i) {
        if (!state.in_bounds(state.units[i].pos)) { ++violations; }
        for (std::size_t j = i + 1; j < state.units.size(); ++j) {
            if (state.units[i].pos == state.units[j].pos) { ++violations; }
        }
    }
    return violations;
}

}// namespace playstyle::engine
