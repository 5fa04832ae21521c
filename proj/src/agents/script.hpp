#pragma once

// Helpers shared by the scripted policies: legality bookkeeping, shortest-path
// steps and the harvest / attack routines.

#include "playstyle/engine/rules.hpp"
#include "playstyle/engine/types.hpp"
#include "playstyle/engine/unit_stats.hpp"

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace playstyle::agents::detail {

using engine::ActionType;
using engine::Direction;
using engine::GameState;
using engine::Player;
using engine::Position;
using engine::Unit;
using engine::UnitCommand;
using engine::UnitKind;

[[nodiscard]] inline int manhattan(Position a, Position b) noexcept { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }
[[nodiscard]] inline int dist2(Position a, Position b) noexcept
{
    return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

/// Direction of the first step on a shortest path (4-connected, through empty
/// cells) from `from` to any cell accepted by `is_goal`. nullopt when already at
/// a goal or when no goal is reachable.
template<typename GoalFn>
[[nodiscard]] std::optional<Direction> first_step(const GameState &state, Position from, GoalFn is_goal);

class Planner
{
  public:
    Planner(const GameState &state, Player player, const engine::UnitStatsTable &stats);

    [[nodiscard]] const GameState &state() const noexcept { return state_; }
    [[nodiscard]] Player player() const noexcept { return player_; }
    [[nodiscard]] const engine::UnitStatsTable &stats() const noexcept { return stats_; }

    /// Idle own units in id order.
    [[nodiscard]] const std::vector<const Unit *> &idle_units() const noexcept { return idle_; }
    [[nodiscard]] std::vector<const Unit *> own(UnitKind kind) const;
    [[nodiscard]] std::vector<const Unit *> enemies() const;
    [[nodiscard]] bool has_command(int unit_id) const noexcept;

    /// Stockpile left after produce orders issued so far this tick.
    [[nodiscard]] int stock() const noexcept { return stock_; }

    /// Adds `cmd` when it is legal and its unit has no command yet.
    bool issue(const UnitCommand &cmd);

    bool move(const Unit &u, Direction d);
    bool produce(const Unit &u, UnitKind kind, std::optional<Position> toward = std::nullopt);
    /// Attack an enemy in range (lowest hp, then lowest id).
    bool attack_in_range(const Unit &u);
    /// Attack in range, otherwise step towards the nearest enemy.
    bool attack_nearest(const Unit &u);
    bool approach(const Unit &u, const Unit &target);
    /// One step of the gather cycle: harvest, carry back, return.
    bool harvest_cycle(const Unit &u);
    /// Step off cells adjacent to own production buildings.
    bool clear_production_cells(const Unit &u);

    [[nodiscard]] const Unit *nearest_enemy(Position from) const;
    [[nodiscard]] const Unit *nearest_own_base(Position from) const;
    [[nodiscard]] bool building_in_progress(UnitKind kind) const;

    [[nodiscard]] std::vector<UnitCommand> take() { return std::move(issued_); }

  private:
    const GameState &state_;
    Player player_;
    const engine::UnitStatsTable &stats_;
    std::unordered_map<int, std::vector<UnitCommand>> legal_;
    std::vector<const Unit *> idle_;
    std::vector<UnitCommand> issued_;
    std::vector<Position> claimed_;
    int stock_ = 0;
};

template<typename GoalFn>
std::optional<Direction> first_step(const GameState &state, Position from, GoalFn is_goal)
{
    if (is_goal(from)) { return std::nullopt; }
    const int w = state.width;
    const int h = state.height;
    std::vector<char> blocked(static_cast<std::size_t>(w * h), 0);
    for (const auto &u : state.units) { blocked[static_cast<std::size_t>(u.pos.y * w + u.pos.x)] = 1; }
    for (const auto p : engine::reserved_cells(state)) {
        if (state.in_bounds(p)) { blocked[static_cast<std::size_t>(p.y * w + p.x)] = 1; }
    }
    // first[i] holds the initial direction used to reach cell i.
    std::vector<int> first(static_cast<std::size_t>(w * h), -1);
    std::vector<Position> frontier;
    constexpr Direction order[] = { Direction::N, Direction::E, Direction::S, Direction::W };
    for (const auto d : order) {
        const Position p = from + engine::delta(d);
        if (!state.in_bounds(p)) { continue; }
        const auto idx = static_cast<std::size_t>(p.y * w + p.x);
        if (blocked[idx] || first[idx] >= 0) { continue; }
        first[idx] = static_cast<int>(d);
        if (is_goal(p)) { return d; }
        frontier.push_back(p);
    }
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const Position cur = frontier[head];
        const int dir = first[static_cast<std::size_t>(cur.y * w + cur.x)];
        for (const auto d : order) {
            const Position p = cur + engine::delta(d);
            if (!state.in_bounds(p) || p == from) { continue; }
            const auto idx = static_cast<std::size_t>(p.y * w + p.x);
            if (blocked[idx] || first[idx] >= 0) { continue; }
            first[idx] = dir;
            if (is_goal(p)) { return static_cast<Direction>(dir); }
            frontier.push_back(p);
        }
    }
    return std::nullopt;
}

}// namespace playstyle::agents::detail
