#include "script.hpp"

#include <algorithm>
#include <limits>

namespace playstyle::agents::detail {

Planner::Planner(const GameState &state, Player player, const engine::UnitStatsTable &stats)
  : state_(state), player_(player), stats_(stats),
    stock_(state.resources[static_cast<std::size_t>(engine::player_index(player))])
{
    for (auto &cmd : engine::legal_commands(state, player, stats)) { legal_[cmd.unit_id].push_back(cmd); }
    for (const auto &u : state.units) {
        if (u.owner == player && !u.busy) { idle_.push_back(&u); }
    }
}

std::vector<const Unit *> Planner::own(UnitKind kind) const
{
    std::vector<const Unit *> out;
    for (const auto &u : state_.units) {
        if (u.owner == player_ && u.kind == kind) { out.push_back(&u); }
    }
    return out;
}

std::vector<const Unit *> Planner::enemies() const
{
    std::vector<const Unit *> out;
    const Player enemy = engine::opponent(player_);
    for (const auto &u : state_.units) {
        if (u.owner == enemy) { out.push_back(&u); }
    }
    return out;
}

bool Planner::has_command(int unit_id) const noexcept
{
    return std::any_of(issued_.begin(), issued_.end(), [unit_id](const UnitCommand &c) { return c.unit_id == unit_id; });
}

bool Planner::issue(const UnitCommand &cmd)
{
    if (has_command(cmd.unit_id)) { return false; }
    const auto it = legal_.find(cmd.unit_id);
    if (it == legal_.end() || std::find(it->second.begin(), it->second.end(), cmd) == it->second.end()) { return false; }
    if (cmd.action == ActionType::move || cmd.action == ActionType::produce) {
        const Position target = state_.find(cmd.unit_id)->pos + engine::delta(*cmd.direction);
        if (std::find(claimed_.begin(), claimed_.end(), target) != claimed_.end()) { return false; }
        if (cmd.action == ActionType::produce) {
            const int cost = stats_[*cmd.produce_kind].cost;
            if (stock_ < cost) { return false; }
            stock_ -= cost;
        }
        claimed_.push_back(target);
    }
    if (cmd.action != ActionType::noop) { issued_.push_back(cmd); }
    return true;
}

bool Planner::move(const Unit &u, Direction d)
{
    return issue(UnitCommand{ u.id, ActionType::move, d, std::nullopt, std::nullopt });
}

bool Planner::produce(const Unit &u, UnitKind kind, std::optional<Position> toward)
{
    const auto it = legal_.find(u.id);
    if (it == legal_.end() || has_command(u.id)) { return false; }
    std::vector<UnitCommand> options;
    for (const auto &c : it->second) {
        if (c.action == ActionType::produce && c.produce_kind == kind) { options.push_back(c); }
    }
    if (toward) {
        std::stable_sort(options.begin(), options.end(), [&](const UnitCommand &a, const UnitCommand &b) {
            return manhattan(u.pos + engine::delta(*a.direction), *toward) < manhattan(u.pos + engine::delta(*b.direction), *toward);
        });
    }
    for (const auto &c : options) {
        if (issue(c)) { return true; }
    }
    return false;
}

bool Planner::attack_in_range(const Unit &u)
{
    const auto it = legal_.find(u.id);
    if (it == legal_.end()) { return false; }
    const UnitCommand *best = nullptr;
    const Unit *best_target = nullptr;
    for (const auto &c : it->second) {
        if (c.action != ActionType::attack) { continue; }
        const Unit *t = state_.unit_at(u.pos + *c.attack_offset);
        if (t == nullptr) { continue; }
        if (best == nullptr || t->hp < best_target->hp || (t->hp == best_target->hp && t->id < best_target->id)) {
            best = &c;
            best_target = t;
        }
    }
    return best != nullptr && issue(*best);
}

const Unit *Planner::nearest_enemy(Position from) const
{
    const Unit *best = nullptr;
    int best_d = std::numeric_limits<int>::max();
    for (const auto *e : enemies()) {
        const int d = manhattan(from, e->pos);
        if (d < best_d) {
            best_d = d;
            best = e;
        }
    }
    return best;
}

const Unit *Planner::nearest_own_base(Position from) const
{
    const Unit *best = nullptr;
    int best_d = std::numeric_limits<int>::max();
    for (const auto *b : own(UnitKind::base)) {
        const int d = manhattan(from, b->pos);
        if (d < best_d) {
            best_d = d;
            best = b;
        }
    }
    return best;
}

bool Planner::approach(const Unit &u, const Unit &target)
{
    const int r = std::max(1, stats_[u.kind].range);
    const auto in_range = [&](Position p) { return dist2(p, target.pos) <= r * r; };
    if (const auto d = first_step(state_, u.pos, in_range); d && move(u, *d)) { return true; }
    // Blocked path: take any legal step that closes the distance.
    constexpr Direction order[] = { Direction::N, Direction::E, Direction::S, Direction::W };
    for (const auto d : order) {
        if (manhattan(u.pos + engine::delta(d), target.pos) < manhattan(u.pos, target.pos) && move(u, d)) { return true; }
    }
    return false;
}

bool Planner::attack_nearest(const Unit &u)
{
    if (attack_in_range(u)) { return true; }
    const Unit *target = nearest_enemy(u.pos);
    return target != nullptr && approach(u, *target);
}

bool Planner::harvest_cycle(const Unit &u)
{
    const auto it = legal_.find(u.id);
    if (it == legal_.end()) { return false; }
    const ActionType wanted = u.carried == 0 ? ActionType::harvest : ActionType::ret;
    for (const auto &c : it->second) {
        if (c.action == wanted && issue(c)) { return true; }
    }
    const auto adjacent_to = [&](Position p, auto &&pred) {
        constexpr Direction order[] = { Direction::N, Direction::E, Direction::S, Direction::W };
        for (const auto d : order) {
            const Unit *n = state_.unit_at(p + engine::delta(d));
            if (n != nullptr && pred(*n)) { return true; }
        }
        return false;
    };
    std::optional<Direction> d;
    if (u.carried == 0) {
        d = first_step(state_, u.pos, [&](Position p) {
            return adjacent_to(p, [](const Unit &n) { return n.kind == UnitKind::resource && n.carried > 0; });
        });
    } else {
        d = first_step(state_, u.pos, [&](Position p) {
            return adjacent_to(p, [&](const Unit &n) { return n.kind == UnitKind::base && n.owner == player_; });
        });
    }
    return d && move(u, *d);
}

bool Planner::clear_production_cells(const Unit &u)
{
    const auto near_production = [&](Position p) {
        for (const auto &b : state_.units) {
            if (b.owner == player_ && (b.kind == UnitKind::base || b.kind == UnitKind::barracks) && manhattan(b.pos, p) == 1) {
                return true;
            }
        }
        return false;
    };
    if (!near_production(u.pos)) { return false; }
    constexpr Direction order[] = { Direction::N, Direction::E, Direction::S, Direction::W };
    for (const auto d : order) {
        if (!near_production(u.pos + engine::delta(d)) && move(u, d)) { return true; }
    }
    return false;
}

bool Planner::building_in_progress(UnitKind kind) const
{
    return std::any_of(state_.units.begin(), state_.units.end(), [&](const Unit &u) {
        return u.owner == player_ && u.busy && u.busy->type == ActionType::produce && u.busy->produce_kind == kind;
    });
}

}// namespace playstyle::agents::detail
