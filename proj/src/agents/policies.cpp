#include "policies.hpp"
#include "script.hpp"

#include "playstyle/engine/rules.hpp"

#include <algorithm>
#include <map>

namespace playstyle::agents {

namespace detail {

ActionWeights read_weights(const nlohmann::json &params)
{
    ActionWeights w{ 1, 1, 1, 1, 1, 1 };
    if (!params.contains("weights")) { return w; }
    for (const auto &[name, value] : params.at("weights").items()) {
        w[static_cast<std::size_t>(engine::parse_action_type(name))] = value.get<double>();
    }
    return w;
}

std::vector<UnitCommand> sample_weighted(const GameState &state,
  Player player,
  const ActionWeights &weights,
  std::mt19937_64 &rng,
  const engine::UnitStatsTable &stats)
{
    std::map<int, std::vector<UnitCommand>> per_unit;
    for (auto &c : engine::legal_commands(state, player, stats)) { per_unit[c.unit_id].push_back(c); }

    std::vector<UnitCommand> out;
    int stock = state.resources[static_cast<std::size_t>(engine::player_index(player))];
    std::vector<Position> claimed;
    std::vector<double> w;
    for (auto &[id, options] : per_unit) {
        // Drop options made impossible by earlier picks this tick.
        std::erase_if(options, [&](const UnitCommand &c) {
            if (c.action != ActionType::move && c.action != ActionType::produce) { return false; }
            const Position target = state.find(c.unit_id)->pos + engine::delta(*c.direction);
            if (std::find(claimed.begin(), claimed.end(), target) != claimed.end()) { return true; }
            return c.action == ActionType::produce && stats[*c.produce_kind].cost > stock;
        });
        w.clear();
        for (const auto &c : options) { w.push_back(weights[static_cast<std::size_t>(c.action)]); }
        if (options.empty() || std::all_of(w.begin(), w.end(), [](double x) { return x <= 0; })) { continue; }
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        const auto &chosen = options[pick(rng)];
        if (chosen.action == ActionType::noop) { continue; }
        if (chosen.action == ActionType::move || chosen.action == ActionType::produce) {
            claimed.push_back(state.find(chosen.unit_id)->pos + engine::delta(*chosen.direction));
            if (chosen.action == ActionType::produce) { stock -= stats[*chosen.produce_kind].cost; }
        }
        out.push_back(chosen);
    }
    return out;
}

}// namespace detail

namespace {

using detail::Planner;
using engine::Unit;
using engine::UnitKind;

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

UnitKind kind_param(const nlohmann::json &params, UnitKind fallback)
{
    return params.contains("kind") ? engine::parse_unit_kind(params.at("kind").get<std::string>()) : fallback;
}

class PassiveAgent final : public Agent
{
  public:
    explicit PassiveAgent(const AgentSpec &spec) : Agent(spec) {}
    std::vector<UnitCommand> act(const GameState &, Player) override { return {}; }
};

class WeightedRandomAgent final : public Agent
{
  public:
    WeightedRandomAgent(const AgentSpec &spec, detail::ActionWeights weights, std::uint64_t seed, const engine::UnitStatsTable &stats)
      : Agent(spec), weights_(weights), rng_(seed), stats_(stats)
    {}
    std::vector<UnitCommand> act(const GameState &state, Player player) override
    {
        return detail::sample_weighted(state, player, weights_, rng_, stats_);
    }

  private:
    detail::ActionWeights weights_;
    std::mt19937_64 rng_;
    const engine::UnitStatsTable &stats_;
};

// Base keeps training workers; the lowest-id worker gathers, every other
// worker attacks the nearest enemy.
class WorkerRushAgent final : public Agent
{
  public:
    WorkerRushAgent(const AgentSpec &spec, const engine::UnitStatsTable &stats) : Agent(spec), stats_(stats) {}

    std::vector<UnitCommand> act(const GameState &state, Player player) override
    {
        Planner plan(state, player, stats_);
        const auto workers = plan.own(UnitKind::worker);
        const int harvester = workers.empty() ? -1 : workers.front()->id;
        for (const auto *u : plan.idle_units()) {
            switch (u->kind) {
            case UnitKind::base: {
                const Unit *enemy = plan.nearest_enemy(u->pos);
                plan.produce(*u, UnitKind::worker, enemy ? std::optional(enemy->pos) : std::nullopt);
                break;
            }
            case UnitKind::worker:
                if (u->id == harvester && plan.harvest_cycle(*u)) { break; }
                plan.attack_nearest(*u);
                break;
            default:
                if (stats_[u->kind].can_attack()) { plan.attack_nearest(*u); }
                break;
            }
        }
        return plan.take();
    }

  private:
    const engine::UnitStatsTable &stats_;
};

// Builds one barracks, keeps a single worker economy and streams one unit kind
// at the nearest enemy. Workers never fight.
class UnitRushAgent final : public Agent
{
  public:
    UnitRushAgent(const AgentSpec &spec, const engine::UnitStatsTable &stats)
      : Agent(spec), kind_(kind_param(spec.params, UnitKind::light)), stats_(stats)
    {}

    std::vector<UnitCommand> act(const GameState &state, Player player) override
    {
        Planner plan(state, player, stats_);
        const auto workers = plan.own(UnitKind::worker);
        const bool need_barracks = plan.own(UnitKind::barracks).empty() && !plan.building_in_progress(UnitKind::barracks);
        bool builder_assigned = false;
        for (const auto *u : plan.idle_units()) {
            switch (u->kind) {
            case UnitKind::base:
                if (workers.empty() && !plan.building_in_progress(UnitKind::worker)) { plan.produce(*u, UnitKind::worker); }
                break;
            case UnitKind::barracks: {
                const Unit *enemy = plan.nearest_enemy(u->pos);
                plan.produce(*u, kind_, enemy ? std::optional(enemy->pos) : std::nullopt);
                break;
            }
            case UnitKind::worker:
                if (need_barracks && !builder_assigned && plan.stock() >= stats_[UnitKind::barracks].cost) {
                    builder_assigned = true;
                    if (plan.produce(*u, UnitKind::barracks)) { break; }
                }
                plan.harvest_cycle(*u);
                break;
            default:
                if (stats_[u->kind].can_attack()) { plan.attack_nearest(*u); }
                break;
            }
        }
        return plan.take();
    }

  private:
    UnitKind kind_;
    const engine::UnitStatsTable &stats_;
};

// Grows the worker count first, then masses an army and attacks once it is
// large enough.
class EconGreedyAgent final : public Agent
{
  public:
    EconGreedyAgent(const AgentSpec &spec, const engine::UnitStatsTable &stats)
      : Agent(spec), kind_(kind_param(spec.params, UnitKind::heavy)), max_workers_(spec.params.value("max_workers", 4)),
        attack_threshold_(spec.params.value("attack_threshold", 3)), stats_(stats)
    {}

    std::vector<UnitCommand> act(const GameState &state, Player player) override
    {
        Planner plan(state, player, stats_);
        const auto workers = plan.own(UnitKind::worker);
        const bool need_barracks = plan.own(UnitKind::barracks).empty() && !plan.building_in_progress(UnitKind::barracks);
        const auto army = plan.own(kind_);
        bool builder_assigned = false;
        for (const auto *u : plan.idle_units()) {
            switch (u->kind) {
            case UnitKind::base:
                if (static_cast<int>(workers.size()) < max_workers_) { plan.produce(*u, UnitKind::worker); }
                break;
            case UnitKind::barracks: plan.produce(*u, kind_); break;
            case UnitKind::worker:
                if (need_barracks && !builder_assigned && static_cast<int>(workers.size()) >= max_workers_
                    && plan.stock() >= stats_[UnitKind::barracks].cost) {
                    builder_assigned = true;
                    if (plan.produce(*u, UnitKind::barracks)) { break; }
                }
                plan.harvest_cycle(*u);
                break;
            default:
                if (static_cast<int>(army.size()) >= attack_threshold_) {
                    plan.attack_nearest(*u);
                } else if (!plan.attack_in_range(*u)) {
                    plan.clear_production_cells(*u);
                }
                break;
            }
        }
        return plan.take();
    }

  private:
    UnitKind kind_;
    int max_workers_;
    int attack_threshold_;
    const engine::UnitStatsTable &stats_;
};

// Keeps its army within a radius of the base and only engages intruders.
class DefensiveTurtleAgent final : public Agent
{
  public:
    DefensiveTurtleAgent(const AgentSpec &spec, const engine::UnitStatsTable &stats)
      : Agent(spec), kind_(kind_param(spec.params, UnitKind::ranged)), max_workers_(spec.params.value("max_workers", 2)),
        radius_(spec.params.value("radius", 3)), stats_(stats)
    {}

    std::vector<UnitCommand> act(const GameState &state, Player player) override
    {
        Planner plan(state, player, stats_);
        const auto workers = plan.own(UnitKind::worker);
        const bool need_barracks = plan.own(UnitKind::barracks).empty() && !plan.building_in_progress(UnitKind::barracks);
        bool builder_assigned = false;
        for (const auto *u : plan.idle_units()) {
            switch (u->kind) {
            case UnitKind::base:
                if (static_cast<int>(workers.size()) < max_workers_) { plan.produce(*u, UnitKind::worker); }
                break;
            case UnitKind::barracks: plan.produce(*u, kind_); break;
            case UnitKind::worker:
                if (need_barracks && !builder_assigned && plan.stock() >= stats_[UnitKind::barracks].cost) {
                    builder_assigned = true;
                    if (plan.produce(*u, UnitKind::barracks)) { break; }
                }
                plan.harvest_cycle(*u);
                break;
            default: defend(plan, *u); break;
            }
        }
        return plan.take();
    }

  private:
    void defend(Planner &plan, const Unit &u) const
    {
        if (plan.attack_in_range(u)) { return; }
        const Unit *home = plan.nearest_own_base(u.pos);
        if (home == nullptr) {
            plan.attack_nearest(u);
            return;
        }
        const Unit *intruder = plan.nearest_enemy(home->pos);
        if (intruder != nullptr && detail::manhattan(intruder->pos, home->pos) <= radius_ + stats_[u.kind].range) {
            plan.approach(u, *intruder);
            return;
        }
        if (detail::manhattan(u.pos, home->pos) > radius_) {
            plan.approach(u, *home);
            return;
        }
        plan.clear_production_cells(u);
    }

    UnitKind kind_;
    int max_workers_;
    int radius_;
    const engine::UnitStatsTable &stats_;
};

}// namespace

const std::vector<std::string> &policy_ids()
{
    static const std::vector<std::string> ids{ "passive", "random", "random_biased", "worker_rush", "unit_rush",
        "econ_greedy", "defensive_turtle", "naive_mcts" };
    return ids;
}

std::unique_ptr<Agent> make_agent(const AgentSpec &spec, std::uint64_t match_seed, Player side, const engine::UnitStatsTable &stats)
{
    const std::uint64_t seed = splitmix64(splitmix64(spec.seed) ^ splitmix64(match_seed + static_cast<std::uint64_t>(side)));
    const auto &id = spec.policy_id;
    if (id == "passive") { return std::make_unique<PassiveAgent>(spec); }
    if (id == "random") {
        return std::make_unique<WeightedRandomAgent>(spec, detail::ActionWeights{ 1, 1, 1, 1, 1, 1 }, seed, stats);
    }
    if (id == "random_biased") {
        auto weights = detail::ActionWeights{ 1, 1, 5, 5, 1, 5 };
        if (spec.params.contains("weights")) { weights = detail::read_weights(spec.params); }
        return std::make_unique<WeightedRandomAgent>(spec, weights, seed, stats);
    }
    if (id == "worker_rush") { return std::make_unique<WorkerRushAgent>(spec, stats); }
    if (id == "unit_rush") { return std::make_unique<UnitRushAgent>(spec, stats); }
    if (id == "econ_greedy") { return std::make_unique<EconGreedyAgent>(spec, stats); }
    if (id == "defensive_turtle") { return std::make_unique<DefensiveTurtleAgent>(spec, stats); }
    if (id == "naive_mcts") { return detail::make_naive_mcts(spec, seed, stats); }
    throw std::invalid_argument("unknown policy '" + id + "' for agent " + spec.name);
}

}// namespace playstyle::agents
