#include "policies.hpp"

#include "playstyle/engine/rules.hpp"

#include <cmath>
#include <map>

namespace playstyle::agents::detail {

namespace {

using engine::ActionType;
using engine::Outcome;
using engine::UnitKind;

// Material balance in [-1, 1] from `player`'s side.
double evaluate(const GameState &state, Player player, const engine::UnitStatsTable &stats)
{
    switch (engine::outcome(state)) {
    case Outcome::p1_wins: return player == Player::p1 ? 1.0 : -1.0;
    case Outcome::p2_wins: return player == Player::p2 ? 1.0 : -1.0;
    case Outcome::draw: return 0.0;
    case Outcome::ongoing: break;
    }
    std::array<double, 2> score{ 20.0 * state.resources[0], 20.0 * state.resources[1] };
    for (const auto &u : state.units) {
        if (u.owner == Player::none) { continue; }
        const auto &s = stats[u.kind];
        const double cost = std::max(1, s.cost);
        score[static_cast<std::size_t>(engine::player_index(u.owner))] +=
          10.0 * u.carried + 40.0 * cost * std::sqrt(static_cast<double>(u.hp) / s.hp);
    }
    const double mine = score[static_cast<std::size_t>(engine::player_index(player))];
    const double theirs = score[static_cast<std::size_t>(engine::player_index(engine::opponent(player)))];
    return mine + theirs > 0 ? (mine - theirs) / (mine + theirs) : 0.0;
}

struct Arm {
    UnitCommand cmd;
    int visits = 0;
    double total = 0.0;
    [[nodiscard]] double mean() const noexcept { return visits > 0 ? total / visits : 0.0; }
};

// Naive sampling over per-unit arms: each playout draws one command per idle
// unit epsilon-greedily from that unit's own bandit, rolls the game forward
// with biased random play and credits the result to every chosen arm.
class NaiveMctsAgent final : public Agent
{
  public:
    NaiveMctsAgent(const AgentSpec &spec, std::uint64_t seed, const engine::UnitStatsTable &stats)
      : Agent(spec), playouts_(spec.params.value("playouts", 100)), depth_(spec.params.value("depth", 100)),
        epsilon_(spec.params.value("epsilon", 0.25)), rng_(seed), stats_(stats)
    {}

    std::vector<UnitCommand> act(const GameState &state, Player player) override
    {
        std::map<int, std::vector<Arm>> bandits;
        for (auto &c : engine::legal_commands(state, player, stats_)) { bandits[c.unit_id].push_back(Arm{ c }); }
        if (bandits.empty()) { return {}; }

        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::vector<std::pair<int, std::size_t>> chosen;
        std::vector<UnitCommand> combo;
        for (int i = 0; i < playouts_; ++i) {
            chosen.clear();
            combo.clear();
            int stock = state.resources[static_cast<std::size_t>(engine::player_index(player))];
            std::vector<engine::Position> claimed;
            for (auto &[id, arms] : bandits) {
                std::size_t pick = 0;
                if (coin(rng_) < epsilon_) {
                    pick = std::uniform_int_distribution<std::size_t>(0, arms.size() - 1)(rng_);
                } else {
                    for (std::size_t a = 1; a < arms.size(); ++a) {
                        if (arms[a].mean() > arms[pick].mean()) { pick = a; }
                    }
                }
                const auto &cmd = arms[pick].cmd;
                // Combinations that clash inside the playout are credited as noops.
                bool usable = true;
                if (cmd.action == ActionType::move || cmd.action == ActionType::produce) {
                    const auto target = state.find(id)->pos + engine::delta(*cmd.direction);
                    usable = std::find(claimed.begin(), claimed.end(), target) == claimed.end();
                    if (usable && cmd.action == ActionType::produce) {
                        usable = stats_[*cmd.produce_kind].cost <= stock;
                        if (usable) { stock -= stats_[*cmd.produce_kind].cost; }
                    }
                    if (usable) { claimed.push_back(target); }
                }
                if (usable && cmd.action != ActionType::noop) { combo.push_back(cmd); }
                chosen.emplace_back(id, pick);
            }
            const double reward = playout(state, player, combo);
            for (const auto &[id, pick] : chosen) {
                auto &arm = bandits[id][pick];
                ++arm.visits;
                arm.total += reward;
            }
        }

        std::vector<UnitCommand> out;
        std::vector<engine::Position> claimed;
        int stock = state.resources[static_cast<std::size_t>(engine::player_index(player))];
        for (auto &[id, arms] : bandits) {
            std::vector<std::size_t> order(arms.size());
            for (std::size_t a = 0; a < arms.size(); ++a) { order[a] = a; }
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const bool va = arms[a].visits > 0;
                const bool vb = arms[b].visits > 0;
                if (va != vb) { return va; }
                return arms[a].mean() > arms[b].mean();
            });
            for (const auto a : order) {
                const auto &cmd = arms[a].cmd;
                if (cmd.action == ActionType::noop) { break; }
                if (cmd.action == ActionType::move || cmd.action == ActionType::produce) {
                    const auto target = state.find(id)->pos + engine::delta(*cmd.direction);
                    if (std::find(claimed.begin(), claimed.end(), target) != claimed.end()) { continue; }
                    if (cmd.action == ActionType::produce) {
                        if (stats_[*cmd.produce_kind].cost > stock) { continue; }
                        stock -= stats_[*cmd.produce_kind].cost;
                    }
                    claimed.push_back(target);
                }
                out.push_back(cmd);
                break;
            }
        }
        return out;
    }

  private:
    double playout(const GameState &root, Player player, const std::vector<UnitCommand> &first)
    {
        static constexpr ActionWeights kPlayoutWeights{ 1, 1, 5, 5, 1, 5 };
        const Player other = engine::opponent(player);
        const auto theirs = sample_weighted(root, other, kPlayoutWeights, rng_, stats_);
        GameState s = player == Player::p1 ? engine::step(root, first, theirs, stats_) : engine::step(root, theirs, first, stats_);
        const int horizon = std::min(root.max_ticks, root.tick + depth_);
        while (s.tick < horizon && engine::outcome(s) == Outcome::ongoing) {
            const auto a = sample_weighted(s, Player::p1, kPlayoutWeights, rng_, stats_);
            const auto b = sample_weighted(s, Player::p2, kPlayoutWeights, rng_, stats_);
            s = engine::step(s, a, b, stats_);
        }
        return evaluate(s, player, stats_);
    }

    int playouts_;
    int depth_;
    double epsilon_;
    std::mt19937_64 rng_;
    const engine::UnitStatsTable &stats_;
};

}// namespace

std::unique_ptr<Agent> make_naive_mcts(const AgentSpec &spec, std::uint64_t seed, const engine::UnitStatsTable &stats)
{
    return std::make_unique<NaiveMctsAgent>(spec, seed, stats);
}

}// namespace playstyle::agents::detail
