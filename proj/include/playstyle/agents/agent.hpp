#pragma once

#include "playstyle/engine/types.hpp"
#include "playstyle/engine/unit_stats.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace playstyle::agents {

using engine::GameState;
using engine::Player;
using engine::UnitCommand;

/// A named, seeded policy. `name` doubles as the ground-truth label of the
/// traces the agent produces.
struct AgentSpec {
    std::string name;
    std::string policy_id;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
};

/// One policy instance per match and side. Implementations keep no state
/// between calls except their random generator.
class Agent
{
  public:
    virtual ~Agent() = default;

    /// Commands for this tick: a subset of legal_commands(state, player) holding
    /// at most one command per idle unit. Noops are left out.
    [[nodiscard]] virtual std::vector<UnitCommand> act(const GameState &state, Player player) = 0;

    [[nodiscard]] const AgentSpec &spec() const noexcept { return spec_; }

  protected:
    explicit Agent(AgentSpec spec) : spec_(std::move(spec)) {}

  private:
    AgentSpec spec_;
};

/// Policy ids understood by make_agent.
[[nodiscard]] const std::vector<std::string> &policy_ids();

/// Instantiates the policy of `spec`. The generator is seeded from the spec seed,
/// the match seed and the side, so the command stream is reproducible.
[[nodiscard]] std::unique_ptr<Agent> make_agent(const AgentSpec &spec,
  std::uint64_t match_seed,
  Player side,
  const engine::UnitStatsTable &stats = engine::UnitStatsTable::defaults());

}// namespace playstyle::agents
