#pragma once

#include "playstyle/agents/agent.hpp"

#include <array>
#include <random>

namespace playstyle::agents::detail {

/// Per-action-type sampling weights, indexed by engine::ActionType.
using ActionWeights = std::array<double, engine::kActionTypeCount>;

[[nodiscard]] ActionWeights read_weights(const nlohmann::json &params);

/// Picks one legal command per idle unit with probability proportional to the
/// weight of its action type. Noop picks are dropped from the result.
[[nodiscard]] std::vector<UnitCommand> sample_weighted(const GameState &state,
  Player player,
  const ActionWeights &weights,
  std::mt19937_64 &rng,
  const engine::UnitStatsTable &stats);

[[nodiscard]] std::unique_ptr<Agent>
  make_naive_mcts(const AgentSpec &spec, std::uint64_t seed, const engine::UnitStatsTable &stats);

}// namespace playstyle::agents::detail
