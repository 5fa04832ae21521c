#pragma once

#include "playstyle/agents/agent.hpp"

#include <filesystem>
#include <vector>

namespace playstyle::agents {

/*
 * Roster file format (JSON):
 *
 *   { "agents": [ { "name": "WorkerRush", "policy": "worker_rush", "seed": 4, "params": { ... } }, ... ] }
 *
 * Names must be unique and may not contain '.', '/' or whitespace since they
 * end up in match and trace ids.
 */
[[nodiscard]] std::vector<AgentSpec> make_roster(const nlohmann::json &config);
[[nodiscard]] std::vector<AgentSpec> load_roster(const std::filesystem::path &path);

/// The shipped ten-agent roster (config/roster_default.json).
[[nodiscard]] std::vector<AgentSpec> default_roster();

[[nodiscard]] nlohmann::json roster_to_json(const std::vector<AgentSpec> &roster);

}// namespace playstyle::agents
