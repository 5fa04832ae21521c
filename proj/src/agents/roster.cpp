#include "playstyle/agents/roster.hpp"

#include "playstyle/generated/embedded_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace playstyle::agents {

std::vector<AgentSpec> make_roster(const nlohmann::json &config)
{
    if (!config.contains("agents") || !config.at("agents").is_array()) {
        throw std::invalid_argument("roster config needs an 'agents' array");
    }
    std::vector<AgentSpec> roster;
    std::set<std::string> names;
    for (const auto &entry : config.at("agents")) {
        AgentSpec spec;
        spec.name = entry.at("name").get<std::string>();
        spec.policy_id = entry.at("policy").get<std::string>();
        spec.seed = entry.value("seed", std::uint64_t{ 0 });
        spec.params = entry.value("params", nlohmann::json::object());
        if (spec.name.empty() || spec.name.find_first_of("./ \t\n") != std::string::npos) {
            throw std::invalid_argument("invalid agent name '" + spec.name + "'");
        }
        const auto &ids = policy_ids();
        if (std::find(ids.begin(), ids.end(), spec.policy_id) == ids.end()) {
            throw std::invalid_argument("agent " + spec.name + ": unknown policy '" + spec.policy_id + "'");
        }
        if (!names.insert(spec.name).second) { throw std::invalid_argument("duplicate agent name '" + spec.name + "'"); }
        roster.push_back(std::move(spec));
    }
    if (roster.size() < 2) { throw std::invalid_argument("a roster needs at least two agents"); }
    return roster;
}

std::vector<AgentSpec> load_roster(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) { throw std::runtime_error("cannot open roster " + path.string()); }
    return make_roster(nlohmann::json::parse(in));
}

std::vector<AgentSpec> default_roster() { return make_roster(nlohmann::json::parse(embedded::kDefaultRosterJson)); }

nlohmann::json roster_to_json(const std::vector<AgentSpec> &roster)
{
    nlohmann::json agents = nlohmann::json::array();
    for (const auto &a : roster) {
        agents.push_back({ { "name", a.name }, { "policy", a.policy_id }, { "seed", a.seed }, { "params", a.params } });
    }
    return { { "agents", std::move(agents) } };
}

}// namespace playstyle::agents
