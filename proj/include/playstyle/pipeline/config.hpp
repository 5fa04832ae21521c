#pragma once

#include "playstyle/agents/agent.hpp"
#include "playstyle/autoencoder/config.hpp"
#include "playstyle/cluster/evaluate.hpp"
#include "playstyle/codec/dataset.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace playstyle::pipeline {

class PipelineError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Feature schemes: the three learned encodings plus the 18-feature baseline.
inline const std::vector<std::string> &all_schemes()
{
    static const std::vector<std::string> schemes{ "states", "actions", "joint", "handcrafted" };
    return schemes;
}
[[nodiscard]] bool is_scheme(const std::string &s);
[[nodiscard]] bool is_learned(const std::string &scheme);

struct TsneSettings {
    double perplexity = 30.0;
    int iterations = 1000;
};

struct PipelineConfig {
    std::vector<agents::AgentSpec> roster;
    nlohmann::json roster_json;// as resolved, for hashing
    std::string maps = "ABCDEFGHIJKL";
    int repeats = 10;
    int max_ticks = 2000;
    std::uint64_t seed = 0;
    std::filesystem::path out = "runs/default";
    std::vector<std::string> schemes{ "states", "actions", "joint", "handcrafted" };
    codec::SplitPolicy split;
    float resource_cap = 20.0F;
    autoencoder::ModelConfig model;
    autoencoder::TrainConfig training;
    cluster::EvaluationConfig cluster;
    int pca_dims = 64;
    TsneSettings tsne;

    /// Stage-independent JSON view (no output path), used for hashing.
    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] codec::CodecConfig codec() const;
};

/// Parses a config; relative roster paths resolve against `base_dir`.
/// Throws PipelineError on invalid settings.
[[nodiscard]] PipelineConfig parse_config(const nlohmann::json &j, const std::filesystem::path &base_dir);
[[nodiscard]] PipelineConfig load_config(const std::filesystem::path &path);

/// Global-seed override: every stochastic stage derives its seed from it.
void apply_seed(PipelineConfig &config, std::uint64_t seed);

}// namespace playstyle::pipeline
