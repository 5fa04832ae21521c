#pragma once

#include "playstyle/pipeline/config.hpp"

#include <optional>
#include <string>

namespace playstyle::pipeline {

struct StageOutcome {
    bool skipped = false;// outputs were already up to date
    std::string summary;
};

/// Plays every ordered match-up on every map `repeats` times. Completed
/// matches are journalled, so an interrupted run resumes without duplicates.
StageOutcome cmd_simulate(const PipelineConfig &config);

/// Rebuilds traces from the replays, splits and windows them, writes shards.
StageOutcome cmd_encode(const PipelineConfig &config);

/// Trains the autoencoder of one learned scheme.
StageOutcome cmd_train(const PipelineConfig &config, const std::string &scheme);

/// Embeds the analysed windows with a trained model or the handcrafted features.
StageOutcome cmd_embed(const PipelineConfig &config, const std::string &scheme);

/// PCA (fit on the training split) + k-means + metrics per coherent group.
StageOutcome cmd_cluster(const PipelineConfig &config, const std::string &scheme);

/// Table-I style summary over every clustered scheme plus t-SNE coordinates.
StageOutcome cmd_report(const PipelineConfig &config);

/// Runs every stage for the configured schemes (or just `only_scheme`).
void run_all(const PipelineConfig &config, const std::optional<std::string> &only_scheme = std::nullopt);

/// Match seed derived from the global seed and the match id.
[[nodiscard]] std::uint64_t match_seed(std::uint64_t global_seed, const std::string &match_id) noexcept;

}// namespace playstyle::pipeline
