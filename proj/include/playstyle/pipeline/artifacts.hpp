#pragma once

#include "playstyle/cluster/embedding.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

namespace playstyle::pipeline {

/// Directory layout of one pipeline run:
///   simulate/ manifest.json, matches.jsonl, replays/<match_id>.jsonl
///   encode/   manifest.json, dataset/ (trace shards + dataset manifest)
///   train/<scheme>/ manifest.json, model.pt, history.json
///   embed/<scheme>/ manifest.json, embeddings.bin, rows.json
///   cluster/<scheme>/ manifest.json, report.json, table.txt, reduced.bin
///   report/   manifest.json, summary.txt, summary.json, tsne.json
struct Layout {
    std::filesystem::path root;

    [[nodiscard]] std::filesystem::path simulate() const { return root / "simulate"; }
    [[nodiscard]] std::filesystem::path replays() const { return simulate() / "replays"; }
    [[nodiscard]] std::filesystem::path replay(const std::string &match_id) const { return replays() / (match_id + ".jsonl"); }
    [[nodiscard]] std::filesystem::path encode() const { return root / "encode"; }
    [[nodiscard]] std::filesystem::path dataset() const { return encode() / "dataset"; }
    [[nodiscard]] std::filesystem::path train(const std::string &scheme) const { return root / "train" / scheme; }
    [[nodiscard]] std::filesystem::path embed(const std::string &scheme) const { return root / "embed" / scheme; }
    [[nodiscard]] std::filesystem::path cluster(const std::string &scheme) const { return root / "cluster" / scheme; }
    [[nodiscard]] std::filesystem::path report() const { return root / "report"; }
};

inline constexpr const char *kManifest = "manifest.json";

/// A stage manifest records a key (hash of the stage's configuration and of
/// its input manifests) and the SHA-256 of each output file relative to the
/// stage directory.
[[nodiscard]] std::optional<nlohmann::json> read_manifest(const std::filesystem::path &stage_dir);

/// Reads the manifest of a prerequisite stage or throws PipelineError naming it.
nlohmann::json require_manifest(const std::filesystem::path &stage_dir, const std::string &producer);

/// True when the stage's manifest carries `key` and all listed outputs are intact.
[[nodiscard]] bool up_to_date(const std::filesystem::path &stage_dir, const std::string &key);

/// Hashes `outputs` (paths relative to the stage directory) and writes the manifest.
nlohmann::json write_manifest(const std::filesystem::path &stage_dir,
  const std::string &stage,
  const std::string &key,
  const std::vector<std::string> &outputs,
  const nlohmann::json &extra = nlohmann::json::object());

/// SHA-256 of the manifest file itself, used as an input key downstream.
[[nodiscard]] std::string manifest_hash(const std::filesystem::path &stage_dir);

/// Writes text atomically enough for our purposes (temp file + rename).
void write_text(const std::filesystem::path &path, const std::string &text);
[[nodiscard]] std::string read_text(const std::filesystem::path &path);

/// Embedding matrices: "PSEM" u32:version u64:rows u32:dims then row-major f64.
void write_matrix(const std::filesystem::path &path, const Eigen::MatrixXd &m);
[[nodiscard]] Eigen::MatrixXd read_matrix(const std::filesystem::path &path);

[[nodiscard]] nlohmann::json rows_to_json(const std::vector<cluster::RowMeta> &rows);
[[nodiscard]] std::vector<cluster::RowMeta> rows_from_json(const nlohmann::json &j);

}// namespace playstyle::pipeline
