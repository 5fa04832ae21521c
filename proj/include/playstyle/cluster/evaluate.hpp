#pragma once

#include "playstyle/cluster/embedding.hpp"
#include "playstyle/cluster/kmeans.hpp"
#include "playstyle/cluster/metrics.hpp"

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace playstyle::cluster {

/// Rows coherent in space and time: same map, same side, same window slot.
struct GroupKey {
    char map = 'A';
    engine::Player side = engine::Player::p1;
    int slot = 0;

    [[nodiscard]] std::string to_string() const;// e.g. "A,p1,0"
    [[nodiscard]] static GroupKey parse(const std::string &text);
    friend auto operator<=>(const GroupKey &, const GroupKey &) = default;
};

struct Group {
    GroupKey key;
    std::vector<std::size_t> rows;
};

/// Partitions the rows by (map, side, slot), ordered by key. With `slots`
/// set, only those slots are kept.
[[nodiscard]] std::vector<Group> coherent_groups(const EmbeddingSet &e, const std::optional<std::vector<int>> &slots = std::nullopt);

struct EvaluationConfig {
    std::vector<int> ks{ 10, 13, 16 };
    std::vector<int> slots{ 0 };
    std::string average_maps = "ABCDEFGHIJK";
    std::string single_maps = "L";
    int restarts = 10;
    int max_iterations = 300;
    double tolerance = 1e-4;
    std::uint64_t seed = 0;
};

void to_json(nlohmann::json &j, const EvaluationConfig &c);
void from_json(const nlohmann::json &j, EvaluationConfig &c);

struct ClusterReport {
    GroupKey key;
    int k = 0;
    std::vector<int> assignments;// aligned with Group::rows
    ClusterMetrics metrics;
    std::map<int, std::map<std::string, int>> histograms;// cluster -> label -> count
};

/// Mean metrics over a set of groups; empty when no group contributed.
struct AggregateRow {
    int k = 0;
    std::optional<ClusterMetrics> average;// groups on average_maps
    std::optional<ClusterMetrics> single;// groups on single_maps
    int average_groups = 0;
    int single_groups = 0;
};

struct Evaluation {
    std::vector<Group> groups;
    std::vector<ClusterReport> reports;
    std::vector<AggregateRow> table;
    std::vector<std::string> warnings;
};

/// k-means plus metrics for every coherent group and every k. Groups smaller
/// than k are skipped with a warning.
[[nodiscard]] Evaluation evaluate_all(const EmbeddingSet &e, const EvaluationConfig &config = {});

/// Machine-readable report (fixed key order, no timestamps).
[[nodiscard]] nlohmann::json to_json(const Evaluation &evaluation, const EmbeddingSet &e);

/// Text table with columns {C, H, ARI, AMI} x {A-K avg, L}, one row per k.
[[nodiscard]] std::string render_table(const Evaluation &evaluation,
  const std::string &title,
  const std::string &average_label = "A-K",
  const std::string &single_label = "L");

}// namespace playstyle::cluster
