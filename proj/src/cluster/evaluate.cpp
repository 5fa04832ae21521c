#include "playstyle/cluster/evaluate.hpp"

#include <fmt/format.h>
#include <sstream>
#include <stdexcept>

namespace playstyle::cluster {

std::string GroupKey::to_string() const { return fmt::format("{},{},{}", map, engine::to_string(side), slot); }

GroupKey GroupKey::parse(const std::string &text)
{
    std::stringstream in(text);
    std::string map;
    std::string side;
    std::string slot;
    if (!std::getline(in, map, ',') || !std::getline(in, side, ',') || !std::getline(in, slot) || map.size() != 1) {
        throw std::invalid_argument("group key '" + text + "' is not of the form MAP,SIDE,SLOT");
    }
    GroupKey key;
    key.map = map[0];
    key.side = engine::parse_player(side);
    if (key.side == engine::Player::none) { throw std::invalid_argument("group key '" + text + "' has no side"); }
    try {
        std::size_t used = 0;
        key.slot = std::stoi(slot, &used);
        if (used != slot.size() || key.slot < 0) { throw std::invalid_argument(slot); }
    } catch (const std::exception &) {
        throw std::invalid_argument("group key '" + text + "' has an invalid slot");
    }
    return key;
}

std::vector<Group> coherent_groups(const EmbeddingSet &e, const std::optional<std::vector<int>> &slots)
{
    std::map<GroupKey, std::vector<std::size_t>> by_key;
    for (std::size_t i = 0; i < e.meta.size(); ++i) {
        const auto &m = e.meta[i];
        if (slots && std::find(slots->begin(), slots->end(), m.slot) == slots->end()) { continue; }
        by_key[GroupKey{ m.map, m.side, m.slot }].push_back(i);
    }
    std::vector<Group> out;
    for (auto &[key, rows] : by_key) { out.push_back(Group{ key, std::move(rows) }); }
    return out;
}

void to_json(nlohmann::json &j, const EvaluationConfig &c)
{
    j = nlohmann::json{ { "ks", c.ks },
        { "slots", c.slots },
        { "average_maps", c.average_maps },
        { "single_maps", c.single_maps },
        { "restarts", c.restarts },
        { "max_iterations", c.max_iterations },
        { "tolerance", c.tolerance },
        { "seed", c.seed } };
}

void from_json(const nlohmann::json &j, EvaluationConfig &c)
{
    const EvaluationConfig d;
    c.ks = j.value("ks", d.ks);
    c.slots = j.value("slots", d.slots);
    c.average_maps = j.value("average_maps", d.average_maps);
    c.single_maps = j.value("single_maps", d.single_maps);
    c.restarts = j.value("restarts", d.restarts);
    c.max_iterations = j.value("max_iterations", d.max_iterations);
    c.tolerance = j.value("tolerance", d.tolerance);
    c.seed = j.value("seed", d.seed);
    if (c.ks.empty() || std::any_of(c.ks.begin(), c.ks.end(), [](int k) { return k < 1; })) {
        throw std::invalid_argument("cluster: ks must be a non-empty list of positive integers");
    }
}

namespace {

    ClusterMetrics mean_of(const std::vector<ClusterMetrics> &ms)
    {
        ClusterMetrics m;
        for (const auto &x : ms) {
            m.completeness += x.completeness;
            m.homogeneity += x.homogeneity;
            m.ari += x.ari;
            m.ami += x.ami;
        }
        const auto n = static_cast<double>(ms.size());
        return { m.completeness / n, m.homogeneity / n, m.ari / n, m.ami / n };
    }

    nlohmann::json metrics_json(const ClusterMetrics &m)
    {
        return { { "completeness", m.completeness }, { "homogeneity", m.homogeneity }, { "ari", m.ari }, { "ami", m.ami } };
    }

}// namespace

Evaluation evaluate_all(const EmbeddingSet &e, const EvaluationConfig &config)
{
    e.validate();
    Evaluation out;
    out.groups = coherent_groups(e, config.slots);
    if (out.groups.empty()) { out.warnings.push_back("no rows fall into the requested slots"); }

    for (std::size_t g = 0; g < out.groups.size(); ++g) {
        const auto &group = out.groups[g];
        const auto sub = e.subset(group.rows);
        std::vector<std::string> names;
        for (const auto &m : sub.meta) { names.push_back(m.label); }
        const auto labels = encode_labels(names);
        for (const int k : config.ks) {
            if (static_cast<int>(group.rows.size()) < k) {
                out.warnings.push_back(fmt::format("group {} has {} samples, fewer than k={}; skipped", group.key.to_string(), group.rows.size(), k));
                continue;
            }
            if (group.rows.size() < 2) { continue; }
            KMeansConfig kc{ k, config.restarts, config.max_iterations, config.tolerance, config.seed + 1000003ULL * g + static_cast<std::uint64_t>(k) };
            const auto km = kmeans(sub.data, kc);
            ClusterReport report{ group.key, k, km.assignments, clustering_metrics(labels, km.assignments), {} };
            for (std::size_t i = 0; i < names.size(); ++i) { ++report.histograms[km.assignments[i]][names[i]]; }
            out.reports.push_back(std::move(report));
        }
    }

    for (const int k : config.ks) {
        AggregateRow row;
        row.k = k;
        std::vector<ClusterMetrics> average;
        std::vector<ClusterMetrics> single;
        for (const auto &r : out.reports) {
            if (r.k != k) { continue; }
            if (config.average_maps.find(r.key.map) != std::string::npos) { average.push_back(r.metrics); }
            if (config.single_maps.find(r.key.map) != std::string::npos) { single.push_back(r.metrics); }
        }
        row.average_groups = static_cast<int>(average.size());
        row.single_groups = static_cast<int>(single.size());
        if (!average.empty()) { row.average = mean_of(average); }
        if (!single.empty()) { row.single = mean_of(single); }
        out.table.push_back(row);
    }
    return out;
}

nlohmann::json to_json(const Evaluation &evaluation, const EmbeddingSet &e)
{
    nlohmann::json groups = nlohmann::json::array();
    for (const auto &g : evaluation.groups) {
        std::map<std::string, int> labels;
        for (const auto r : g.rows) { ++labels[e.meta[r].label]; }
        groups.push_back({ { "key", g.key.to_string() }, { "size", g.rows.size() }, { "labels", labels } });
    }
    nlohmann::json reports = nlohmann::json::array();
    for (const auto &r : evaluation.reports) {
        const auto &rows = std::find_if(evaluation.groups.begin(), evaluation.groups.end(), [&](const Group &g) { return g.key == r.key; })->rows;
        nlohmann::json samples = nlohmann::json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            samples.push_back({ { "sample_id", e.meta[rows[i]].sample_id }, { "label", e.meta[rows[i]].label }, { "cluster", r.assignments[i] } });
        }
        nlohmann::json hist = nlohmann::json::object();
        for (const auto &[cluster, counts] : r.histograms) { hist[std::to_string(cluster)] = counts; }
        reports.push_back({ { "group", r.key.to_string() }, { "k", r.k }, { "metrics", metrics_json(r.metrics) }, { "histograms", hist }, { "samples", samples } });
    }
    nlohmann::json table = nlohmann::json::array();
    for (const auto &row : evaluation.table) {
        table.push_back({ { "k", row.k },
          { "average", row.average ? metrics_json(*row.average) : nlohmann::json() },
          { "average_groups", row.average_groups },
          { "single", row.single ? metrics_json(*row.single) : nlohmann::json() },
          { "single_groups", row.single_groups } });
    }
    return { { "groups", groups }, { "reports", reports }, { "table", table }, { "warnings", evaluation.warnings } };
}

std::string render_table(const Evaluation &evaluation,
  const std::string &title,
  const std::string &average_label,
  const std::string &single_label)
{
    const auto cell = [](const std::optional<ClusterMetrics> &m, double ClusterMetrics::*field) {
        return m ? fmt::format("{:>7.3f}", (*m).*field) : fmt::format("{:>7}", "-");
    };
    std::string out = title + "\n";
    out += fmt::format("{:>4} | {:^17} | {:^17} | {:^17} | {:^17}\n", "k", "Completeness", "Homogeneity", "ARI", "AMI");
    out += fmt::format("{:>4} |", "");
    for (int i = 0; i < 4; ++i) { out += fmt::format(" {:>7}   {:>7} |", average_label, single_label); }
    out.back() = '\n';
    for (const auto &row : evaluation.table) {
        out += fmt::format("{:>4} |", row.k);
        for (const auto field : { &ClusterMetrics::completeness, &ClusterMetrics::homogeneity, &ClusterMetrics::ari, &ClusterMetrics::ami }) {
            out += fmt::format(" {}   {} |", cell(row.average, field), cell(row.single, field));
        }
        out.back() = '\n';
    }
    return out;
}

}// namespace playstyle::cluster
