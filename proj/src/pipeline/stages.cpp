#include "playstyle/pipeline/stages.hpp"

#include "playstyle/autoencoder/autoencoder.hpp"
#include "playstyle/cluster/pca.hpp"
#include "playstyle/cluster/tsne.hpp"
#include "playstyle/codec/trace.hpp"
#include "playstyle/engine/replay.hpp"
#include "playstyle/pipeline/artifacts.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace playstyle::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t match_seed(std::uint64_t global_seed, const std::string &match_id) noexcept
{
    // FNV-1a over the id, mixed with the global seed through splitmix64.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : match_id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = h ^ (global_seed + 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

    std::string hash_json(const json &j) { return codec::sha256_hex(j.dump()); }

    // Column label for a set of maps: "L", or "A-K" for a run of several.
    std::string map_range(const std::string &maps)
    {
        if (maps.size() <= 1) { return maps; }
        return fmt::format("{}-{}", maps.front(), maps.back());
    }

    Layout layout_of(const PipelineConfig &config) { return Layout{ config.out }; }

    void require_scheme(const std::string &scheme, bool learned_only)
    {
        if (!is_scheme(scheme) || (learned_only && !is_learned(scheme))) {
            throw PipelineError("unknown " + std::string(learned_only ? "learned " : "") + "scheme \"" + scheme + "\"");
        }
    }

    struct PlannedMatch {
        std::string id;
        char variant;
        const agents::AgentSpec *p1;
        const agents::AgentSpec *p2;
        int repeat;
    };

    std::vector<PlannedMatch> plan_matches(const PipelineConfig &config)
    {
        std::vector<PlannedMatch> plan;
        for (char v : config.maps) {
            for (const auto &p1 : config.roster) {
                for (const auto &p2 : config.roster) {
                    for (int r = 0; r < config.repeats; ++r) {
                        plan.push_back({ codec::match_id(v, p1.name, p2.name, r), v, &p1, &p2, r });
                    }
                }
            }
        }
        return plan;
    }

    json simulate_key_json(const PipelineConfig &config)
    {
        return json{ { "roster", config.roster_json },
            { "maps", config.maps },
            { "repeats", config.repeats },
            { "max_ticks", config.max_ticks },
            { "seed", config.seed },
            { "stats_version", engine::UnitStatsTable::defaults().version() } };
    }

    // Journal lines of completed matches whose replay is still intact.
    std::map<std::string, json> read_journal(const Layout &layout, const std::string &key)
    {
        std::map<std::string, json> done;
        std::ifstream in(layout.simulate() / "matches.jsonl");
        std::string line;
        if (!in || !std::getline(in, line)) { return done; }
        try {
            if (json::parse(line).value("key", std::string{}) != key) { return {}; }
        } catch (const json::parse_error &) {
            return {};
        }
        while (std::getline(in, line)) {
            json entry;
            try {
                entry = json::parse(line);
            } catch (const json::parse_error &) {
                break;// a line cut short by an interruption
            }
            const auto id = entry.value("match_id", std::string{});
            const auto path = layout.replay(id);
            if (!id.empty() && fs::exists(path) && codec::sha256_file(path) == entry.value("sha256", std::string{})) {
                done[id] = entry;
            }
        }
        return done;
    }

    // Analysed windows (eval stride, configured slots) with the ticks they span.
    std::vector<codec::SequenceSample> eval_windows(const codec::Dataset &dataset,
      const cluster::EvaluationConfig &cluster_config,
      std::vector<std::array<int, 2>> &ticks)
    {
        std::vector<codec::SequenceSample> samples;
        const std::set<int> slots(cluster_config.slots.begin(), cluster_config.slots.end());
        const auto &policy = dataset.policy;
        for (std::size_t t = 0; t < dataset.traces.size(); ++t) {
            const auto &trace = dataset.traces[t];
            const auto offsets =
              codec::window_offsets(static_cast<int>(trace.frames.size()), policy.length, policy.eval_stride);
            for (std::size_t slot = 0; slot < offsets.size(); ++slot) {
                if (slots.count(static_cast<int>(slot)) == 0) { continue; }
                samples.push_back(codec::make_sample(trace, offsets[slot], static_cast<int>(slot), policy.length, dataset.config));
                const auto first = static_cast<std::size_t>(offsets[slot]);
                ticks.push_back({ trace.frames[first].tick, trace.frames[first + static_cast<std::size_t>(policy.length) - 1].tick });
            }
        }
        return samples;
    }

}// namespace

StageOutcome cmd_simulate(const PipelineConfig &config)
{
    const auto layout = layout_of(config);
    const auto key = hash_json(simulate_key_json(config));
    if (up_to_date(layout.simulate(), key)) { return { true, "simulate: up to date" }; }

    auto done = read_journal(layout, key);
    if (done.empty()) {
        fs::remove_all(layout.simulate());
        fs::create_directories(layout.replays());
        write_text(layout.simulate() / "matches.jsonl", json{ { "key", key } }.dump() + "\n");
    } else {
        // Rewrite the journal without any trailing partial line.
        std::string text = json{ { "key", key } }.dump() + "\n";
        for (const auto &[id, entry] : done) { text += entry.dump() + "\n"; }
        write_text(layout.simulate() / "matches.jsonl", text);
    }

    const auto plan = plan_matches(config);
    std::ofstream journal(layout.simulate() / "matches.jsonl", std::ios::app);
    std::size_t played = 0;
    for (const auto &m : plan) {
        if (done.count(m.id) != 0) { continue; }
        codec::MatchOptions options;
        options.variant = m.variant;
        options.seed = match_seed(config.seed, m.id);
        options.repeat = m.repeat;
        options.max_ticks = config.max_ticks;
        auto record = codec::record_match(*m.p1, *m.p2, options);
        const auto path = layout.replay(m.id);
        engine::write_replay(path, record.replay);
        json entry{ { "match_id", m.id },
            { "sha256", codec::sha256_file(path) },
            { "outcome", std::string(engine::to_string(record.replay.result)) },
            { "final_tick", record.replay.final_tick },
            { "failures", json::array() } };
        for (int side = 0; side < 2; ++side) {
            if (record.agent_failures[side]) {
                spdlog::warn("{}: agent {} failed: {}", m.id, side == 0 ? m.p1->name : m.p2->name, *record.agent_failures[side]);
                entry["failures"].push_back({ { "side", side == 0 ? "p1" : "p2" }, { "error", *record.agent_failures[side] } });
            }
        }
        journal << entry.dump() << "\n" << std::flush;
        done[m.id] = entry;
        ++played;
        if (played % 50 == 0) { spdlog::info("simulate: {} matches played", played); }
    }
    journal.close();

    json matches = json::array();
    std::size_t failed = 0;
    std::vector<std::string> outputs;
    for (const auto &m : plan) {
        const auto &entry = done.at(m.id);
        matches.push_back({ { "match_id", m.id },
          { "map", std::string(1, m.variant) },
          { "p1", m.p1->name },
          { "p2", m.p2->name },
          { "repeat", m.repeat },
          { "outcome", entry["outcome"] },
          { "final_tick", entry["final_tick"] },
          { "failures", entry["failures"] } });
        if (!entry["failures"].empty()) { ++failed; }
        outputs.push_back("replays/" + m.id + ".jsonl");
    }
    write_manifest(layout.simulate(), "simulate", key, outputs, { { "matches", matches }, { "failed_matches", failed } });
    return { false, fmt::format("simulate: {} matches ({} newly played, {} with agent failures)", plan.size(), played, failed) };
}

StageOutcome cmd_encode(const PipelineConfig &config)
{
    const auto layout = layout_of(config);
    const auto simulated = require_manifest(layout.simulate(), "simulate");
    const auto key = hash_json(json{ { "simulate", manifest_hash(layout.simulate()) },
      { "split", config.split },
      { "codec", { { "height", config.model.height }, { "width", config.model.width }, { "resource_cap", config.resource_cap } } } });
    if (up_to_date(layout.encode(), key)) { return { true, "encode: up to date" }; }

    std::vector<codec::PlayTrace> traces;
    for (const auto &m : simulated.at("matches")) {
        const auto replay = engine::read_replay(layout.replay(m.at("match_id").get<std::string>()));
        for (auto &t : codec::traces_from_replay(replay, m.at("repeat").get<int>())) { traces.push_back(std::move(t)); }
    }
    const auto dataset = codec::build_dataset(std::move(traces), config.split, config.codec());
    fs::remove_all(layout.encode());
    const auto written = codec::write_dataset(layout.dataset(), dataset);
    write_manifest(layout.encode(), "encode", key, { "dataset/manifest.json" }, { { "counts", written.at("counts") } });
    return { false,
      fmt::format("encode: {} traces, samples train/val/test = {}/{}/{}",
        dataset.traces.size(),
        dataset.count(codec::Split::train),
        dataset.count(codec::Split::val),
        dataset.count(codec::Split::test)) };
}

StageOutcome cmd_train(const PipelineConfig &config, const std::string &scheme)
{
    require_scheme(scheme, true);
    const auto layout = layout_of(config);
    require_manifest(layout.encode(), "encode");
    auto model_config = config.model;
    model_config.scheme = codec::parse_scheme(scheme);
    const auto key = hash_json(json{ { "encode", manifest_hash(layout.encode()) }, { "model", model_config }, { "training", config.training } });
    const auto dir = layout.train(scheme);
    if (up_to_date(dir, key)) { return { true, "train " + scheme + ": up to date" }; }

    const auto dataset = codec::read_dataset(layout.dataset(), config.codec());
    const auto train_refs = dataset.refs(codec::Split::train);
    const auto val_refs = dataset.refs(codec::Split::val);
    const auto set_of = [&dataset](const std::vector<codec::SampleRef> &refs) {
        return autoencoder::SampleSet{ refs.size(), [&dataset, refs](std::size_t i) { return dataset.materialize(refs[i]); } };
    };
    auto result = autoencoder::train(model_config, config.training, set_of(train_refs), set_of(val_refs), [&scheme](const auto &e) {
        spdlog::info("train {}: epoch {} train {:.6f} val {:.6f}", scheme, e.epoch, e.train_loss, e.val_loss);
    });

    fs::remove_all(dir);
    fs::create_directories(dir);
    result.model.save(dir / "model.pt");
    json history = json::array();
    for (const auto &e : result.history) { history.push_back(e); }
    write_text(dir / "history.json", json{ { "scheme", scheme }, { "best_epoch", result.best_epoch }, { "history", history } }.dump(2) + "\n");
    write_manifest(dir, "train", key, { "model.pt", "history.json" }, { { "scheme", scheme }, { "best_epoch", result.best_epoch } });
    return { false, fmt::format("train {}: best epoch {} of {}", scheme, result.best_epoch, result.history.size() - 1) };
}

StageOutcome cmd_embed(const PipelineConfig &config, const std::string &scheme)
{
    require_scheme(scheme, false);
    const auto layout = layout_of(config);
    require_manifest(layout.encode(), "encode");
    json key_json{ { "encode", manifest_hash(layout.encode()) }, { "slots", config.cluster.slots }, { "scheme", scheme } };
    if (is_learned(scheme)) {
        require_manifest(layout.train(scheme), "train --scheme " + scheme);
        key_json["train"] = manifest_hash(layout.train(scheme));
    }
    const auto key = hash_json(key_json);
    const auto dir = layout.embed(scheme);
    if (up_to_date(dir, key)) { return { true, "embed " + scheme + ": up to date" }; }

    const auto dataset = codec::read_dataset(layout.dataset(), config.codec());
    std::vector<std::array<int, 2>> ticks;
    const auto samples = eval_windows(dataset, config.cluster, ticks);
    if (samples.empty()) { throw PipelineError("embed " + scheme + ": no windows in the configured slots"); }

    cluster::EmbeddingSet e;
    if (is_learned(scheme)) {
        const auto model = autoencoder::Autoencoder::load(layout.train(scheme) / "model.pt");
        const auto latents = model.encode(autoencoder::SampleSet::of(samples));
        e.data.resize(static_cast<Eigen::Index>(latents.size()), static_cast<Eigen::Index>(latents.front().size()));
        for (std::size_t r = 0; r < latents.size(); ++r) {
            for (std::size_t c = 0; c < latents[r].size(); ++c) {
                e.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = latents[r][c];
            }
        }
    } else {
        e.data.resize(static_cast<Eigen::Index>(samples.size()), codec::kHandcraftedSize);
        for (std::size_t r = 0; r < samples.size(); ++r) {
            const auto f = codec::handcrafted_features(samples[r], dataset.config);
            for (int c = 0; c < codec::kHandcraftedSize; ++c) { e.data(static_cast<Eigen::Index>(r), c) = f[static_cast<std::size_t>(c)]; }
        }
    }
    std::map<std::string, std::string> splits;
    for (std::size_t t = 0; t < dataset.traces.size(); ++t) {
        splits[dataset.traces[t].trace_id()] = std::string(codec::to_string(dataset.trace_split[t]));
    }
    for (const auto &s : samples) {
        e.meta.push_back({ s.sample_id(), s.trace_id, s.label, s.map_variant, s.side, s.slot, splits.at(s.trace_id) });
    }
    e.validate();

    fs::remove_all(dir);
    write_matrix(dir / "embeddings.bin", e.data);
    auto rows = rows_to_json(e.meta);
    for (std::size_t r = 0; r < rows.size(); ++r) { rows[r]["ticks"] = ticks[r]; }
    write_text(dir / "rows.json", rows.dump(1) + "\n");
    write_manifest(dir, "embed", key, { "embeddings.bin", "rows.json" }, { { "scheme", scheme }, { "rows", e.rows() }, { "dims", e.dims() } });
    return { false, fmt::format("embed {}: {} rows x {} dims", scheme, e.rows(), e.dims()) };
}

StageOutcome cmd_cluster(const PipelineConfig &config, const std::string &scheme)
{
    require_scheme(scheme, false);
    const auto layout = layout_of(config);
    require_manifest(layout.embed(scheme), "embed --scheme " + scheme);
    const auto key = hash_json(
      json{ { "embed", manifest_hash(layout.embed(scheme)) }, { "cluster", config.cluster }, { "pca_dims", config.pca_dims } });
    const auto dir = layout.cluster(scheme);
    if (up_to_date(dir, key)) { return { true, "cluster " + scheme + ": up to date" }; }

    cluster::EmbeddingSet e;
    e.data = read_matrix(layout.embed(scheme) / "embeddings.bin");
    e.meta = rows_from_json(json::parse(read_text(layout.embed(scheme) / "rows.json")));
    e.validate();

    // The projection is fitted on the training split only, so held-out maps
    // do not shape the space; tiny runs without training rows use all rows.
    std::vector<std::string> warnings;
    std::vector<std::size_t> fit_rows;
    for (std::size_t r = 0; r < e.meta.size(); ++r) {
        if (e.meta[r].split == "train") { fit_rows.push_back(r); }
    }
    if (fit_rows.size() < 2) {
        warnings.push_back("fewer than two training rows: PCA fitted on all rows");
        fit_rows.clear();
        for (std::size_t r = 0; r < e.meta.size(); ++r) { fit_rows.push_back(r); }
    }
    const auto pca = cluster::fit_pca(e.subset(fit_rows).data, config.pca_dims, &warnings);
    cluster::EmbeddingSet reduced{ pca.apply(e.data), e.meta };

    auto evaluation = cluster::evaluate_all(reduced, config.cluster);
    evaluation.warnings.insert(evaluation.warnings.begin(), warnings.begin(), warnings.end());
    for (const auto &w : evaluation.warnings) { spdlog::warn("cluster {}: {}", scheme, w); }

    fs::remove_all(dir);
    auto report = cluster::to_json(evaluation, reduced);
    report["scheme"] = scheme;
    write_matrix(dir / "reduced.bin", reduced.data);
    write_text(dir / "report.json", report.dump(1) + "\n");
    write_text(dir / "table.txt", cluster::render_table(evaluation, scheme, map_range(config.cluster.average_maps), map_range(config.cluster.single_maps)));
    write_manifest(dir, "cluster", key, { "reduced.bin", "report.json", "table.txt" }, { { "scheme", scheme } });
    return { false, fmt::format("cluster {}: {} groups, {} reports", scheme, evaluation.groups.size(), evaluation.reports.size()) };
}

StageOutcome cmd_report(const PipelineConfig &config)
{
    const auto layout = layout_of(config);
    json key_json{ { "tsne", { { "perplexity", config.tsne.perplexity }, { "iterations", config.tsne.iterations } } }, { "seed", config.seed } };
    for (const auto &scheme : config.schemes) {
        require_manifest(layout.cluster(scheme), "cluster --scheme " + scheme);
        key_json["cluster"][scheme] = manifest_hash(layout.cluster(scheme));
    }
    const auto key = hash_json(key_json);
    const auto dir = layout.report();
    if (up_to_date(dir, key)) { return { true, "report: up to date" }; }

    std::string summary_text;
    json summary = json::object();
    json tsne = json::object();
    for (const auto &scheme : config.schemes) {
        const auto cdir = layout.cluster(scheme);
        const auto report = json::parse(read_text(cdir / "report.json"));
        summary_text += read_text(cdir / "table.txt") + "\n";
        summary[scheme] = { { "table", report.at("table") }, { "warnings", report.at("warnings") } };

        const auto data = read_matrix(cdir / "reduced.bin");
        const auto rows = rows_from_json(json::parse(read_text(layout.embed(scheme) / "rows.json")));
        const cluster::EmbeddingSet reduced{ data, rows };
        json per_group = json::object();
        for (const auto &group : cluster::coherent_groups(reduced, config.cluster.slots)) {
            const auto n = static_cast<Eigen::Index>(group.rows.size());
            cluster::TsneConfig tc;
            tc.perplexity = cluster::fitted_perplexity(n, config.tsne.perplexity);
            tc.iterations = config.tsne.iterations;
            tc.seed = config.seed;
            if (n < 4 || tc.perplexity <= 0.0) {
                spdlog::warn("report {}: group {} has {} points, no projection", scheme, group.key.to_string(), n);
                continue;
            }
            const auto coords = cluster::tsne_project(reduced.subset(group.rows).data, tc);
            json points = json::array();
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto &m = rows[group.rows[static_cast<std::size_t>(i)]];
                points.push_back({ { "sample_id", m.sample_id },
                  { "trace_id", m.trace_id },
                  { "label", m.label },
                  { "map", std::string(1, m.map) },
                  { "side", std::string(engine::to_string(m.side)) },
                  { "slot", m.slot },
                  { "x", coords(i, 0) },
                  { "y", coords(i, 1) } });
            }
            per_group[group.key.to_string()] = { { "perplexity", tc.perplexity }, { "points", points } };
        }
        tsne[scheme] = per_group;
    }

    fs::remove_all(dir);
    write_text(dir / "summary.txt", summary_text);
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    write_text(dir / "tsne.json", tsne.dump(1) + "\n");
    write_manifest(dir, "report", key, { "summary.txt", "summary.json", "tsne.json" }, { { "schemes", config.schemes } });
    return { false, "report: " + std::to_string(config.schemes.size()) + " schemes" };
}

void run_all(const PipelineConfig &config, const std::optional<std::string> &only_scheme)
{
    auto effective = config;
    if (only_scheme) { effective.schemes = { *only_scheme }; }
    const auto log = [](const StageOutcome &o) { spdlog::info("{}", o.summary); };
    log(cmd_simulate(effective));
    log(cmd_encode(effective));
    for (const auto &scheme : effective.schemes) {
        if (is_learned(scheme)) { log(cmd_train(effective, scheme)); }
        log(cmd_embed(effective, scheme));
        log(cmd_cluster(effective, scheme));
    }
    log(cmd_report(effective));
}

}// namespace playstyle::pipeline
