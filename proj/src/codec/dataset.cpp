#include "playstyle/codec/dataset.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fstream>
#include <map>
#include <set>

namespace playstyle::codec {

std::string_view to_string(Split s) noexcept
{
    switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    }
    return "?";
}

Split parse_split(std::string_view s)
{
    for (const auto split : { Split::train, Split::val, Split::test }) {
        if (to_string(split) == s) { return split; }
    }
    throw std::invalid_argument("unknown split '" + std::string(s) + "'");
}

void to_json(nlohmann::json &j, const SplitPolicy &p)
{
    j = nlohmann::json{ { "train_maps", p.train_maps },
        { "test_maps", p.test_maps },
        { "val_repeats", p.val_repeats },
        { "min_repeats", p.min_repeats },
        { "length", p.length },
        { "train_stride", p.train_stride },
        { "eval_stride", p.eval_stride } };
}

void from_json(const nlohmann::json &j, SplitPolicy &p)
{
    const SplitPolicy d;
    p.train_maps = j.value("train_maps", d.train_maps);
    p.test_maps = j.value("test_maps", d.test_maps);
    p.val_repeats = j.value("val_repeats", d.val_repeats);
    p.min_repeats = j.value("min_repeats", d.min_repeats);
    p.length = j.value("length", d.length);
    p.train_stride = j.value("train_stride", d.train_stride);
    p.eval_stride = j.value("eval_stride", d.eval_stride);
    if (p.length <= 0 || p.train_stride <= 0 || p.eval_stride <= 0) {
        throw std::invalid_argument("split policy: length and strides must be positive");
    }
    if (p.val_repeats < 0 || p.val_repeats >= std::max(1, p.min_repeats)) {
        throw std::invalid_argument("split policy: val_repeats must be in [0, min_repeats)");
    }
}

std::vector<SampleRef> Dataset::refs(Split split) const
{
    std::vector<SampleRef> out;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(out), [&](const SampleRef &r) { return r.split == split; });
    return out;
}

SequenceSample Dataset::materialize(const SampleRef &ref) const
{
    return make_sample(traces.at(ref.trace), ref.offset, ref.slot, policy.length, config);
}

std::string Dataset::sample_id(const SampleRef &ref) const { return codec::sample_id(traces.at(ref.trace).trace_id(), ref.slot); }

std::size_t Dataset::count(Split split) const noexcept
{
    return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [&](const SampleRef &r) { return r.split == split; }));
}

namespace {

    void window_all(Dataset &d)
    {
        d.samples.clear();
        for (std::size_t i = 0; i < d.traces.size(); ++i) {
            const auto split = d.trace_split[i];
            int slot = 0;
            for (const int offset : window_offsets(static_cast<int>(d.traces[i].frames.size()), d.policy.length, d.policy.stride(split))) {
                d.samples.push_back(SampleRef{ i, offset, slot++, split });
            }
        }
    }

    std::string matchup_key(const PlayTrace &t) { return fmt::format("{}.{}.{}", t.map_variant, t.pov == engine::Player::p1 ? t.agent : t.opponent, t.pov == engine::Player::p1 ? t.opponent : t.agent); }

}// namespace

Dataset build_dataset(std::vector<PlayTrace> traces, const SplitPolicy &policy, const CodecConfig &config)
{
    std::sort(traces.begin(), traces.end(), [](const PlayTrace &a, const PlayTrace &b) { return a.trace_id() < b.trace_id(); });
    std::erase_if(traces, [&](const PlayTrace &t) {
        return policy.train_maps.find(t.map_variant) == std::string::npos && policy.test_maps.find(t.map_variant) == std::string::npos;
    });

    std::map<std::string, std::set<int>> repeats;
    for (const auto &t : traces) {
        if (policy.train_maps.find(t.map_variant) != std::string::npos) { repeats[matchup_key(t)].insert(t.repeat); }
    }
    std::vector<std::string> short_matchups;
    for (const auto &[key, reps] : repeats) {
        if (static_cast<int>(reps.size()) < policy.min_repeats) {
            short_matchups.push_back(fmt::format("{} ({} repeats)", key, reps.size()));
        }
    }
    if (!short_matchups.empty()) {
        throw CodecError(fmt::format("match-ups with fewer than {} repeats: {}", policy.min_repeats, fmt::join(short_matchups, ", ")));
    }

    Dataset d;
    d.policy = policy;
    d.config = config;
    d.trace_split.reserve(traces.size());
    for (const auto &t : traces) {
        if (policy.test_maps.find(t.map_variant) != std::string::npos) {
            d.trace_split.push_back(Split::test);
            continue;
        }
        const auto &reps = repeats.at(matchup_key(t));
        const auto rank = std::distance(reps.begin(), reps.find(t.repeat));
        const bool val = rank >= static_cast<long>(reps.size()) - policy.val_repeats;
        d.trace_split.push_back(val ? Split::val : Split::train);
    }
    d.traces = std::move(traces);
    window_all(d);
    return d;
}

nlohmann::json write_dataset(const std::filesystem::path &dir, const Dataset &dataset, std::size_t traces_per_shard)
{
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["format"] = kDatasetFormat;
    manifest["policy"] = dataset.policy;
    manifest["codec"] = { { "width", dataset.config.width },
        { "height", dataset.config.height },
        { "resource_cap", dataset.config.resource_cap },
        { "attack_range", dataset.config.attack_range() },
        { "stats_version", dataset.config.stats->version() } };
    manifest["counts"] = nlohmann::json::object();
    for (const auto split : { Split::train, Split::val, Split::test }) {
        manifest["counts"][std::string(to_string(split))] = dataset.count(split);
    }

    nlohmann::json shards = nlohmann::json::array();
    nlohmann::json traces = nlohmann::json::array();
    for (const auto split : { Split::train, Split::val, Split::test }) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dataset.traces.size(); ++i) {
            if (dataset.trace_split[i] == split) { members.push_back(i); }
        }
        for (std::size_t start = 0, shard = 0; start < members.size(); start += traces_per_shard, ++shard) {
            const auto name = fmt::format("traces_{}_{:03}.bin", to_string(split), shard);
            std::vector<const PlayTrace *> chunk;
            for (std::size_t k = start; k < std::min(members.size(), start + traces_per_shard); ++k) {
                const auto &t = dataset.traces[members[k]];
                chunk.push_back(&t);
                traces.push_back({ { "trace_id", t.trace_id() },
                  { "agent", t.agent },
                  { "opponent", t.opponent },
                  { "map", std::string(1, t.map_variant) },
                  { "pov", engine::to_string(t.pov) },
                  { "repeat", t.repeat },
                  { "frames", t.frames.size() },
                  { "split", to_string(split) },
                  { "shard", name } });
            }
            {
                std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
                if (!out) { throw CodecError("cannot write " + (dir / name).string()); }
                write_traces(out, chunk);
            }
            shards.push_back({ { "file", name }, { "split", to_string(split) }, { "traces", chunk.size() }, { "sha256", sha256_file(dir / name) } });
        }
    }
    manifest["shards"] = std::move(shards);
    manifest["traces"] = std::move(traces);

    std::ofstream out(dir / kDatasetManifest, std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) { throw CodecError("cannot write " + (dir / kDatasetManifest).string()); }
    return manifest;
}

Dataset read_dataset(const std::filesystem::path &dir, const CodecConfig &config)
{
    std::ifstream in(dir / kDatasetManifest);
    if (!in) { throw CodecError("no dataset manifest in " + dir.string()); }
    const auto manifest = nlohmann::json::parse(in);
    if (manifest.value("format", "") != kDatasetFormat) { throw CodecError("unsupported dataset format in " + dir.string()); }
    if (manifest.at("codec").at("stats_version").get<std::string>() != config.stats->version()) {
        throw CodecError("dataset was encoded with a different unit stats table");
    }

    Dataset d;
    d.policy = manifest.at("policy").get<SplitPolicy>();
    d.config = config;
    for (const auto &shard : manifest.at("shards")) {
        const auto path = dir / shard.at("file").get<std::string>();
        if (sha256_file(path) != shard.at("sha256").get<std::string>()) { throw CodecError("hash mismatch for " + path.string()); }
        std::ifstream bin(path, std::ios::binary);
        auto traces = read_traces(bin);
        const auto split = parse_split(shard.at("split").get<std::string>());
        for (auto &t : traces) {
            d.traces.push_back(std::move(t));
            d.trace_split.push_back(split);
        }
    }
    window_all(d);
    return d;
}

}// namespace playstyle::codec
