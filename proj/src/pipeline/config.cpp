#include "playstyle/pipeline/config.hpp"

#include "playstyle/agents/roster.hpp"
#include "playstyle/engine/maps.hpp"

#include <algorithm>
#include <fstream>

namespace playstyle::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_scheme(const std::string &s)
{
    const auto &all = all_schemes();
    return std::find(all.begin(), all.end(), s) != all.end();
}

bool is_learned(const std::string &scheme) { return is_scheme(scheme) && scheme != "handcrafted"; }

json PipelineConfig::to_json() const
{
    json model_json = model;
    model_json.erase("scheme");
    return json{ { "roster", roster_json },
        { "maps", maps },
        { "repeats", repeats },
        { "max_ticks", max_ticks },
        { "seed", seed },
        { "schemes", schemes },
        { "split", split },
        { "resource_cap", resource_cap },
        { "model", model_json },
        { "training", training },
        { "cluster", cluster },
        { "pca_dims", pca_dims },
        { "tsne", { { "perplexity", tsne.perplexity }, { "iterations", tsne.iterations } } } };
}

codec::CodecConfig PipelineConfig::codec() const
{
    codec::CodecConfig c;
    c.height = model.height;
    c.width = model.width;
    c.resource_cap = resource_cap;
    return c;
}

namespace {

    template<typename T> T section(const json &j, const char *key)
    {
        try {
            return j.value(key, json::object()).get<T>();
        } catch (const std::exception &e) {
            throw PipelineError(std::string("config: invalid \"") + key + "\": " + e.what());
        }
    }

}// namespace

PipelineConfig parse_config(const json &j, const fs::path &base_dir)
{
    if (!j.is_object()) { throw PipelineError("config: expected a JSON object"); }
    PipelineConfig c;
    try {
        if (!j.contains("roster")) {
            c.roster = agents::default_roster();
        } else if (j["roster"].is_string()) {
            fs::path path = j["roster"].get<std::string>();
            if (path.is_relative()) { path = base_dir / path; }
            c.roster = agents::load_roster(path);
        } else {
            c.roster = agents::make_roster(j["roster"]);
        }
    } catch (const PipelineError &) {
        throw;
    } catch (const std::exception &e) {
        throw PipelineError(std::string("config: roster: ") + e.what());
    }
    c.roster_json = agents::roster_to_json(c.roster);

    c.maps = j.value("maps", c.maps);
    c.repeats = j.value("repeats", c.repeats);
    c.max_ticks = j.value("max_ticks", c.max_ticks);
    c.seed = j.value("seed", c.seed);
    if (j.contains("out")) { c.out = j["out"].get<std::string>(); }
    c.schemes = j.value("schemes", c.schemes);
    c.resource_cap = j.value("resource_cap", c.resource_cap);
    c.pca_dims = j.value("pca_dims", c.pca_dims);
    if (j.contains("tsne")) {
        c.tsne.perplexity = j["tsne"].value("perplexity", c.tsne.perplexity);
        c.tsne.iterations = j["tsne"].value("iterations", c.tsne.iterations);
    }
    c.split = section<codec::SplitPolicy>(j, "split");
    c.model = section<autoencoder::ModelConfig>(j, "model");
    c.training = section<autoencoder::TrainConfig>(j, "training");
    c.cluster = section<cluster::EvaluationConfig>(j, "cluster");

    if (c.maps.empty()) { throw PipelineError("config: \"maps\" is empty"); }
    for (char v : c.maps) {
        if (!engine::is_map_variant(v)) {
            throw PipelineError(std::string("config: unknown map variant '") + v + "'");
        }
    }
    for (char v : c.split.train_maps + c.split.test_maps) {
        if (c.maps.find(v) == std::string::npos) {
            throw PipelineError(std::string("config: split map '") + v + "' is not simulated");
        }
    }
    if (c.repeats <= 0 || c.max_ticks <= 0) { throw PipelineError("config: repeats and max_ticks must be positive"); }
    if (c.roster.size() < 2) { throw PipelineError("config: the roster needs at least two agents"); }
    for (const auto &s : c.schemes) {
        if (!is_scheme(s)) { throw PipelineError("config: unknown scheme \"" + s + "\""); }
    }
    if (c.pca_dims <= 0 || c.tsne.perplexity <= 0 || c.tsne.iterations <= 0) {
        throw PipelineError("config: pca_dims and t-SNE settings must be positive");
    }
    if (c.model.seq_len != c.split.length) {
        throw PipelineError("config: model.seq_len must equal split.length");
    }
    apply_seed(c, c.seed);
    return c;
}

PipelineConfig load_config(const fs::path &path)
{
    std::ifstream in(path);
    if (!in) { throw PipelineError("config: cannot open " + path.string()); }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw PipelineError("config: " + path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

void apply_seed(PipelineConfig &config, std::uint64_t seed)
{
    config.seed = seed;
    config.training.seed = seed;
    config.cluster.seed = seed;
}

}// namespace playstyle::pipeline
