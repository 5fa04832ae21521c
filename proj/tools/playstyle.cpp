#include "playstyle/explorer/service.hpp"
#include "playstyle/pipeline/stages.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>
#include <optional>
#include <string>

namespace {

namespace ps = playstyle::pipeline;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<std::string> out;
};

ps::PipelineConfig load(const Options &o)
{
    auto config = ps::load_config(o.config_path);
    if (o.seed) { ps::apply_seed(config, *o.seed); }
    if (o.out) { config.out = *o.out; }
    if (o.scheme) {
        if (!ps::is_scheme(*o.scheme)) { throw ps::PipelineError("unknown scheme \"" + *o.scheme + "\""); }
        config.schemes = { *o.scheme };
    }
    return config;
}

void report(const ps::StageOutcome &outcome) { std::cout << outcome.summary << "\n"; }

// Runs `stage` once per selected scheme.
template<typename Stage> void per_scheme(const ps::PipelineConfig &config, bool learned_only, Stage stage)
{
    for (const auto &scheme : config.schemes) {
        if (learned_only && !ps::is_learned(scheme)) { continue; }
        report(stage(config, scheme));
    }
}

void add_pipeline_options(CLI::App *cmd, Options &o, bool with_scheme)
{
    cmd->add_option("--config", o.config_path, "Pipeline configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Global seed overriding the configuration");
    cmd->add_option("--out", o.out, "Output directory overriding the configuration");
    if (with_scheme) {
        cmd->add_option("--scheme", o.scheme, "states|actions|joint|handcrafted (default: every configured scheme)");
    }
}

}// namespace

int main(int argc, char **argv)
{
    CLI::App app{ "Play-style identification pipeline" };
    app.require_subcommand(1);
    spdlog::set_pattern("[%l] %v");

    Options o;
    std::string stage;
    const auto pipeline_cmd = [&](const char *name, const char *help, bool with_scheme) {
        auto *cmd = app.add_subcommand(name, help);
        add_pipeline_options(cmd, o, with_scheme);
        cmd->callback([&stage, name] { stage = name; });
    };
    pipeline_cmd("simulate", "Play every match-up and store the replays", false);
    pipeline_cmd("encode", "Rebuild traces, split and window them", false);
    pipeline_cmd("train", "Train the autoencoder of each learned scheme", true);
    pipeline_cmd("embed", "Embed the analysed windows", true);
    pipeline_cmd("cluster", "PCA, k-means and metrics per group", true);
    pipeline_cmd("report", "Summary tables and t-SNE coordinates", true);
    pipeline_cmd("run", "Every stage in order", true);

    std::string artifacts;
    std::optional<std::string> ui_dir;
    playstyle::explorer::ServeOptions serve_options;
    auto *serve = app.add_subcommand("serve", "Serve the explorer API over a pipeline output directory");
    serve->add_option("--artifacts", artifacts, "Pipeline output directory")->required()->check(CLI::ExistingDirectory);
    serve->add_option("--port", serve_options.port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--host", serve_options.host, "Bind address");
    serve->add_option("--ui", ui_dir, "Directory of compiled UI assets served at /")->check(CLI::ExistingDirectory);
    serve->callback([&stage] { stage = "serve"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (stage == "serve") {
            if (ui_dir) { serve_options.ui_dir = *ui_dir; }
            const playstyle::explorer::ArtifactStore store(artifacts);
            playstyle::explorer::serve(store, serve_options);
            return 0;
        }
        const auto config = load(o);
        if (stage == "simulate") {
            report(ps::cmd_simulate(config));
        } else if (stage == "encode") {
            report(ps::cmd_encode(config));
        } else if (stage == "train") {
            if (o.scheme && !ps::is_learned(*o.scheme)) { throw ps::PipelineError("scheme \"" + *o.scheme + "\" is not trained"); }
            per_scheme(config, true, ps::cmd_train);
        } else if (stage == "embed") {
            per_scheme(config, false, ps::cmd_embed);
        } else if (stage == "cluster") {
            per_scheme(config, false, ps::cmd_cluster);
        } else if (stage == "report") {
            report(ps::cmd_report(config));
        } else if (stage == "run") {
            ps::run_all(config);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
