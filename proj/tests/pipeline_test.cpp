#include "pipeline_support.hpp"

#include "playstyle/codec/dataset.hpp"
#include "playstyle/pipeline/artifacts.hpp"
#include "playstyle/pipeline/stages.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

namespace fs = std::filesystem;
namespace pl = playstyle::pipeline;
using nlohmann::json;

namespace {

json tiny_json()
{
    std::ifstream in(fs::path(PLAYSTYLE_CONFIG_DIR) / "pipeline_tiny.json");
    return json::parse(in);
}

std::string error_of(const json &j)
{
    try {
        (void)pl::parse_config(j, PLAYSTYLE_CONFIG_DIR);
    } catch (const pl::PipelineError &e) {
        return e.what();
    }
    return {};
}

std::vector<std::string> journal_ids(const fs::path &root)
{
    std::ifstream in(pl::Layout{ root }.simulate() / "matches.jsonl");
    std::string line;
    std::getline(in, line);// key header
    std::vector<std::string> ids;
    while (std::getline(in, line)) { ids.push_back(json::parse(line).at("match_id").get<std::string>()); }
    return ids;
}

}// namespace

TEST_CASE("config validation names the offending setting")
{
    auto j = tiny_json();
    CHECK(error_of(j).empty());

    j["schemes"] = { "actions", "pixels" };
    CHECK(error_of(j).find("pixels") != std::string::npos);

    j = tiny_json();
    j["split"]["test_maps"] = "K";
    CHECK(error_of(j).find("'K' is not simulated") != std::string::npos);

    j = tiny_json();
    j["maps"] = "AZ";
    CHECK(error_of(j).find("'Z'") != std::string::npos);

    j = tiny_json();
    j["roster"] = "no_such_roster.json";
    CHECK(error_of(j).find("roster") != std::string::npos);

    j = tiny_json();
    j["model"]["seq_len"] = 16;
    CHECK(error_of(j).find("seq_len") != std::string::npos);
}

TEST_CASE("the global seed reaches every stochastic stage")
{
    auto config = pl::parse_config(tiny_json(), PLAYSTYLE_CONFIG_DIR);
    pl::apply_seed(config, 99);
    CHECK(config.seed == 99);
    CHECK(config.training.seed == 99);
    CHECK(config.cluster.seed == 99);

    CHECK(pl::match_seed(1, "A.x.y.00") == pl::match_seed(1, "A.x.y.00"));
    CHECK(pl::match_seed(1, "A.x.y.00") != pl::match_seed(2, "A.x.y.00"));
    CHECK(pl::match_seed(1, "A.x.y.00") != pl::match_seed(1, "A.x.y.01"));
}

TEST_CASE("simulate plays ordered match-ups including self-play and resumes without duplicates")
{
    const auto root = testing::scratch_dir("simulate");
    auto config = testing::tiny_config(root);
    config.maps = "A";
    config.split.test_maps = "";
    config.repeats = 2;
    config.max_ticks = 120;

    const auto first = pl::cmd_simulate(config);
    CHECK_FALSE(first.skipped);
    const auto manifest = pl::require_manifest(pl::Layout{ root }.simulate(), "simulate");
    const auto &matches = manifest.at("matches");
    CHECK(matches.size() == 3U * 3U * 2U);
    std::set<std::string> ids;
    int self_play = 0;
    for (const auto &m : matches) {
        ids.insert(m.at("match_id").get<std::string>());
        self_play += m.at("p1") == m.at("p2") ? 1 : 0;
    }
    CHECK(ids.size() == matches.size());
    CHECK(self_play == 3 * 2);
    CHECK(pl::cmd_simulate(config).skipped);

    // Simulate an interruption: drop the manifest, two replays and a journal
    // line, and leave a half-written line behind.
    const pl::Layout layout{ root };
    const auto kept = pl::read_text(layout.replay(*ids.begin()));
    fs::remove(layout.simulate() / pl::kManifest);
    fs::remove(layout.replay(*ids.begin()));
    fs::remove(layout.replay(*ids.rbegin()));
    auto journal = pl::read_text(layout.simulate() / "matches.jsonl");
    const auto last_line = journal.rfind('\n', journal.size() - 2) + 1;
    const std::set<std::string> lost{ *ids.begin(), *ids.rbegin(), json::parse(journal.substr(last_line)).at("match_id").get<std::string>() };
    journal.erase(last_line);
    journal += "{\"match_id\":\"A.Pass";
    pl::write_text(layout.simulate() / "matches.jsonl", journal);

    const auto resumed = pl::cmd_simulate(config);
    CHECK(resumed.summary.find("18 matches (" + std::to_string(lost.size()) + " newly played") != std::string::npos);
    const auto journal_after = journal_ids(root);
    CHECK(journal_after.size() == 18);
    CHECK(std::set<std::string>(journal_after.begin(), journal_after.end()).size() == 18);
    CHECK(pl::read_text(layout.replay(*ids.begin())) == kept);
    CHECK(pl::require_manifest(layout.simulate(), "simulate").at("matches") == matches);

    // A different seed invalidates the journal.
    pl::apply_seed(config, config.seed + 1);
    CHECK(pl::cmd_simulate(config).summary.find("18 newly played") != std::string::npos);
    fs::remove_all(root);
}

TEST_CASE("stages refuse to run without their inputs")
{
    const auto root = testing::scratch_dir("missing");
    const auto config = testing::tiny_config(root);
    const auto message = [](auto &&f) {
        try {
            f();
        } catch (const pl::PipelineError &e) {
            return std::string(e.what());
        }
        return std::string{};
    };
    CHECK(message([&] { (void)pl::cmd_encode(config); }).find("simulate/manifest.json") != std::string::npos);
    CHECK(message([&] { (void)pl::cmd_train(config, "actions"); }).find("encode/manifest.json") != std::string::npos);
    CHECK(message([&] { (void)pl::cmd_cluster(config, "actions"); }).find("embed/actions/manifest.json") != std::string::npos);
    CHECK(message([&] { (void)pl::cmd_report(config); }).find("cluster/actions/manifest.json") != std::string::npos);
    CHECK(message([&] { (void)pl::cmd_train(config, "handcrafted"); }).find("learned scheme") != std::string::npos);
    fs::remove_all(root);
}

TEST_CASE("a full tiny run is idempotent, deterministic and free of absolute paths")
{
    const auto a = testing::scratch_dir("run-a");
    const auto b = testing::scratch_dir("run-b");
    const auto config_a = testing::tiny_config(a);
    const auto config_b = testing::tiny_config(b);
    pl::run_all(config_a);
    pl::run_all(config_b);

    const pl::Layout la{ a };
    const pl::Layout lb{ b };
    for (const char *name : { "summary.txt", "summary.json", "tsne.json", "manifest.json" }) {
        CAPTURE(name);
        CHECK(pl::read_text(la.report() / name) == pl::read_text(lb.report() / name));
    }
    CHECK(pl::read_text(la.cluster("actions") / "report.json") == pl::read_text(lb.cluster("actions") / "report.json"));
    CHECK(pl::read_text(la.embed("actions") / "embeddings.bin") == pl::read_text(lb.embed("actions") / "embeddings.bin"));
    for (const auto &entry : fs::recursive_directory_iterator(a)) {
        if (entry.path().extension() == ".json" || entry.path().extension() == ".txt") {
            CAPTURE(entry.path());
            CHECK(pl::read_text(entry.path()).find(a.string()) == std::string::npos);
        }
    }

    // Every stage is skipped on a rerun.
    CHECK(pl::cmd_simulate(config_a).skipped);
    CHECK(pl::cmd_encode(config_a).skipped);
    CHECK(pl::cmd_train(config_a, "actions").skipped);
    CHECK(pl::cmd_embed(config_a, "handcrafted").skipped);
    CHECK(pl::cmd_cluster(config_a, "handcrafted").skipped);
    CHECK(pl::cmd_report(config_a).skipped);

    // Tampering with an output re-runs the stage and restores it.
    const auto table = pl::read_text(la.cluster("handcrafted") / "table.txt");
    pl::write_text(la.cluster("handcrafted") / "table.txt", "edited\n");
    CHECK_FALSE(pl::cmd_cluster(config_a, "handcrafted").skipped);
    CHECK(pl::read_text(la.cluster("handcrafted") / "table.txt") == table);

    SUBCASE("stage outputs have the documented shape")
    {
        const auto history = json::parse(pl::read_text(la.train("actions") / "history.json"));
        CHECK(history.at("history").size() == static_cast<std::size_t>(config_a.training.epochs) + 1);

        const auto rows = json::parse(pl::read_text(la.embed("handcrafted") / "rows.json"));
        const auto data = pl::read_matrix(la.embed("handcrafted") / "embeddings.bin");
        CHECK(static_cast<std::size_t>(data.rows()) == rows.size());
        CHECK(data.cols() == playstyle::codec::kHandcraftedSize);
        for (const auto &r : rows) {
            CHECK(r.at("slot") == 0);
            CHECK(r.at("ticks")[0] <= r.at("ticks")[1]);
        }
        const auto latent = pl::read_matrix(la.embed("actions") / "embeddings.bin");
        CHECK(latent.cols() == 2 * config_a.model.hidden);

        const auto report = json::parse(pl::read_text(la.cluster("actions") / "report.json"));
        CHECK(report.at("reports").size() == report.at("groups").size() * config_a.cluster.ks.size());
        CHECK(pl::read_text(la.report() / "summary.txt").find("handcrafted") != std::string::npos);
        const auto tsne = json::parse(pl::read_text(la.report() / "tsne.json"));
        CHECK(tsne.contains("actions"));
        CHECK(tsne.contains("handcrafted"));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("matrix files round-trip exactly and reject corruption")
{
    const auto dir = testing::scratch_dir("matrix");
    Eigen::MatrixXd m(3, 2);
    m << 1.0, -2.5, 1e-300, 0.1, 7.0, -0.0;
    pl::write_matrix(dir / "m.bin", m);
    CHECK(pl::read_matrix(dir / "m.bin") == m);
    auto bytes = pl::read_text(dir / "m.bin");
    pl::write_text(dir / "m.bin", bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS((void)pl::read_matrix(dir / "m.bin"), pl::PipelineError);
    fs::remove_all(dir);
}
