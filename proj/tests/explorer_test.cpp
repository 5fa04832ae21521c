#include "pipeline_support.hpp"

#include "playstyle/codec/trace.hpp"
#include "playstyle/engine/replay.hpp"
#include "playstyle/engine/serialize.hpp"
#include "playstyle/explorer/service.hpp"
#include "playstyle/pipeline/artifacts.hpp"
#include "playstyle/pipeline/stages.hpp"

#include <doctest.h>
#include <httplib.h>

#include <thread>

namespace fs = std::filesystem;
namespace ex = playstyle::explorer;
namespace pl = playstyle::pipeline;
using nlohmann::json;

namespace {

// One tiny pipeline run shared by every test case.
const fs::path &artifacts()
{
    static const fs::path root = [] {
        const auto dir = testing::scratch_dir("explorer");
        pl::run_all(testing::tiny_config(dir));
        return dir;
    }();
    return root;
}

const ex::ArtifactStore &store()
{
    static const ex::ArtifactStore s(artifacts());
    return s;
}

json simulated_matches() { return pl::require_manifest(pl::Layout{ artifacts() }.simulate(), "simulate").at("matches"); }

json find_match(const std::string &p1, const std::string &p2, const std::string &outcome = "")
{
    for (const auto &m : simulated_matches()) {
        if (m.at("p1") == p1 && m.at("p2") == p2 && (outcome.empty() || m.at("outcome") == outcome)) { return m; }
    }
    return {};
}

}// namespace

TEST_CASE("projection returns every point of a group with label and cluster colour keys")
{
    const auto groups = store().groups(std::string("actions"));
    REQUIRE(groups.status == 200);
    const auto report = json::parse(pl::read_text(pl::Layout{ artifacts() }.cluster("actions") / "report.json"));

    for (const auto &g : report.at("groups")) {
        const auto key = g.at("key").get<std::string>();
        const auto response = store().projection(std::string("actions"), key, std::string("3"));
        REQUIRE(response.status == 200);
        const auto &records = response.body.at("records");
        CHECK(records.size() == g.at("size").get<std::size_t>());
        std::set<std::string> ids;
        for (const auto &r : records) {
            ids.insert(r.at("sample_id").get<std::string>());
            CHECK(std::isfinite(r.at("x").get<double>()));
            CHECK(std::isfinite(r.at("y").get<double>()));
            CHECK(r.at("cluster").is_number_integer());
            CHECK(r.at("clusters").contains("2"));
            CHECK(r.at("clusters").at("3") == r.at("cluster"));
            CHECK(key == r.at("map").get<std::string>() + "," + r.at("side").get<std::string>() + "," + std::to_string(r.at("slot").get<int>()));
            CHECK_FALSE(r.at("label").get<std::string>().empty());
            CHECK(r.at("trace_id").get<std::string>().ends_with(r.at("side").get<std::string>()));
            CHECK(r.at("window_ticks").size() == 2);
        }
        CHECK(ids.size() == records.size());
    }
}

TEST_CASE("projection errors list what is available")
{
    const auto unknown = store().projection(std::string("actions"), std::string("Z,p1,0"), std::nullopt);
    CHECK(unknown.status == 404);
    CHECK(unknown.body.at("groups").size() == 4);
    CHECK(unknown.body.at("groups")[0] == "A,p1,0");

    const auto bad_k = store().projection(std::string("actions"), std::string("A,p1,0"), std::string("13"));
    CHECK(bad_k.status == 400);
    CHECK(bad_k.body.at("ks") == json::array({ 2, 3 }));
    CHECK(store().projection(std::string("actions"), std::string("A,p1,0"), std::string("2x")).status == 400);

    CHECK(store().projection(std::string("pixels"), std::string("A,p1,0"), std::nullopt).status == 400);
    CHECK(store().projection(std::string("joint"), std::string("A,p1,0"), std::nullopt).status == 409);
}

TEST_CASE("metrics follow the cluster reports")
{
    const auto actions = store().metrics(std::string("actions"));
    REQUIRE(actions.status == 200);
    CHECK(actions.body.at("rows").size() == 2);
    CHECK(actions.body.at("rows")[0].at("k") == 2);
    CHECK(actions.body.at("rows")[0].at("average").contains("ami"));

    const auto handcrafted = store().metrics(std::string("handcrafted"));
    const auto summary = json::parse(pl::read_text(pl::Layout{ artifacts() }.report() / "summary.json"));
    CHECK(handcrafted.body.at("rows") == summary.at("handcrafted").at("table"));

    CHECK(store().metrics(std::string("pixels")).status == 400);
    CHECK(store().metrics(std::nullopt).status == 400);
    const auto missing = store().metrics(std::string("states"));
    CHECK(missing.status == 409);
    CHECK(missing.body.at("error") == "run cmd_cluster first");

    // A store over a run that has not been clustered yet.
    const auto dir = testing::scratch_dir("explorer-empty");
    auto config = testing::tiny_config(dir);
    (void)pl::cmd_simulate(config);
    const ex::ArtifactStore early(dir);
    CHECK(early.metrics(std::string("actions")).status == 409);
    CHECK(early.schemes().body.at("schemes").empty());
    fs::remove_all(dir);
}

TEST_CASE("replay frames cover every tick and agree with the recorded trace")
{
    const auto m = find_match("WorkerRush", "PassiveAI", "p1_wins");
    REQUIRE_FALSE(m.is_null());
    const auto match_id = m.at("match_id").get<std::string>();
    const auto response = store().replay(match_id + ".p1");
    REQUIRE(response.status == 200);
    const auto &body = response.body;
    const auto &frames = body.at("frames");
    CHECK(body.at("pov") == "p1");
    CHECK(body.at("agent") == "WorkerRush");
    CHECK(frames.size() == m.at("final_tick").get<std::size_t>());
    CHECK(body.at("initial").at("tick") == 0);
    for (std::size_t i = 0; i < frames.size(); ++i) { CHECK(frames[i].at("tick") == static_cast<int>(i) + 1); }

    // The losing side has no units left in the last frame.
    int enemy_units = 0;
    for (const auto &u : frames.back().at("units")) { enemy_units += u.at("owner") == "p2" ? 1 : 0; }
    CHECK(enemy_units == 0);

    // The frames where the POV player acted carry exactly the trace's commands.
    const auto replay = playstyle::engine::read_replay(pl::Layout{ artifacts() }.replay(match_id));
    const auto traces = playstyle::codec::traces_from_replay(replay, 0);
    std::vector<std::pair<int, json>> from_replay;
    for (const auto &f : frames) {
        if (f.at("pov_acted").get<bool>()) { from_replay.emplace_back(f.at("tick").get<int>() - 1, f.at("commands").at("p1")); }
    }
    std::vector<std::pair<int, json>> from_trace;
    for (const auto &f : traces[0].frames) {
        json cmds = json::array();
        for (const auto &c : f.commands) { cmds.push_back(playstyle::engine::to_json(c)); }
        from_trace.emplace_back(f.tick, cmds);
    }
    CHECK(from_replay == from_trace);
}

TEST_CASE("a passive self-play replay is static")
{
    const auto m = find_match("PassiveAI", "PassiveAI");
    REQUIRE_FALSE(m.is_null());
    const auto response = store().replay(m.at("match_id").get<std::string>() + ".p2");
    REQUIRE(response.status == 200);
    const auto &frames = response.body.at("frames");
    REQUIRE_FALSE(frames.empty());
    CHECK(response.body.at("pov") == "p2");
    for (const auto &f : frames) {
        CHECK(f.at("units") == response.body.at("initial").at("units"));
        CHECK_FALSE(f.at("pov_acted").get<bool>());
    }
}

TEST_CASE("unknown traces and endpoints give 404")
{
    CHECK(store().replay("A.Nobody.PassiveAI.00.p1").status == 404);
    CHECK(store().replay("../../etc/passwd.p1").status == 404);
    CHECK(store().replay(find_match("RandomAI", "WorkerRush").at("match_id").get<std::string>() + ".p3").status == 404);
    CHECK(store().handle({ "/api/nothing", {} }).status == 404);
    CHECK(store().handle({ "/api/schemes", {} }).body.at("schemes") == json::array({ "actions", "handcrafted" }));
}

TEST_CASE("the HTTP server exposes the handlers with CORS headers")
{
    const auto ui = testing::scratch_dir("explorer-ui");
    pl::write_text(ui / "index.html", "<html>explorer</html>");
    ex::ServeOptions options;
    options.port = 0;
    options.ui_dir = ui;
    ex::HttpServer server(store(), options);
    const int port = server.bind();
    std::thread thread([&server] { server.run(); });

    httplib::Client client("127.0.0.1", port);
    const auto metrics = client.Get("/api/metrics?scheme=actions");
    REQUIRE(metrics);
    CHECK(metrics->status == 200);
    CHECK(metrics->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(json::parse(metrics->body) == store().metrics(std::string("actions")).body);

    const auto projection = client.Get("/api/projection?scheme=handcrafted&group=L%2Cp2%2C0&k=2");
    REQUIRE(projection);
    CHECK(projection->status == 200);
    CHECK(json::parse(projection->body).at("group") == "L,p2,0");

    const auto trace = find_match("WorkerRush", "RandomAI").at("match_id").get<std::string>() + ".p2";
    const auto replay = client.Get("/api/trace/" + trace + "/replay");
    REQUIRE(replay);
    CHECK(replay->status == 200);
    CHECK(json::parse(replay->body).at("agent") == "RandomAI");

    const auto missing = client.Get("/api/projection?scheme=actions&group=Q,p1,0");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    const auto preflight = client.Options("/api/metrics");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);

    const auto index = client.Get("/index.html");
    REQUIRE(index);
    CHECK(index->body == "<html>explorer</html>");

    server.stop();
    thread.join();
    fs::remove_all(ui);
}
