#include "playstyle/explorer/service.hpp"

#include "playstyle/cluster/evaluate.hpp"
#include "playstyle/engine/replay.hpp"
#include "playstyle/engine/serialize.hpp"
#include "playstyle/pipeline/artifacts.hpp"
#include "playstyle/pipeline/config.hpp"

#include <fstream>
#include <set>

namespace playstyle::explorer {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

    struct SchemeData {
        json table;
        json warnings;
        std::vector<std::string> group_order;
        std::map<std::string, std::set<int>> ks;// group -> ks with a report
        std::map<std::string, std::map<std::string, std::map<int, int>>> clusters;// group -> sample -> k -> cluster
        std::map<std::string, json> points;// group -> t-SNE points
        std::map<std::string, json> rows;// sample -> embed row
    };

    std::optional<json> load_json(const fs::path &path)
    {
        std::ifstream in(path);
        if (!in) { return std::nullopt; }
        return json::parse(in);
    }

    ApiResponse error(int status, const std::string &message, json extra = json::object())
    {
        extra["error"] = message;
        return { status, std::move(extra) };
    }

    json unit_dto(const engine::Unit &u)
    {
        return { { "id", u.id },
            { "owner", std::string(engine::to_string(u.owner)) },
            { "kind", std::string(engine::to_string(u.kind)) },
            { "x", u.pos.x },
            { "y", u.pos.y },
            { "hp", u.hp },
            { "carried", u.carried } };
    }

    json units_dto(const engine::GameState &s)
    {
        json out = json::array();
        for (const auto &u : s.units) { out.push_back(unit_dto(u)); }
        return out;
    }

    json commands_dto(const std::vector<engine::UnitCommand> &cmds)
    {
        json out = json::array();
        for (const auto &c : cmds) { out.push_back(engine::to_json(c)); }
        return out;
    }

}// namespace

struct ArtifactStore::Data {
    fs::path root;
    pipeline::Layout layout;
    std::map<std::string, SchemeData> schemes;
    std::set<std::string> matches;
};

ArtifactStore::ArtifactStore(fs::path root) : data_(std::make_unique<Data>())
{
    data_->root = std::move(root);
    data_->layout = pipeline::Layout{ data_->root };
    const auto &layout = data_->layout;

    if (const auto sim = pipeline::read_manifest(layout.simulate()); sim && sim->contains("matches")) {
        for (const auto &m : (*sim)["matches"]) { data_->matches.insert(m.at("match_id").get<std::string>()); }
    }
    const auto tsne = load_json(layout.report() / "tsne.json");
    for (const auto &scheme : pipeline::all_schemes()) {
        const auto report = load_json(layout.cluster(scheme) / "report.json");
        if (!report) { continue; }
        SchemeData d;
        d.table = report->at("table");
        d.warnings = report->value("warnings", json::array());
        for (const auto &g : report->at("groups")) { d.group_order.push_back(g.at("key").get<std::string>()); }
        for (const auto &r : report->at("reports")) {
            const auto group = r.at("group").get<std::string>();
            const int k = r.at("k").get<int>();
            d.ks[group].insert(k);
            for (const auto &s : r.at("samples")) {
                d.clusters[group][s.at("sample_id").get<std::string>()][k] = s.at("cluster").get<int>();
            }
        }
        if (tsne && tsne->contains(scheme)) {
            for (const auto &[group, g] : (*tsne)[scheme].items()) { d.points[group] = g.at("points"); }
        }
        if (const auto rows = load_json(layout.embed(scheme) / "rows.json")) {
            for (const auto &row : *rows) { d.rows[row.at("sample_id").get<std::string>()] = row; }
        }
        data_->schemes.emplace(scheme, std::move(d));
    }
}

ArtifactStore::~ArtifactStore() = default;
ArtifactStore::ArtifactStore(ArtifactStore &&) noexcept = default;
ArtifactStore &ArtifactStore::operator=(ArtifactStore &&) noexcept = default;

const fs::path &ArtifactStore::root() const noexcept { return data_->root; }

ApiResponse ArtifactStore::schemes() const
{
    json names = json::array();
    for (const auto &[name, d] : data_->schemes) { names.push_back(name); }
    return { 200, { { "schemes", names } } };
}

namespace {

    // 400 for unknown scheme names, 409 when the scheme has not been clustered.
    template<typename Map> std::optional<ApiResponse> check_scheme(const Map &schemes, const std::optional<std::string> &scheme)
    {
        if (!scheme || !pipeline::is_scheme(*scheme)) {
            return error(400, "unknown scheme \"" + scheme.value_or("") + "\"", { { "schemes", pipeline::all_schemes() } });
        }
        if (schemes.count(*scheme) == 0) { return error(409, "run cmd_cluster first"); }
        return std::nullopt;
    }

}// namespace

ApiResponse ArtifactStore::groups(const std::optional<std::string> &scheme) const
{
    if (auto e = check_scheme(data_->schemes, scheme)) { return *e; }
    const auto &d = data_->schemes.at(*scheme);
    json out = json::array();
    for (const auto &g : d.group_order) {
        const auto ks = d.ks.count(g) ? d.ks.at(g) : std::set<int>{};
        const auto points = d.points.count(g) ? d.points.at(g).size() : 0;
        out.push_back({ { "group", g }, { "ks", ks }, { "points", points } });
    }
    return { 200, { { "scheme", *scheme }, { "groups", out } } };
}

ApiResponse ArtifactStore::projection(const std::optional<std::string> &scheme,
  const std::optional<std::string> &group,
  const std::optional<std::string> &k) const
{
    if (auto e = check_scheme(data_->schemes, scheme)) { return *e; }
    const auto &d = data_->schemes.at(*scheme);
    if (!group || d.points.count(*group) == 0) {
        json available = json::array();
        for (const auto &[g, p] : d.points) { available.push_back(g); }
        return error(404, "unknown group \"" + group.value_or("") + "\"", { { "groups", available } });
    }
    const auto ks = d.ks.count(*group) ? d.ks.at(*group) : std::set<int>{};
    std::optional<int> chosen;
    if (k) {
        try {
            std::size_t used = 0;
            chosen = std::stoi(*k, &used);
            if (used != k->size()) { chosen.reset(); }
        } catch (const std::exception &) {
            chosen.reset();
        }
        if (!chosen || ks.count(*chosen) == 0) {
            return error(400, "k \"" + *k + "\" has no report for group " + *group, { { "ks", ks } });
        }
    }

    const auto &clusters = d.clusters.count(*group) ? d.clusters.at(*group) : std::map<std::string, std::map<int, int>>{};
    json records = json::array();
    for (const auto &p : d.points.at(*group)) {
        const auto id = p.at("sample_id").get<std::string>();
        json rec = p;
        json per_k = json::object();
        if (const auto it = clusters.find(id); it != clusters.end()) {
            for (const auto &[kk, c] : it->second) { per_k[std::to_string(kk)] = c; }
            if (chosen) { rec["cluster"] = it->second.count(*chosen) ? json(it->second.at(*chosen)) : json(); }
        }
        rec["clusters"] = per_k;
        if (const auto row = d.rows.find(id); row != d.rows.end() && row->second.contains("ticks")) {
            rec["window_ticks"] = row->second["ticks"];
        }
        records.push_back(std::move(rec));
    }
    json body{ { "scheme", *scheme }, { "group", *group }, { "ks", ks }, { "records", records } };
    if (chosen) { body["k"] = *chosen; }
    return { 200, body };
}

ApiResponse ArtifactStore::replay(const std::string &trace_id) const
{
    const auto dot = trace_id.rfind('.');
    const auto match = dot == std::string::npos ? std::string{} : trace_id.substr(0, dot);
    const auto pov_text = dot == std::string::npos ? std::string{} : trace_id.substr(dot + 1);
    if ((pov_text != "p1" && pov_text != "p2") || data_->matches.count(match) == 0) {
        return error(404, "unknown trace \"" + trace_id + "\"");
    }
    const auto pov = engine::parse_player(pov_text);
    const auto replay = engine::read_replay(data_->layout.replay(match));

    std::vector<engine::GameState> before;
    std::vector<std::pair<std::vector<engine::UnitCommand>, std::vector<engine::UnitCommand>>> commands;
    const auto final_state = engine::resimulate(replay, [&](const auto &state, const auto &p1, const auto &p2) {
        before.push_back(state);
        commands.emplace_back(p1, p2);
    });

    // Frame t (1-based) is the board after tick t-1 was stepped, with the
    // commands that produced it; the initial board is reported separately.
    json frames = json::array();
    for (std::size_t i = 0; i < before.size(); ++i) {
        const auto &state = i + 1 < before.size() ? before[i + 1] : final_state;
        const auto &[p1, p2] = commands[i];
        frames.push_back({ { "tick", state.tick },
          { "units", units_dto(state) },
          { "commands", { { "p1", commands_dto(p1) }, { "p2", commands_dto(p2) } } },
          { "pov_acted", !(pov == engine::Player::p1 ? p1 : p2).empty() } });
    }
    const auto initial = before.empty() ? final_state : before.front();
    return { 200,
      { { "trace_id", trace_id },
        { "match_id", match },
        { "map", std::string(1, replay.header.variant) },
        { "pov", pov_text },
        { "agent", pov == engine::Player::p1 ? replay.header.p1_agent : replay.header.p2_agent },
        { "opponent", pov == engine::Player::p1 ? replay.header.p2_agent : replay.header.p1_agent },
        { "width", initial.width },
        { "height", initial.height },
        { "outcome", std::string(engine::to_string(replay.result)) },
        { "final_tick", replay.final_tick },
        { "initial", { { "tick", initial.tick }, { "units", units_dto(initial) } } },
        { "frames", frames } } };
}

ApiResponse ArtifactStore::metrics(const std::optional<std::string> &scheme) const
{
    if (auto e = check_scheme(data_->schemes, scheme)) { return *e; }
    const auto &d = data_->schemes.at(*scheme);
    return { 200, { { "scheme", *scheme }, { "rows", d.table }, { "warnings", d.warnings } } };
}

ApiResponse ArtifactStore::handle(const ApiRequest &request) const
{
    const auto param = [&request](const std::string &name) -> std::optional<std::string> {
        const auto it = request.query.find(name);
        return it == request.query.end() ? std::nullopt : std::optional(it->second);
    };
    const auto &p = request.path;
    if (p == "/api/schemes") { return schemes(); }
    if (p == "/api/groups") { return groups(param("scheme")); }
    if (p == "/api/projection") { return projection(param("scheme"), param("group"), param("k")); }
    if (p == "/api/metrics") { return metrics(param("scheme")); }
    const std::string prefix = "/api/trace/";
    const std::string suffix = "/replay";
    if (p.size() > prefix.size() + suffix.size() && p.starts_with(prefix) && p.ends_with(suffix)) {
        return replay(p.substr(prefix.size(), p.size() - prefix.size() - suffix.size()));
    }
    return error(404, "no such endpoint: " + p);
}

}// namespace playstyle::explorer
