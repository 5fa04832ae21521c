#include "criteria.hpp"

#include "../codec_support.hpp"
#include "../metric_oracle.hpp"

#include "playstyle/cluster/metrics.hpp"
#include "playstyle/codec/layout.hpp"
#include "playstyle/engine/maps.hpp"
#include "playstyle/engine/rules.hpp"
#include "playstyle/pipeline/artifacts.hpp"
#include "playstyle/pipeline/stages.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace acceptance {

namespace fs = std::filesystem;
namespace cl = playstyle::cluster;
namespace codec = playstyle::codec;
namespace engine = playstyle::engine;
namespace pl = playstyle::pipeline;
namespace oracle = playstyle::oracle;
using nlohmann::json;

namespace {

    // ---- metrics against the brute-force oracle -------------------------------

    Outcome metric_oracle(const fs::path &)
    {
        long pairs = 0;
        double worst = 0.0;
        const auto compare = [&](const std::vector<int> &labels, const std::vector<int> &clusters) {
            const auto got = cl::clustering_metrics(labels, clusters);
            const auto want = oracle::metrics(labels, clusters);
            worst = std::max({ worst,
              std::abs(got.completeness - want.completeness),
              std::abs(got.homogeneity - want.homogeneity),
              std::abs(got.ari - want.ari),
              std::abs(got.ami - want.ami) });
            ++pairs;
        };
        for (int n = 2; n <= 8; ++n) {
            // Metrics are invariant under relabelling the classes, so for n > 5
            // one representative per class-size shape covers every labelling.
            const auto visit_labels = [&](const std::vector<int> &labels) {
                oracle::for_each_partition(n, [&](const std::vector<int> &clusters) { compare(labels, clusters); });
            };
            if (n <= 5) {
                oracle::for_each_partition(n, visit_labels);
            } else {
                oracle::for_each_shape(n, visit_labels);
            }
        }
        return { worst <= 1e-9, fmt::format("{} partition pairs up to n=8, worst abs error {:.2e}", pairs, worst) };
    }

    // ---- metric anchors -------------------------------------------------------

    Outcome metric_anchors(const fs::path &)
    {
        std::vector<std::string> failures;
        const std::vector<int> labels{ 0, 0, 0, 1, 1, 2, 2, 2, 2, 3 };
        const auto same = cl::clustering_metrics(labels, { 7, 7, 7, 3, 3, 5, 5, 5, 5, 1 });
        if (same.completeness != 1.0 || same.homogeneity != 1.0 || same.ari != 1.0 || same.ami != 1.0) {
            failures.push_back(fmt::format("identical partitions gave C={} H={} ARI={} AMI={}", same.completeness, same.homogeneity, same.ari, same.ami));
        }
        const auto single = cl::clustering_metrics(labels, std::vector<int>(labels.size(), 0));
        if (single.completeness != 1.0 || single.homogeneity != 0.0) {
            failures.push_back(fmt::format("single cluster gave C={} H={}", single.completeness, single.homogeneity));
        }
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> label_of(0, 4);
        std::uniform_int_distribution<int> cluster_of(0, 5);
        double sum = 0.0;
        for (int t = 0; t < 1000; ++t) {
            std::vector<int> a(200);
            std::vector<int> b(200);
            for (auto &v : a) { v = label_of(rng); }
            for (auto &v : b) { v = cluster_of(rng); }
            sum += cl::clustering_metrics(a, b).ari;
        }
        const double mean = sum / 1000.0;
        if (mean < -0.05 || mean > 0.05) { failures.push_back(fmt::format("random ARI mean {}", mean)); }
        std::string detail = fmt::format("identical=1, single-cluster C=1 H=0, random ARI mean {:+.4f} over 1000 trials", mean);
        for (const auto &f : failures) { detail += "; " + f; }
        return { failures.empty(), detail };
    }

    // ---- codec invariants -----------------------------------------------------

    bool groups_one_hot(const codec::GridTensor &t, const codec::FrameSchema &schema, int channel_offset)
    {
        for (int y = 0; y < t.height(); ++y) {
            for (int x = 0; x < t.width(); ++x) {
                for (const auto &g : schema.groups) {
                    if (g.first < channel_offset || g.first >= channel_offset + t.channels()) { continue; }
                    float sum = 0.0F;
                    for (int c = 0; c < g.size; ++c) {
                        const float v = t.at(y, x, g.first - channel_offset + c);
                        if (v != 0.0F && v != 1.0F) { return false; }
                        sum += v;
                    }
                    if (!(sum == 1.0F || (g.nullable && sum == 0.0F))) { return false; }
                }
            }
        }
        return true;
    }

    Outcome codec_invariants(const fs::path &)
    {
        std::vector<codec::SequenceSample> samples;
        for (std::uint64_t seed = 1; samples.size() < 1000; ++seed) {
            for (const auto &t : playstyle::testing::random_traces(6, seed, 600)) {
                for (auto &s : codec::extract_subsequences(t, 32, 8)) { samples.push_back(std::move(s)); }
            }
        }
        const auto joint = codec::FrameSchema::for_scheme(codec::Scheme::joint);
        const codec::CodecConfig config;
        long involution = 0;
        long one_hot = 0;
        long handcrafted = 0;
        long frames = 0;
        for (const auto &s : samples) {
            for (const auto &[h, v] : { std::pair{ true, false }, std::pair{ false, true }, std::pair{ true, true } }) {
                const auto once = codec::augment_mirror(s, h, v, config);
                const auto twice = codec::augment_mirror(once, h, v, config);
                if (twice.observations != s.observations || twice.actions != s.actions) { ++involution; }
                for (std::size_t f = 0; f < once.actions.size(); ++f) {
                    if (!groups_one_hot(once.observations[f], joint, 0) || !groups_one_hot(once.actions[f], joint, codec::obs::channels)) {
                        ++one_hot;
                    }
                }
            }
            for (std::size_t f = 0; f < s.actions.size(); ++f) {
                ++frames;
                if (!groups_one_hot(s.observations[f], joint, 0) || !groups_one_hot(s.actions[f], joint, codec::obs::channels)) {
                    ++one_hot;
                }
            }
            const auto features = codec::handcrafted_features(s, config);
            static_assert(std::tuple_size_v<codec::HandcraftedFeatures> == 18);
            for (const auto &[first, size] : { std::pair{ 0, 5 }, std::pair{ 5, 4 }, std::pair{ 9, 7 } }) {
                double sum = 0.0;
                bool zero = true;
                for (int i = first; i < first + size; ++i) {
                    sum += features[static_cast<std::size_t>(i)];
                    zero = zero && features[static_cast<std::size_t>(i)] == 0.0;
                }
                if (!zero && std::abs(sum - 1.0) > 1e-9) { ++handcrafted; }
            }
        }
        const long failures = involution + one_hot + handcrafted;
        return { failures == 0 && samples.size() >= 1000,
          fmt::format("{} samples ({} frames, 3 flips each): {} involution, {} one-hot, {} handcrafted failures",
            samples.size(),
            frames,
            involution,
            one_hot,
            handcrafted) };
    }

    // ---- desk-scale separation ------------------------------------------------

    struct Means {
        double homogeneity = 0.0;
        double ari = 0.0;
        double ami = 0.0;
        int groups = 0;
        std::map<std::string, std::array<double, 3>> per_group;
    };

    Means mean_metrics(const fs::path &cluster_dir, int k)
    {
        const auto report = json::parse(pl::read_text(cluster_dir / "report.json"));
        Means m;
        for (const auto &r : report.at("reports")) {
            if (r.at("k") != k) { continue; }
            const auto &x = r.at("metrics");
            m.homogeneity += x.at("homogeneity").get<double>();
            m.ari += x.at("ari").get<double>();
            m.ami += x.at("ami").get<double>();
            m.per_group[r.at("group").get<std::string>()] = { x.at("homogeneity"), x.at("ari"), x.at("ami") };
            ++m.groups;
        }
        if (m.groups > 0) {
            m.homogeneity /= m.groups;
            m.ari /= m.groups;
            m.ami /= m.groups;
        }
        return m;
    }

    Outcome desk_separation(const fs::path &work)
    {
        auto config = pl::load_config(fs::path(PLAYSTYLE_CONFIG_DIR) / "pipeline_desk.json");
        config.out = work / "desk";
        config.schemes = { "actions", "handcrafted" };
        pl::run_all(config);
        const pl::Layout layout{ config.out };
        const auto actions = mean_metrics(layout.cluster("actions"), 4);
        const auto handcrafted = mean_metrics(layout.cluster("handcrafted"), 4);
        const bool pass = actions.groups == 4 && actions.homogeneity >= 0.8 && actions.ari >= 0.7 && actions.ami >= handcrafted.ami;
        std::string detail = fmt::format("actions over {} slot-0 groups: H={:.3f} ARI={:.3f} AMI={:.3f}; handcrafted AMI={:.3f} [",
          actions.groups,
          actions.homogeneity,
          actions.ari,
          actions.ami,
          handcrafted.ami);
        for (const auto &[g, v] : actions.per_group) { detail += fmt::format(" {}: H={:.2f} ARI={:.2f} AMI={:.2f};", g, v[0], v[1], v[2]); }
        detail += " ] (targets H>=0.8, ARI>=0.7, AMI>=handcrafted)";
        return { pass, detail };
    }

    // ---- determinism ----------------------------------------------------------

    Outcome determinism(const fs::path &work)
    {
        std::vector<std::string> runs;
        for (const char *name : { "a", "b" }) {
            auto config = pl::load_config(fs::path(PLAYSTYLE_CONFIG_DIR) / "pipeline_tiny.json");
            config.out = work / name;
            config.schemes = pl::all_schemes();
            pl::run_all(config);
        }
        std::vector<std::string> differing;
        std::size_t bytes = 0;
        for (const char *file : { "summary.txt", "summary.json", "tsne.json", "manifest.json" }) {
            const auto a = pl::read_text(pl::Layout{ work / "a" }.report() / file);
            const auto b = pl::read_text(pl::Layout{ work / "b" }.report() / file);
            bytes += a.size();
            if (a != b) { differing.emplace_back(file); }
        }
        std::string detail = fmt::format("two runs over all four schemes, {} report bytes compared", bytes);
        for (const auto &f : differing) { detail += "; differs: " + f; }
        return { differing.empty(), detail };
    }

    // ---- engine invariants ----------------------------------------------------

    long mine_total(const engine::GameState &s)
    {
        long total = 0;
        for (const auto &u : s.units) { total += u.kind == engine::UnitKind::resource ? u.carried : 0; }
        return total;
    }

    // Independent of the engine's own checks: every unit inside the board, no two on one cell.
    long overlapping_or_outside(const engine::GameState &s)
    {
        long violations = 0;
        std::set<std::pair<int, int>> seen;
        for (const auto &u : s.units) {
            if (u.pos.x < 0 || u.pos.y < 0 || u.pos.x >= s.width || u.pos.y >= s.height) { ++violations; }
            if (!seen.emplace(u.pos.x, u.pos.y).second) { ++violations; }
        }
        return violations;
    }

    Outcome engine_invariants(const fs::path &)
    {
        const auto &stats = engine::UnitStatsTable::defaults();
        std::mt19937_64 rng(4242);
        long ticks = 0;
        long occupancy = 0;
        long conservation = 0;
        std::map<engine::Outcome, int> outcomes;
        for (int match = 0; match < 100; ++match) {
            const char variant = engine::map_variants()[static_cast<std::size_t>(match) % engine::map_variants().size()];
            auto state = engine::generate_map(variant);
            occupancy += overlapping_or_outside(state);
            while (engine::outcome(state) == engine::Outcome::ongoing) {
                // Each side gives a random legal command to a random subset of its idle units.
                std::array<std::vector<engine::UnitCommand>, 2> chosen;
                for (const auto p : { engine::Player::p1, engine::Player::p2 }) {
                    std::map<int, std::vector<engine::UnitCommand>> per_unit;
                    for (const auto &c : engine::legal_commands(state, p)) { per_unit[c.unit_id].push_back(c); }
                    for (auto &[id, options] : per_unit) {
                        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) { continue; }
                        chosen[static_cast<std::size_t>(engine::player_index(p))].push_back(
                          options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]);
                    }
                }
                const auto next = engine::step(state, chosen[0], chosen[1]);

                // Resources only move between mines, carried loads and stockpiles,
                // leave through production costs, or vanish with a dead carrier.
                long spent_min = 0;
                long spent_max = 0;
                for (const auto &cmds : chosen) {
                    for (const auto &c : cmds) {
                        if (c.action != engine::ActionType::produce) { continue; }
                        const auto cost = stats[*c.produce_kind].cost;
                        const auto *after = next.find(c.unit_id);
                        if (after == nullptr) {
                            spent_max += cost;// producer died this tick: cost may or may not have been paid
                        } else if (after->busy && after->busy->type == engine::ActionType::produce) {
                            spent_min += cost;
                            spent_max += cost;
                        }
                    }
                }
                // A carrier killed this tick may have harvested or returned first,
                // so its loss is only bounded; without deaths the balance is exact.
                long lost_max = 0;
                for (const auto &u : state.units) {
                    if (u.kind != engine::UnitKind::resource && next.find(u.id) == nullptr) {
                        lost_max += u.carried + (u.kind == engine::UnitKind::worker ? stats[u.kind].harvest_amount : 0);
                    }
                }
                const long drop = engine::total_resources(state) - engine::total_resources(next);
                if (mine_total(next) > mine_total(state) || drop < spent_min || drop > spent_max + lost_max) { ++conservation; }
                occupancy += overlapping_or_outside(next);
                state = next;
                ++ticks;
            }
            ++outcomes[engine::outcome(state)];
        }
        std::string detail = fmt::format("100 matches, {} ticks: {} occupancy, {} conservation violations; outcomes", ticks, occupancy, conservation);
        for (const auto &[o, n] : outcomes) { detail += fmt::format(" {}={}", engine::to_string(o), n); }
        return { occupancy == 0 && conservation == 0, detail };
    }

}// namespace

std::vector<Criterion> core_criteria()
{
    spdlog::set_level(spdlog::level::warn);
    return {
        { "metrics_oracle", "C/H/ARI/AMI match a brute-force oracle over all partitions of n <= 8 within 1e-9", metric_oracle },
        { "metric_anchors", "identical -> 1, single cluster -> C=1/H=0, random ARI mean within +-0.05", metric_anchors },
        { "codec_invariants", "mirror involution, one-hot groups, handcrafted frequency groups over >= 1000 samples", codec_invariants },
        { "desk_separation", "4-agent 2-map desk run: actions H >= 0.8, ARI >= 0.7, AMI >= handcrafted", desk_separation },
        { "determinism", "two full pipeline runs with one seed give byte-identical reports", determinism },
        { "engine_invariants", "conservation and occupancy over 100 random full matches", engine_invariants },
    };
}

}// namespace acceptance
