#include <doctest.h>

#include "codec_support.hpp"
#include "test_support.hpp"

#include "playstyle/codec/dataset.hpp"
#include "playstyle/engine/rules.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace playstyle;
namespace act = codec::act;
namespace obs = codec::obs;
using engine::ActionType;
using engine::Direction;
using engine::Player;
using engine::UnitCommand;
using engine::UnitKind;
using testing::empty_state;
using testing::place;

namespace {

agents::AgentSpec spec_named(const std::string &name)
{
    for (auto &s : agents::default_roster()) {
        if (s.name == name) { return s; }
    }
    throw std::runtime_error("no agent " + name);
}

float group_sum(const codec::GridTensor &t, int y, int x, int first, int size)
{
    float s = 0;
    for (int c = first; c < first + size; ++c) { s += t.at(y, x, c); }
    return s;
}

// A 32-frame sample whose frames all carry the given commands on the given state.
codec::SequenceSample constant_sample(const engine::GameState &s, const std::vector<UnitCommand> &cmds, int frames = 1)
{
    codec::SequenceSample sample;
    for (int i = 0; i < frames; ++i) {
        sample.observations.push_back(codec::encode_observation(s, Player::p1));
        sample.actions.push_back(codec::encode_actions(cmds, s, Player::p1));
    }
    return sample;
}

codec::PlayTrace synthetic_trace(char map, const std::string &p1, const std::string &p2, int repeat, Player pov, int frames)
{
    codec::PlayTrace t;
    t.match_id = codec::match_id(map, p1, p2, repeat);
    t.map_variant = map;
    t.pov = pov;
    t.agent = pov == Player::p1 ? p1 : p2;
    t.opponent = pov == Player::p1 ? p2 : p1;
    t.repeat = repeat;
    auto s = engine::generate_map(map);
    const int worker = pov == Player::p1 ? 2 : 4;
    for (int i = 0; i < frames; ++i) {
        t.frames.push_back(codec::TraceFrame{ i, s.units, { UnitCommand{ worker, ActionType::move, Direction::N, {}, {} } } });
    }
    return t;
}

}// namespace

TEST_CASE("observation channels")
{
    auto s = empty_state();
    place(s, Player::p1, UnitKind::base, { 1, 1 });
    auto &w = place(s, Player::p2, UnitKind::worker, { 5, 4 }, 1);
    w.busy = engine::BusyAction{ ActionType::move, Direction::E, {}, {}, 3 };
    place(s, Player::none, UnitKind::resource, { 0, 0 }, 20);

    const auto t = codec::encode_observation(s, Player::p1);
    CHECK(t.height() == 12);
    CHECK(t.width() == 12);
    CHECK(t.channels() == 19);
    CHECK(t.at(1, 1, obs::hp) == doctest::Approx(1.0));
    CHECK(t.at(1, 1, obs::owner + 1) == 1.0F);
    CHECK(t.at(1, 1, obs::kind + 1 + static_cast<int>(UnitKind::base)) == 1.0F);
    CHECK(t.at(4, 5, obs::owner + 2) == 1.0F);
    CHECK(t.at(4, 5, obs::resources) == doctest::Approx(0.05));
    CHECK(t.at(4, 5, obs::action + static_cast<int>(ActionType::move)) == 1.0F);
    CHECK(t.at(0, 0, obs::owner) == 1.0F);
    CHECK(t.at(0, 0, obs::resources) == doctest::Approx(1.0));
    CHECK(t.at(7, 7, obs::kind) == 1.0F);
    CHECK(t.at(7, 7, obs::action) == 1.0F);

    // Changing the point of view swaps only the owner channels.
    CHECK(codec::encode_observation(s, Player::p2) == codec::swap_owner(t));

    s.units.back().pos = { 12, 0 };
    CHECK_THROWS_AS((void)codec::encode_observation(s, Player::p1), codec::CodecError);
}

TEST_CASE("action channels")
{
    auto s = empty_state();
    place(s, Player::p1, UnitKind::ranged, { 4, 4 });
    place(s, Player::p1, UnitKind::worker, { 6, 6 });
    place(s, Player::p1, UnitKind::base, { 2, 2 });
    place(s, Player::p2, UnitKind::worker, { 5, 2 });

    const std::vector<UnitCommand> cmds{ { 1, ActionType::attack, {}, {}, engine::Offset{ 1, -2 } },
        { 2, ActionType::move, Direction::W, {}, {} },
        { 3, ActionType::produce, Direction::S, UnitKind::worker, {} } };
    const auto t = codec::encode_actions(cmds, s, Player::p1);
    CHECK(t.channels() == 19);
    CHECK(t.at(4, 4, act::type + static_cast<int>(ActionType::attack)) == 1.0F);
    CHECK(t.at(4, 4, act::dx) == doctest::Approx(0.667).epsilon(1e-3));
    CHECK(t.at(4, 4, act::dy) == doctest::Approx(0.167).epsilon(1e-2));
    CHECK(group_sum(t, 4, 4, act::direction, 4) == 0.0F);
    CHECK(t.at(6, 6, act::direction + static_cast<int>(Direction::W)) == 1.0F);
    CHECK(t.at(6, 6, act::dx) == 0.5F);
    CHECK(t.at(2, 2, act::produce + static_cast<int>(UnitKind::worker)) == 1.0F);
    CHECK(t.at(2, 2, act::direction + static_cast<int>(Direction::S)) == 1.0F);
    // Uncommanded cells hold only the noop flag.
    CHECK(t.at(9, 9, act::type) == 1.0F);
    CHECK(group_sum(t, 9, 9, 0, act::channels) == 1.0F);

    const std::vector<UnitCommand> enemy{ { 4, ActionType::move, Direction::N, {}, {} } };
    CHECK_THROWS_AS((void)codec::encode_actions(enemy, s, Player::p1), codec::CodecError);
    const std::vector<UnitCommand> noop{ { 1, ActionType::noop, {}, {}, {} } };
    CHECK(codec::encode_actions(noop, s, Player::p1) == codec::encode_actions({}, s, Player::p1));
}

TEST_CASE("offset scaling round-trips every offset in range")
{
    for (int range = 1; range <= 5; ++range) {
        for (int d = -range; d <= range; ++d) {
            CHECK(codec::unscale_offset(codec::scale_offset(d, range), range) == d);
        }
    }
}

TEST_CASE("horizontal mirror moves x=2 to x=9 and turns E into W")
{
    auto s = empty_state();
    place(s, Player::p1, UnitKind::worker, { 2, 5 });
    const std::vector<UnitCommand> cmds{ { 1, ActionType::move, Direction::E, {}, {} } };
    const auto mirrored = codec::mirror_actions(codec::encode_actions(cmds, s, Player::p1), true, false, 3);
    CHECK(mirrored.at(5, 9, act::type + static_cast<int>(ActionType::move)) == 1.0F);
    CHECK(mirrored.at(5, 9, act::direction + static_cast<int>(Direction::W)) == 1.0F);
    CHECK(mirrored.at(5, 2, act::type) == 1.0F);
}

TEST_CASE("windows")
{
    CHECK(codec::window_offsets(48, 32, 8) == std::vector<int>{ 0, 8, 16 });
    CHECK(codec::window_offsets(48, 32, 32) == std::vector<int>{ 0 });
    CHECK(codec::window_offsets(31, 32, 8).empty());
    CHECK(codec::window_offsets(32, 32, 32) == std::vector<int>{ 0 });

    const auto trace = synthetic_trace('A', "x", "y", 0, Player::p1, 48);
    const auto samples = codec::extract_subsequences(trace, 32, 8);
    REQUIRE(samples.size() == 3);
    CHECK(samples[2].offset == 16);
    CHECK(samples[2].slot == 2);
    CHECK(samples[2].sample_id() == "A.x.y.00.p1.s2");
    CHECK(samples[0].label == "x");
    CHECK(samples[0].length() == 32);
    CHECK(samples[0].observations.size() == 32);
}

TEST_CASE("handcrafted features")
{
    auto s = empty_state();
    for (int i = 0; i < 4; ++i) { place(s, Player::p1, UnitKind::light, { 2 * i + 1, 5 }); }
    place(s, Player::p2, UnitKind::worker, { 1, 4 });

    const std::vector<UnitCommand> three_moves_one_attack{ { 1, ActionType::move, Direction::N, {}, {} },
        { 2, ActionType::move, Direction::N, {}, {} },
        { 3, ActionType::move, Direction::S, {}, {} },
        { 4, ActionType::attack, {}, {}, engine::Offset{ 1, 0 } } };
    const auto f = codec::handcrafted_features(constant_sample(s, three_moves_one_attack));
    CHECK(f.size() == 18);
    CHECK(f[0] == doctest::Approx(0.75));
    CHECK(f[1] == 0.0);
    CHECK(f[2] == 0.0);
    CHECK(f[3] == 0.0);
    CHECK(f[4] == doctest::Approx(0.25));
    CHECK(std::accumulate(f.begin() + 5, f.begin() + 9, 0.0) == doctest::Approx(1.0));
    CHECK(f[5] == doctest::Approx(2.0 / 3.0));
    CHECK(std::accumulate(f.begin() + 9, f.begin() + 16, 0.0) == 0.0);

    place(s, Player::p1, UnitKind::ranged, { 8, 8 });
    const std::vector<UnitCommand> two_attacks{ { 4, ActionType::attack, {}, {}, engine::Offset{ 1, 0 } },
        { 6, ActionType::attack, {}, {}, engine::Offset{ 2, -1 } } };
    const auto g = codec::handcrafted_features(constant_sample(s, two_attacks));
    CHECK(g[16] == doctest::Approx(3.0));
    CHECK(g[17] == doctest::Approx(-1.0));

    const auto idle = codec::handcrafted_features(constant_sample(s, {}, 32));
    CHECK(std::all_of(idle.begin(), idle.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("recording matches")
{
    const auto passive = codec::record_match(spec_named("PassiveAI"), spec_named("PassiveAI"), { 'A', 1, 0, 300 });
    CHECK(passive.p1.frames.empty());
    CHECK(passive.p2.frames.empty());
    CHECK(passive.replay.result == engine::Outcome::draw);

    const auto rush = codec::record_match(spec_named("WorkerRush"), spec_named("PassiveAI"), { 'A', 7, 3, {} });
    CHECK(rush.replay.result == engine::Outcome::p1_wins);
    CHECK(rush.p1.trace_id() == "A.WorkerRush.PassiveAI.03.p1");
    CHECK(!rush.p1.frames.empty());
    CHECK(rush.p2.frames.empty());
    CHECK(!rush.failed());
    for (const auto &f : rush.p1.frames) { CHECK(!f.commands.empty()); }

    // Re-simulating the replay reproduces the recorded traces.
    const auto rebuilt = codec::traces_from_replay(rush.replay, 3);
    CHECK(rebuilt[0] == rush.p1);
    CHECK(rebuilt[1] == rush.p2);

    const auto random = codec::record_match(spec_named("RandomAI"), spec_named("LightRush"), { 'C', 9, 0, {} });
    const auto again = codec::record_match(spec_named("RandomAI"), spec_named("LightRush"), { 'C', 9, 0, {} });
    CHECK(random.p1 == again.p1);
    CHECK(random.p2 == again.p2);
    const auto both = codec::traces_from_replay(random.replay, 0);
    CHECK(both[0] == random.p1);
    CHECK(both[1] == random.p2);
}

TEST_CASE("an agent that throws plays passively for the rest of the match")
{
    auto broken = spec_named("RandomAI");
    broken.policy_id = "random_biased";
    broken.params["weights"] = "not an object";
    const auto rec = codec::record_match(broken, spec_named("WorkerRush"), { 'B', 1, 0, {} });
    CHECK(rec.failed());
    CHECK(rec.agent_failures[0].has_value());
    CHECK(rec.p1.frames.empty());
    CHECK(rec.replay.result == engine::Outcome::p2_wins);
}

TEST_CASE("dataset split")
{
    std::vector<codec::PlayTrace> traces;
    for (int r = 0; r < 10; ++r) {
        for (const auto pov : { Player::p1, Player::p2 }) {
            traces.push_back(synthetic_trace('A', "x", "y", r, pov, 48));
            traces.push_back(synthetic_trace('L', "x", "y", r, pov, 48));
        }
    }
    traces.push_back(synthetic_trace('B', "x", "y", 0, Player::p1, 48));// map in neither split

    codec::SplitPolicy policy;
    policy.train_maps = "A";
    const auto d = codec::build_dataset(traces, policy);
    CHECK(d.traces.size() == 40);
    std::map<codec::Split, std::set<int>> repeats;
    for (std::size_t i = 0; i < d.traces.size(); ++i) {
        if (d.traces[i].map_variant == 'A') { repeats[d.trace_split[i]].insert(d.traces[i].repeat); }
        if (d.traces[i].map_variant == 'L') { CHECK(d.trace_split[i] == codec::Split::test); }
    }
    CHECK(repeats[codec::Split::train] == std::set<int>{ 0, 1, 2, 3, 4, 5, 6, 7 });
    CHECK(repeats[codec::Split::val] == std::set<int>{ 8, 9 });
    CHECK(d.count(codec::Split::train) == 16 * 3);
    CHECK(d.count(codec::Split::val) == 4);
    CHECK(d.count(codec::Split::test) == 20);
    const auto first = d.refs(codec::Split::test).front();
    CHECK(d.sample_id(first) == d.materialize(first).sample_id());

    std::vector<codec::PlayTrace> short_traces;
    for (int r = 0; r < 9; ++r) { short_traces.push_back(synthetic_trace('C', "x", "y", r, Player::p1, 40)); }
    try {
        (void)codec::build_dataset(short_traces);
        FAIL("expected an error");
    } catch (const codec::CodecError &e) {
        CHECK(std::string(e.what()).find("C.x.y (9 repeats)") != std::string::npos);
    }
}

TEST_CASE("dataset persistence")
{
    auto traces = testing::random_traces(4, 21, 300);
    codec::SplitPolicy policy;
    policy.train_maps = "ABCDEFGHIJKL";
    policy.test_maps = "";
    policy.min_repeats = 1;
    policy.val_repeats = 0;
    const auto d = codec::build_dataset(traces, policy);

    const auto dir = std::filesystem::temp_directory_path() / "playstyle_codec_test";
    std::filesystem::remove_all(dir);
    const auto manifest = codec::write_dataset(dir, d, 3);
    CHECK(manifest.at("shards").size() == 3);
    const auto back = codec::read_dataset(dir);
    CHECK(back.traces == d.traces);
    CHECK(back.samples.size() == d.samples.size());
    CHECK(codec::write_dataset(dir, back, 3) == manifest);

    {
        std::ofstream corrupt(dir / "traces_train_000.bin", std::ios::binary | std::ios::app);
        corrupt << 'x';
    }
    CHECK_THROWS_AS((void)codec::read_dataset(dir), codec::CodecError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("encoding commutes with mirroring and with the point of view")
{
    const auto traces = testing::random_traces(6, 5);
    int checked = 0;
    for (const auto &trace : traces) {
        for (std::size_t i = 0; i < trace.frames.size(); ++i) {
            const auto s = codec::frame_state(trace, i);
            const auto &cmds = trace.frames[i].commands;
            const auto o = codec::encode_observation(s, trace.pov);
            const auto a = codec::encode_actions(cmds, s, trace.pov);
            for (const auto &[h, v] : { std::pair{ true, false }, std::pair{ false, true }, std::pair{ true, true } }) {
                const auto ms = codec::mirror_state(s, h, v);
                CHECK(codec::encode_observation(ms, trace.pov) == codec::mirror_observation(o, h, v));
                CHECK(codec::encode_actions(codec::mirror_commands(cmds, h, v), ms, trace.pov) == codec::mirror_actions(a, h, v, 3));
            }
            CHECK(codec::encode_observation(s, engine::opponent(trace.pov)) == codec::swap_owner(o));
            ++checked;
        }
    }
    CHECK(checked > 100);
}
