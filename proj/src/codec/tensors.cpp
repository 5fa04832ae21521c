#include "playstyle/codec/tensors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace playstyle::codec {

using engine::ActionType;
using engine::Direction;
using engine::GameState;
using engine::Player;
using engine::UnitCommand;

namespace {

    int index_of(auto value) { return static_cast<int>(value); }

    void check_grid(const GameState &state, const CodecConfig &config)
    {
        if (state.width != config.width || state.height != config.height) {
            throw CodecError(fmt::format("state is {}x{} but the codec expects {}x{}",
              state.width, state.height, config.width, config.height));
        }
    }

    Direction mirror_direction(Direction d, bool flip_h, bool flip_v) noexcept
    {
        if (flip_h && (d == Direction::E || d == Direction::W)) { return d == Direction::E ? Direction::W : Direction::E; }
        if (flip_v && (d == Direction::N || d == Direction::S)) { return d == Direction::N ? Direction::S : Direction::N; }
        return d;
    }

    engine::Offset mirror_offset(engine::Offset o, bool flip_h, bool flip_v) noexcept
    {
        return { flip_h ? -o.dx : o.dx, flip_v ? -o.dy : o.dy };
    }

    // Copies every cell to its mirrored position.
    GridTensor mirror_grid(const GridTensor &t, bool flip_h, bool flip_v)
    {
        GridTensor out(t.height(), t.width(), t.channels());
        for (int y = 0; y < t.height(); ++y) {
            const int my = flip_v ? t.height() - 1 - y : y;
            for (int x = 0; x < t.width(); ++x) {
                const int mx = flip_h ? t.width() - 1 - x : x;
                for (int c = 0; c < t.channels(); ++c) { out.at(my, mx, c) = t.at(y, x, c); }
            }
        }
        return out;
    }

}// namespace

float scale_offset(int offset, int range) noexcept
{
    return static_cast<float>(offset + range) / static_cast<float>(2 * range);
}

int unscale_offset(float value, int range) noexcept
{
    return static_cast<int>(std::lround(static_cast<double>(value) * 2.0 * range - range));
}

ObservationTensor encode_observation(const GameState &state, Player pov, const CodecConfig &config)
{
    check_grid(state, config);
    ObservationTensor t(config.height, config.width, obs::channels);
    for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
            t.at(y, x, obs::owner) = 1.0F;
            t.at(y, x, obs::kind) = 1.0F;
            t.at(y, x, obs::action) = 1.0F;
        }
    }
    const auto &stats = *config.stats;
    for (const auto &u : state.units) {
        if (!state.in_bounds(u.pos)) {
            throw CodecError(fmt::format("unit {} at ({}, {}) lies outside the {}x{} grid",
              u.id, u.pos.x, u.pos.y, state.width, state.height));
        }
        const int y = u.pos.y;
        const int x = u.pos.x;
        const int max_hp = std::max(1, stats[u.kind].hp);
        t.at(y, x, obs::hp) = std::clamp(static_cast<float>(u.hp) / static_cast<float>(max_hp), 0.0F, 1.0F);
        t.at(y, x, obs::resources) = std::clamp(static_cast<float>(u.carried) / config.resource_cap, 0.0F, 1.0F);
        const int owner = u.owner == Player::none ? 0 : (u.owner == pov ? 1 : 2);
        t.at(y, x, obs::owner) = 0.0F;
        t.at(y, x, obs::owner + owner) = 1.0F;
        t.at(y, x, obs::kind) = 0.0F;
        t.at(y, x, obs::kind + 1 + index_of(u.kind)) = 1.0F;
        if (u.busy) {
            t.at(y, x, obs::action) = 0.0F;
            t.at(y, x, obs::action + index_of(u.busy->type)) = 1.0F;
        }
    }
    return t;
}

ActionTensor encode_actions(std::span<const UnitCommand> cmds, const GameState &state, Player pov, const CodecConfig &config)
{
    check_grid(state, config);
    const int range = config.attack_range();
    ActionTensor t(config.height, config.width, act::channels);
    for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) { t.at(y, x, act::type) = 1.0F; }
    }
    for (const auto &c : cmds) {
        const auto *u = state.find(c.unit_id);
        if (u == nullptr) { throw CodecError(fmt::format("command for unknown unit {}", c.unit_id)); }
        if (u->owner != pov) {
            throw CodecError(fmt::format("command for unit {} which {} does not own", c.unit_id, engine::to_string(pov)));
        }
        if (!state.in_bounds(u->pos)) {
            throw CodecError(fmt::format("unit {} at ({}, {}) lies outside the grid", u->id, u->pos.x, u->pos.y));
        }
        if (c.action == ActionType::noop) { continue; }
        const int y = u->pos.y;
        const int x = u->pos.x;
        t.at(y, x, act::type) = 0.0F;
        t.at(y, x, act::type + index_of(c.action)) = 1.0F;
        if (c.direction) { t.at(y, x, act::direction + index_of(*c.direction)) = 1.0F; }
        if (c.produce_kind) { t.at(y, x, act::produce + index_of(*c.produce_kind)) = 1.0F; }
        const auto offset = c.attack_offset.value_or(engine::Offset{});
        if (std::abs(offset.dx) > range || std::abs(offset.dy) > range) {
            throw CodecError(fmt::format("attack offset ({}, {}) of unit {} exceeds range {}", offset.dx, offset.dy, u->id, range));
        }
        t.at(y, x, act::dx) = scale_offset(offset.dx, range);
        t.at(y, x, act::dy) = scale_offset(offset.dy, range);
    }
    return t;
}

ObservationTensor mirror_observation(const ObservationTensor &t, bool flip_h, bool flip_v)
{
    return mirror_grid(t, flip_h, flip_v);
}

ActionTensor mirror_actions(const ActionTensor &t, bool flip_h, bool flip_v, int attack_range)
{
    auto out = mirror_grid(t, flip_h, flip_v);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            if (flip_h) { std::swap(out.at(y, x, act::direction + 1), out.at(y, x, act::direction + 3)); }
            if (flip_v) { std::swap(out.at(y, x, act::direction + 0), out.at(y, x, act::direction + 2)); }
            if (out.at(y, x, act::type) != 0.0F) { continue; }
            // Round-trip through the integer offset so that mirroring twice is exact.
            if (flip_h) { out.at(y, x, act::dx) = scale_offset(-unscale_offset(out.at(y, x, act::dx), attack_range), attack_range); }
            if (flip_v) { out.at(y, x, act::dy) = scale_offset(-unscale_offset(out.at(y, x, act::dy), attack_range), attack_range); }
        }
    }
    return out;
}

GameState mirror_state(const GameState &state, bool flip_h, bool flip_v)
{
    GameState out = state;
    for (auto &u : out.units) {
        if (flip_h) { u.pos.x = state.width - 1 - u.pos.x; }
        if (flip_v) { u.pos.y = state.height - 1 - u.pos.y; }
        if (u.busy) {
            if (u.busy->direction) { u.busy->direction = mirror_direction(*u.busy->direction, flip_h, flip_v); }
            if (u.busy->attack_offset) { u.busy->attack_offset = mirror_offset(*u.busy->attack_offset, flip_h, flip_v); }
        }
    }
    return out;
}

std::vector<UnitCommand> mirror_commands(std::span<const UnitCommand> cmds, bool flip_h, bool flip_v)
{
    std::vector<UnitCommand> out(cmds.begin(), cmds.end());
    for (auto &c : out) {
        if (c.direction) { c.direction = mirror_direction(*c.direction, flip_h, flip_v); }
        if (c.attack_offset) { c.attack_offset = mirror_offset(*c.attack_offset, flip_h, flip_v); }
    }
    return out;
}

ObservationTensor swap_owner(const ObservationTensor &t)
{
    auto out = t;
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) { std::swap(out.at(y, x, obs::owner + 1), out.at(y, x, obs::owner + 2)); }
    }
    return out;
}

}// namespace playstyle::codec
