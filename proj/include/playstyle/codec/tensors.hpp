#pragma once

#include "playstyle/codec/layout.hpp"
#include "playstyle/engine/types.hpp"
#include "playstyle/engine/unit_stats.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace playstyle::codec {

class CodecError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Dense (height, width, channels) float tensor, channel-fastest.
class GridTensor
{
  public:
    GridTensor() = default;
    GridTensor(int height, int width, int channels)
      : height_(height), width_(width), channels_(channels),
        data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * static_cast<std::size_t>(channels), 0.0F)
    {}

    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int channels() const noexcept { return channels_; }

    [[nodiscard]] float &at(int y, int x, int c) noexcept { return data_[index(y, x, c)]; }
    [[nodiscard]] float at(int y, int x, int c) const noexcept { return data_[index(y, x, c)]; }

    [[nodiscard]] std::span<float> data() noexcept { return data_; }
    [[nodiscard]] std::span<const float> data() const noexcept { return data_; }

    friend bool operator==(const GridTensor &, const GridTensor &) = default;

  private:
    [[nodiscard]] std::size_t index(int y, int x, int c) const noexcept
    {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x))
                 * static_cast<std::size_t>(channels_)
               + static_cast<std::size_t>(c);
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

using ObservationTensor = GridTensor;
using ActionTensor = GridTensor;

struct CodecConfig {
    int height = 12;
    int width = 12;
    float resource_cap = 20.0F;
    const engine::UnitStatsTable *stats = &engine::UnitStatsTable::defaults();

    [[nodiscard]] int attack_range() const noexcept { return stats->max_attack_range(); }
};

/// Observation of `state` from `pov`: owner channels become self / enemy.
[[nodiscard]] ObservationTensor encode_observation(const engine::GameState &state, engine::Player pov, const CodecConfig &config = {});

/// Action tensor of `pov`'s commands. Noop commands leave their cell untouched.
[[nodiscard]] ActionTensor encode_actions(std::span<const engine::UnitCommand> cmds,
  const engine::GameState &state,
  engine::Player pov,
  const CodecConfig &config = {});

/// Scaled attack offset and its inverse.
[[nodiscard]] float scale_offset(int offset, int range) noexcept;
[[nodiscard]] int unscale_offset(float value, int range) noexcept;

/// Mirror an observation grid (flip_h: x -> w-1-x, flip_v: y -> h-1-y).
[[nodiscard]] ObservationTensor mirror_observation(const ObservationTensor &t, bool flip_h, bool flip_v);

/// Mirror an action grid, remapping directions (E<->W, N<->S) and reflecting
/// attack offsets of commanded cells. Exact involution.
[[nodiscard]] ActionTensor mirror_actions(const ActionTensor &t, bool flip_h, bool flip_v, int attack_range);

/// The same geometric mirror applied to a game state and to commands.
[[nodiscard]] engine::GameState mirror_state(const engine::GameState &state, bool flip_h, bool flip_v);
[[nodiscard]] std::vector<engine::UnitCommand> mirror_commands(std::span<const engine::UnitCommand> cmds, bool flip_h, bool flip_v);

/// Exchange the self and enemy owner channels.
[[nodiscard]] ObservationTensor swap_owner(const ObservationTensor &t);

}// namespace playstyle::codec
