#pragma once

#include <string_view>
#include <vector>

namespace playstyle::codec {

// Per-cell channel layout of the observation tensor (c = 19).
namespace obs {
    inline constexpr int hp = 0;// hp / max hp of the unit kind
    inline constexpr int resources = 1;// carried (workers) or remaining (mines) / resource cap
    inline constexpr int owner = 2;// none, self, enemy
    inline constexpr int kind = 5;// none, resource, base, barracks, worker, light, heavy, ranged
    inline constexpr int action = 13;// noop, move, harvest, return, produce, attack
    inline constexpr int channels = 19;
}// namespace obs

// Per-cell channel layout of the action tensor (c = 19).
namespace act {
    inline constexpr int type = 0;// noop, move, harvest, return, produce, attack
    inline constexpr int direction = 6;// N, E, S, W (shared by every directional action)
    inline constexpr int produce = 10;// resource, base, barracks, worker, light, heavy, ranged
    inline constexpr int dx = 17;// relative attack offset, (d + R) / 2R
    inline constexpr int dy = 18;
    inline constexpr int channels = 19;
}// namespace act

/// A one-hot block of channels. `nullable` blocks may be all-zero in a cell.
struct CategoricalGroup {
    std::string_view name;
    int first = 0;
    int size = 0;
    bool nullable = false;
};

/// Which tensors make up a frame.
enum class Scheme { states, actions, joint };

[[nodiscard]] std::string_view to_string(Scheme s) noexcept;
[[nodiscard]] Scheme parse_scheme(std::string_view s);

/// Channel schema of one frame for a scheme: joint frames stack the
/// observation channels followed by the action channels.
struct FrameSchema {
    Scheme scheme = Scheme::actions;
    int channels = 0;
    std::vector<CategoricalGroup> groups;
    std::vector<int> numeric;

    [[nodiscard]] static FrameSchema for_scheme(Scheme scheme);
};

}// namespace playstyle::codec
