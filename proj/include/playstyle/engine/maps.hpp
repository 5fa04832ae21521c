#pragma once

#include "playstyle/engine/types.hpp"

#include <string>
#include <vector>

namespace playstyle::engine {

/// The twelve variant letters of the 12x12 bases/workers family, "A" to "L".
[[nodiscard]] const std::vector<char> &map_variants();

[[nodiscard]] bool is_map_variant(char variant) noexcept;

/// Starting state for a variant: one base and one worker per player plus two
/// mines per player, placed from the shipped table (config/maps.json). Player 2
/// is the 180 degree rotation of player 1. Throws std::invalid_argument for an
/// unknown letter.
[[nodiscard]] GameState generate_map(char variant);

/// Default game-length cap of the shipped map family.
[[nodiscard]] int default_max_ticks();

}// namespace playstyle::engine
