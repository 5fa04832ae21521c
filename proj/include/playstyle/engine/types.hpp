#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace playstyle::engine {

enum class Player : std::uint8_t { none = 0, p1 = 1, p2 = 2 };

enum class UnitKind : std::uint8_t { resource = 0, base, barracks, worker, light, heavy, ranged };
inline constexpr int kUnitKindCount = 7;

enum class ActionType : std::uint8_t { noop = 0, move, harvest, ret, produce, attack };
inline constexpr int kActionTypeCount = 6;

// Grid y grows downwards: N is y-1, S is y+1.
enum class Direction : std::uint8_t { N = 0, E, S, W };
inline constexpr int kDirectionCount = 4;

struct Position {
    int x = 0;
    int y = 0;
    friend bool operator==(const Position &, const Position &) = default;
};

struct Offset {
    int dx = 0;
    int dy = 0;
    friend bool operator==(const Offset &, const Offset &) = default;
};

[[nodiscard]] constexpr Offset delta(Direction d) noexcept
{
    switch (d) {
    case Direction::N: return {0, -1};
    case Direction::E: return {1, 0};
    case Direction::S: return {0, 1};
    case Direction::W: return {-1, 0};
    }
    return {};
}

[[nodiscard]] constexpr Position operator+(Position p, Offset o) noexcept { return {p.x + o.dx, p.y + o.dy}; }

[[nodiscard]] constexpr Player opponent(Player p) noexcept
{
    return p == Player::p1 ? Player::p2 : (p == Player::p2 ? Player::p1 : Player::none);
}

[[nodiscard]] constexpr int player_index(Player p) noexcept { return p == Player::p2 ? 1 : 0; }

/// Action currently being executed by a unit.
struct BusyAction {
    ActionType type = ActionType::noop;
    std::optional<Direction> direction;
    std::optional<UnitKind> produce_kind;
    std::optional<Offset> attack_offset;
    int remaining = 0;
    friend bool operator==(const BusyAction &, const BusyAction &) = default;
};

struct Unit {
    int id = 0;
    Player owner = Player::none;
    UnitKind kind = UnitKind::worker;
    Position pos{};
    int hp = 0;
    int carried = 0;// resources held by a worker, or remaining in a mine
    std::optional<BusyAction> busy;
    friend bool operator==(const Unit &, const Unit &) = default;
};

struct UnitCommand {
    int unit_id = 0;
    ActionType action = ActionType::noop;
    std::optional<Direction> direction;
    std::optional<UnitKind> produce_kind;
    std::optional<Offset> attack_offset;
    friend bool operator==(const UnitCommand &, const UnitCommand &) = default;
};

struct GameState {
    int tick = 0;
    int width = 12;
    int height = 12;
    int max_ticks = 2000;
    std::array<int, 2> resources{ 0, 0 };
    std::vector<Unit> units;// sorted by id
    int next_unit_id = 0;

    [[nodiscard]] bool in_bounds(Position p) const noexcept
    {
        return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height;
    }
    [[nodiscard]] const Unit *find(int id) const noexcept;
    [[nodiscard]] Unit *find(int id) noexcept;
    [[nodiscard]] const Unit *unit_at(Position p) const noexcept;
    [[nodiscard]] int count_units(Player owner) const noexcept;

    friend bool operator==(const GameState &, const GameState &) = default;
};

enum class Outcome : std::uint8_t { ongoing, p1_wins, p2_wins, draw };

class EngineError : public std::runtime_error
{
  public:
    EngineError(int unit_id, const std::string &reason);
    [[nodiscard]] int unit_id() const noexcept { return unit_id_; }

  private:
    int unit_id_;
};

// Lower-case names used by every text format in the project.
[[nodiscard]] std::string_view to_string(Player p) noexcept;
[[nodiscard]] std::string_view to_string(UnitKind k) noexcept;
[[nodiscard]] std::string_view to_string(ActionType a) noexcept;
[[nodiscard]] std::string_view to_string(Direction d) noexcept;
[[nodiscard]] std::string_view to_string(Outcome o) noexcept;

[[nodiscard]] Player parse_player(std::string_view s);
[[nodiscard]] UnitKind parse_unit_kind(std::string_view s);
[[nodiscard]] ActionType parse_action_type(std::string_view s);
[[nodiscard]] Direction parse_direction(std::string_view s);
[[nodiscard]] Outcome parse_outcome(std::string_view s);

}// namespace playstyle::engine
