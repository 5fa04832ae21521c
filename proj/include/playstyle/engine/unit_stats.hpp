#pragma once

#include "playstyle/engine/types.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace playstyle::engine {

struct UnitStats {
    int hp = 1;
    int cost = 0;
    int damage = 0;
    int range = 0;
    int produce_time = 0;
    int move_time = 0;
    int attack_time = 0;
    int harvest_time = 0;
    int return_time = 0;
    int harvest_amount = 0;
    std::vector<UnitKind> produces;

    [[nodiscard]] bool can_move() const noexcept { return move_time > 0; }
    [[nodiscard]] bool can_attack() const noexcept { return damage > 0 && attack_time > 0; }
    [[nodiscard]] bool can_harvest() const noexcept { return harvest_amount > 0; }
    [[nodiscard]] bool can_produce(UnitKind k) const noexcept;
};

/// Per-kind unit statistics. The shipped table lives in config/unit_stats.json
/// and is compiled into the binary; alternate tables can be loaded from disk.
class UnitStatsTable
{
  public:
    [[nodiscard]] static const UnitStatsTable &defaults();
    [[nodiscard]] static UnitStatsTable from_json_text(const std::string &text);
    [[nodiscard]] static UnitStatsTable load(const std::filesystem::path &path);

    [[nodiscard]] const UnitStats &operator[](UnitKind k) const noexcept
    {
        return stats_[static_cast<std::size_t>(k)];
    }
    [[nodiscard]] const std::string &version() const noexcept { return version_; }
    [[nodiscard]] int max_attack_range() const noexcept;
    [[nodiscard]] int max_hp() const noexcept;

  private:
    std::string version_;
    std::array<UnitStats, kUnitKindCount> stats_{};
};

}// namespace playstyle::engine
