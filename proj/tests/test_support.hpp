#pragma once

#include "playstyle/engine/types.hpp"
#include "playstyle/engine/unit_stats.hpp"

namespace playstyle::testing {

inline engine::GameState empty_state(int width = 12, int height = 12)
{
    engine::GameState s;
    s.width = width;
    s.height = height;
    s.resources = { 5, 5 };
    s.next_unit_id = 1;
    return s;
}

// Appends a unit with full hp; ids follow insertion order.
inline engine::Unit &place(engine::GameState &s,
  engine::Player owner,
  engine::UnitKind kind,
  engine::Position pos,
  int carried = 0)
{
    const auto &stats = engine::UnitStatsTable::defaults();
    s.units.push_back(engine::Unit{ s.next_unit_id++, owner, kind, pos, stats[kind].hp, carried, std::nullopt });
    return s.units.back();
}

}// namespace playstyle::testing
