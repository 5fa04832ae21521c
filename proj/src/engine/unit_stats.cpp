#include "playstyle/engine/unit_stats.hpp"

#include "playstyle/generated/embedded_config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace playstyle::engine {

bool UnitStats::can_produce(UnitKind k) const noexcept
{
    return std::find(produces.begin(), produces.end(), k) != produces.end();
}

const UnitStatsTable &UnitStatsTable::defaults()
{
    static const UnitStatsTable table = from_json_text(embedded::kUnitStatsJson);
    return table;
}

UnitStatsTable UnitStatsTable::from_json_text(const std::string &text)
{
    const auto doc = nlohmann::json::parse(text);
    UnitStatsTable table;
    table.version_ = doc.at("version").get<std::string>();
    const auto &units = doc.at("units");
    for (int k = 0; k < kUnitKindCount; ++k) {
        const auto kind = static_cast<UnitKind>(k);
        const auto &entry = units.at(std::string(to_string(kind)));
        UnitStats s;
        s.hp = entry.at("hp").get<int>();
        s.cost = entry.value("cost", 0);
        s.damage = entry.value("damage", 0);
        s.range = entry.value("range", 0);
        s.produce_time = entry.value("produce_time", 0);
        s.move_time = entry.value("move_time", 0);
        s.attack_time = entry.value("attack_time", 0);
        s.harvest_time = entry.value("harvest_time", 0);
        s.return_time = entry.value("return_time", 0);
        s.harvest_amount = entry.value("harvest_amount", 0);
        for (const auto &p : entry.value("produces", nlohmann::json::array())) {
            s.produces.push_back(parse_unit_kind(p.get<std::string>()));
        }
        if (s.hp <= 0) { throw std::invalid_argument("unit stats: hp must be positive for " + std::string(to_string(kind))); }
        table.stats_[static_cast<std::size_t>(k)] = std::move(s);
    }
    return table;
}

UnitStatsTable UnitStatsTable::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) { throw std::runtime_error("cannot open unit stats file " + path.string()); }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

int UnitStatsTable::max_attack_range() const noexcept
{
    int r = 0;
    for (const auto &s : stats_) { r = std::max(r, s.can_attack() ? s.range : 0); }
    return r;
}

int UnitStatsTable::max_hp() const noexcept
{
    int h = 0;
    for (const auto &s : stats_) { h = std::max(h, s.hp); }
    return h;
}

}// namespace playstyle::engine
