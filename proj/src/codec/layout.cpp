#include "playstyle/codec/layout.hpp"

#include <stdexcept>
#include <string>

namespace playstyle::codec {

std::string_view to_string(Scheme s) noexcept
{
    switch (s) {
    case Scheme::states: return "states";
    case Scheme::actions: return "actions";
    case Scheme::joint: return "joint";
    }
    return "?";
}

Scheme parse_scheme(std::string_view s)
{
    for (const auto scheme : { Scheme::states, Scheme::actions, Scheme::joint }) {
        if (to_string(scheme) == s) { return scheme; }
    }
    throw std::invalid_argument("unknown scheme '" + std::string(s) + "' (expected states, actions or joint)");
}

FrameSchema FrameSchema::for_scheme(Scheme scheme)
{
    FrameSchema schema;
    schema.scheme = scheme;
    const auto add_states = [&](int base) {
        schema.groups.push_back({ "owner", base + obs::owner, 3, false });
        schema.groups.push_back({ "kind", base + obs::kind, 8, false });
        schema.groups.push_back({ "unit_action", base + obs::action, 6, false });
        schema.numeric.push_back(base + obs::hp);
        schema.numeric.push_back(base + obs::resources);
    };
    const auto add_actions = [&](int base) {
        schema.groups.push_back({ "action_type", base + act::type, 6, false });
        schema.groups.push_back({ "direction", base + act::direction, 4, true });
        schema.groups.push_back({ "produce_kind", base + act::produce, 7, true });
        schema.numeric.push_back(base + act::dx);
        schema.numeric.push_back(base + act::dy);
    };
    switch (scheme) {
    case Scheme::states:
        add_states(0);
        schema.channels = obs::channels;
        break;
    case Scheme::actions:
        add_actions(0);
        schema.channels = act::channels;
        break;
    case Scheme::joint:
        add_states(0);
        add_actions(obs::channels);
        schema.channels = obs::channels + act::channels;
        break;
    }
    return schema;
}

}// namespace playstyle::codec
