#include "playstyle/codec/sequence.hpp"

#include <fmt/format.h>
#include <stdexcept>

namespace playstyle::codec {

std::string sample_id(const std::string &trace_id, int slot) { return fmt::format("{}.s{}", trace_id, slot); }

std::string SequenceSample::sample_id() const { return codec::sample_id(trace_id, slot); }

std::vector<int> window_offsets(int frames, int length, int stride)
{
    if (length <= 0 || stride <= 0) { throw std::invalid_argument("window length and stride must be positive"); }
    std::vector<int> offsets;
    for (int start = 0; start + length <= frames; start += stride) { offsets.push_back(start); }
    return offsets;
}

SequenceSample make_sample(const PlayTrace &trace, int offset, int slot, int length, const CodecConfig &config)
{
    if (offset < 0 || offset + length > static_cast<int>(trace.frames.size())) {
        throw std::out_of_range(fmt::format("window [{}, {}) outside trace {} of {} frames",
          offset, offset + length, trace.trace_id(), trace.frames.size()));
    }
    SequenceSample s;
    s.trace_id = trace.trace_id();
    s.label = trace.agent;
    s.map_variant = trace.map_variant;
    s.side = trace.pov;
    s.slot = slot;
    s.offset = offset;
    s.observations.reserve(static_cast<std::size_t>(length));
    s.actions.reserve(static_cast<std::size_t>(length));
    for (int i = offset; i < offset + length; ++i) {
        s.observations.push_back(frame_observation(trace, static_cast<std::size_t>(i), config));
        s.actions.push_back(frame_actions(trace, static_cast<std::size_t>(i), config));
    }
    return s;
}

std::vector<SequenceSample> extract_subsequences(const PlayTrace &trace, int length, int stride, const CodecConfig &config)
{
    std::vector<SequenceSample> out;
    int slot = 0;
    for (const int offset : window_offsets(static_cast<int>(trace.frames.size()), length, stride)) {
        out.push_back(make_sample(trace, offset, slot++, length, config));
    }
    return out;
}

SequenceSample augment_mirror(const SequenceSample &sample, bool flip_h, bool flip_v, const CodecConfig &config)
{
    SequenceSample out = sample;
    for (auto &o : out.observations) { o = mirror_observation(o, flip_h, flip_v); }
    for (auto &a : out.actions) { a = mirror_actions(a, flip_h, flip_v, config.attack_range()); }
    return out;
}

HandcraftedFeatures handcrafted_features(const SequenceSample &sample, const CodecConfig &config)
{
    HandcraftedFeatures f{};
    const int range = config.attack_range();
    std::array<double, 5> types{};
    std::array<double, 4> dirs{};
    std::array<double, 7> kinds{};
    double dx = 0.0;
    double dy = 0.0;
    for (const auto &t : sample.actions) {
        for (int y = 0; y < t.height(); ++y) {
            for (int x = 0; x < t.width(); ++x) {
                if (t.at(y, x, act::type) != 0.0F) { continue; }
                for (int a = 1; a < 6; ++a) { types[static_cast<std::size_t>(a - 1)] += t.at(y, x, act::type + a); }
                for (int d = 0; d < 4; ++d) { dirs[static_cast<std::size_t>(d)] += t.at(y, x, act::direction + d); }
                for (int k = 0; k < 7; ++k) { kinds[static_cast<std::size_t>(k)] += t.at(y, x, act::produce + k); }
                dx += unscale_offset(t.at(y, x, act::dx), range);
                dy += unscale_offset(t.at(y, x, act::dy), range);
            }
        }
    }
    std::size_t i = 0;
    const auto emit = [&](const auto &counts) {
        double total = 0.0;
        for (const double c : counts) { total += c; }
        for (const double c : counts) { f[i++] = total > 0.0 ? c / total : 0.0; }
    };
    emit(types);
    emit(dirs);
    emit(kinds);
    f[i++] = dx;
    f[i] = dy;
    return f;
}

}// namespace playstyle::codec
