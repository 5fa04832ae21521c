#pragma once

#include "playstyle/codec/trace.hpp"

#include <array>
#include <string>
#include <vector>

namespace playstyle::codec {

inline constexpr int kSequenceLength = 32;
inline constexpr int kHandcraftedSize = 18;

/// A fixed-length window of a trace with dense per-frame tensors.
struct SequenceSample {
    std::string trace_id;
    std::string label;
    char map_variant = 'A';
    engine::Player side = engine::Player::p1;
    int slot = 0;// window index within the trace
    int offset = 0;// first frame
    std::vector<ObservationTensor> observations;
    std::vector<ActionTensor> actions;

    [[nodiscard]] std::string sample_id() const;
    [[nodiscard]] int length() const noexcept { return static_cast<int>(actions.size()); }
};

[[nodiscard]] std::string sample_id(const std::string &trace_id, int slot);

/// Start frames of every full window: 0, stride, 2*stride, ...
[[nodiscard]] std::vector<int> window_offsets(int frames, int length, int stride);

/// Materialises the window starting at `offset`; `slot` is stored as given.
[[nodiscard]] SequenceSample make_sample(const PlayTrace &trace, int offset, int slot, int length, const CodecConfig &config = {});

/// All full windows of `trace`; slot k starts at frame k*stride.
[[nodiscard]] std::vector<SequenceSample> extract_subsequences(const PlayTrace &trace,
  int length = kSequenceLength,
  int stride = 8,
  const CodecConfig &config = {});

/// Mirrors every frame of a sample; labels and ids are kept.
[[nodiscard]] SequenceSample augment_mirror(const SequenceSample &sample, bool flip_h, bool flip_v, const CodecConfig &config = {});

/// Feature layout: 5 action-type frequencies (move, harvest, return, produce,
/// attack), 4 direction frequencies (N, E, S, W), 7 produce-kind frequencies,
/// then the sums of raw dx and dy over attack commands. A frequency group is
/// all-zero when nothing in the window falls into it.
using HandcraftedFeatures = std::array<double, kHandcraftedSize>;

[[nodiscard]] HandcraftedFeatures handcrafted_features(const SequenceSample &sample, const CodecConfig &config = {});

}// namespace playstyle::codec
