#pragma once

#include "playstyle/codec/sequence.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace playstyle::codec {

enum class Split { train, val, test };

[[nodiscard]] std::string_view to_string(Split s) noexcept;
[[nodiscard]] Split parse_split(std::string_view s);

/// How traces are assigned to splits and windowed. Within every match-up
/// (map, p1 agent, p2 agent) on a training map the highest `val_repeats`
/// repeats go to validation and the rest to training; traces on test maps go
/// to test. Traces on other maps are dropped.
struct SplitPolicy {
    std::string train_maps = "ABCDEFGHIJK";
    std::string test_maps = "L";
    int val_repeats = 2;
    int min_repeats = 10;
    int length = kSequenceLength;
    int train_stride = 8;
    int eval_stride = 32;

    [[nodiscard]] int stride(Split s) const noexcept { return s == Split::train ? train_stride : eval_stride; }
};

void to_json(nlohmann::json &j, const SplitPolicy &p);
void from_json(const nlohmann::json &j, SplitPolicy &p);

/// A window of a trace, materialised on demand.
struct SampleRef {
    std::size_t trace = 0;
    int offset = 0;
    int slot = 0;
    Split split = Split::train;
};

struct Dataset {
    SplitPolicy policy;
    CodecConfig config;
    std::vector<PlayTrace> traces;
    std::vector<Split> trace_split;
    std::vector<SampleRef> samples;// ordered by trace, then slot

    [[nodiscard]] std::vector<SampleRef> refs(Split split) const;
    [[nodiscard]] SequenceSample materialize(const SampleRef &ref) const;
    [[nodiscard]] std::string sample_id(const SampleRef &ref) const;
    [[nodiscard]] std::size_t count(Split split) const noexcept;
};

/// Splits and windows the traces. Throws CodecError listing every training-map
/// match-up with fewer than `min_repeats` repeats.
[[nodiscard]] Dataset build_dataset(std::vector<PlayTrace> traces, const SplitPolicy &policy = {}, const CodecConfig &config = {});

inline constexpr const char *kDatasetFormat = "playstyle-dataset/1";
inline constexpr const char *kDatasetManifest = "manifest.json";

/// Writes the binary trace shards plus manifest.json into `dir`.
/// Returns the manifest that was written.
nlohmann::json write_dataset(const std::filesystem::path &dir, const Dataset &dataset, std::size_t traces_per_shard = 64);

/// Reads a dataset written by write_dataset, verifying shard hashes.
[[nodiscard]] Dataset read_dataset(const std::filesystem::path &dir, const CodecConfig &config = {});

/// Binary trace serialisation (format documented in trace_io.cpp).
void write_traces(std::ostream &os, const std::vector<const PlayTrace *> &traces);
[[nodiscard]] std::vector<PlayTrace> read_traces(std::istream &is);

/// Lower-case hex SHA-256 of a byte string or a file.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_file(const std::filesystem::path &path);

}// namespace playstyle::codec
