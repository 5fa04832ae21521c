#include "playstyle/pipeline/artifacts.hpp"

#include "playstyle/codec/dataset.hpp"
#include "playstyle/pipeline/config.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace playstyle::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "matrix files are little-endian");

std::optional<json> read_manifest(const fs::path &stage_dir)
{
    const auto path = stage_dir / kManifest;
    std::ifstream in(path);
    if (!in) { return std::nullopt; }
    try {
        return json::parse(in);
    } catch (const json::parse_error &) {
        return std::nullopt;
    }
}

json require_manifest(const fs::path &stage_dir, const std::string &producer)
{
    auto m = read_manifest(stage_dir);
    if (!m) {
        throw PipelineError("missing " + (stage_dir / kManifest).string() + ": run `" + producer + "` first");
    }
    return *m;
}

bool up_to_date(const fs::path &stage_dir, const std::string &key)
{
    const auto m = read_manifest(stage_dir);
    if (!m || m->value("key", std::string{}) != key || !m->contains("outputs")) { return false; }
    for (const auto &[name, hash] : (*m)["outputs"].items()) {
        const auto path = stage_dir / name;
        if (!fs::exists(path) || codec::sha256_file(path) != hash.get<std::string>()) { return false; }
    }
    return true;
}

json write_manifest(const fs::path &stage_dir,
  const std::string &stage,
  const std::string &key,
  const std::vector<std::string> &outputs,
  const json &extra)
{
    json m = extra;
    m["stage"] = stage;
    m["key"] = key;
    json files = json::object();
    for (const auto &name : outputs) { files[name] = codec::sha256_file(stage_dir / name); }
    m["outputs"] = files;
    write_text(stage_dir / kManifest, m.dump(2) + "\n");
    return m;
}

std::string manifest_hash(const fs::path &stage_dir) { return codec::sha256_file(stage_dir / kManifest); }

void write_text(const fs::path &path, const std::string &text)
{
    fs::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) { throw PipelineError("cannot write " + path.string()); }
        out << text;
        if (!out) { throw PipelineError("cannot write " + path.string()); }
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw PipelineError("cannot read " + path.string()); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

    constexpr char kMagic[4] = { 'P', 'S', 'E', 'M' };
    constexpr std::uint32_t kVersion = 1;

    template<typename T> void put(std::string &out, T value)
    {
        char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        out.append(bytes, sizeof(T));
    }

    template<typename T> T get(const std::string &in, std::size_t &pos, const fs::path &path)
    {
        if (pos + sizeof(T) > in.size()) { throw PipelineError("truncated matrix file " + path.string()); }
        T value;
        std::memcpy(&value, in.data() + pos, sizeof(T));
        pos += sizeof(T);
        return value;
    }

}// namespace

void write_matrix(const fs::path &path, const Eigen::MatrixXd &m)
{
    std::string out(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) { put<double>(out, m(r, c)); }
    }
    write_text(path, out);
}

Eigen::MatrixXd read_matrix(const fs::path &path)
{
    const auto in = read_text(path);
    if (in.size() < 4 || std::memcmp(in.data(), kMagic, 4) != 0) {
        throw PipelineError("not a matrix file: " + path.string());
    }
    std::size_t pos = 4;
    if (get<std::uint32_t>(in, pos, path) != kVersion) {
        throw PipelineError("unsupported matrix version: " + path.string());
    }
    const auto rows = get<std::uint64_t>(in, pos, path);
    const auto cols = get<std::uint32_t>(in, pos, path);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) { m(r, c) = get<double>(in, pos, path); }
    }
    if (pos != in.size()) { throw PipelineError("trailing bytes in matrix file " + path.string()); }
    return m;
}

json rows_to_json(const std::vector<cluster::RowMeta> &rows)
{
    json out = json::array();
    for (const auto &r : rows) {
        out.push_back(json{ { "sample_id", r.sample_id },
          { "trace_id", r.trace_id },
          { "label", r.label },
          { "map", std::string(1, r.map) },
          { "side", std::string(engine::to_string(r.side)) },
          { "slot", r.slot },
          { "split", r.split } });
    }
    return out;
}

std::vector<cluster::RowMeta> rows_from_json(const json &j)
{
    std::vector<cluster::RowMeta> rows;
    rows.reserve(j.size());
    for (const auto &r : j) {
        cluster::RowMeta m;
        m.sample_id = r.at("sample_id").get<std::string>();
        m.trace_id = r.at("trace_id").get<std::string>();
        m.label = r.at("label").get<std::string>();
        m.map = r.at("map").get<std::string>().at(0);
        m.side = engine::parse_player(r.at("side").get<std::string>());
        m.slot = r.at("slot").get<int>();
        m.split = r.at("split").get<std::string>();
        rows.push_back(std::move(m));
    }
    return rows;
}

}// namespace playstyle::pipeline
