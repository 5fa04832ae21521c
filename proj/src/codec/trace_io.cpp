/*
 * Binary trace shard format, all integers little-endian:
 *
 *   shard   := "PSTR" u32:version(=1) u32:trace_count trace*
 *   trace   := str:match_id u8:map u8:pov str:agent str:opponent i32:repeat
 *              u16:width u16:height u32:frame_count frame*
 *   frame   := i32:tick u16:unit_count unit* u16:command_count command*
 *   unit    := i32:id u8:owner u8:kind i16:x i16:y i16:hp i16:carried u8:busy
 *              [busy != 0: u8:type u8:dir i8:kind u8:has_offset i8:dx i8:dy i32:remaining]
 *   command := i32:unit u8:action u8:dir i8:kind u8:has_offset i8:dx i8:dy
 *   str     := u16:length bytes
 *
 * Enumerations use their numeric values; an absent direction or produce kind
 * is stored as 255 / -1.
 */
#include "playstyle/codec/dataset.hpp"

#include <bit>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <openssl/evp.h>
#include <ostream>

namespace playstyle::codec {

static_assert(std::endian::native == std::endian::little, "trace shards assume a little-endian host");

namespace {

    constexpr std::uint32_t kVersion = 1;
    constexpr std::uint8_t kNone = 255;

    class Writer
    {
      public:
        explicit Writer(std::ostream &os) : os_(os) {}

        template<typename T> void put(T value)
        {
            char bytes[sizeof(T)];
            std::memcpy(bytes, &value, sizeof(T));
            os_.write(bytes, sizeof(T));
        }

        void str(const std::string &s)
        {
            if (s.size() > 0xFFFF) { throw CodecError("string too long for trace shard"); }
            put<std::uint16_t>(static_cast<std::uint16_t>(s.size()));
            os_.write(s.data(), static_cast<std::streamsize>(s.size()));
        }

      private:
        std::ostream &os_;
    };

    class Reader
    {
      public:
        explicit Reader(std::istream &is) : is_(is) {}

        template<typename T> T get()
        {
            char bytes[sizeof(T)];
            if (!is_.read(bytes, sizeof(T))) { throw CodecError("truncated trace shard"); }
            T value;
            std::memcpy(&value, bytes, sizeof(T));
            return value;
        }

        std::string str()
        {
            const auto n = get<std::uint16_t>();
            std::string s(n, '\0');
            if (n > 0 && !is_.read(s.data(), n)) { throw CodecError("truncated trace shard"); }
            return s;
        }

      private:
        std::istream &is_;
    };

    template<typename E> std::uint8_t opt_enum(const std::optional<E> &v)
    {
        return v ? static_cast<std::uint8_t>(*v) : kNone;
    }

    template<typename E> std::optional<E> read_opt_enum(std::uint8_t v)
    {
        if (v == kNone) { return std::nullopt; }
        return static_cast<E>(v);
    }

    void put_action(Writer &w,
      engine::ActionType type,
      const std::optional<engine::Direction> &dir,
      const std::optional<engine::UnitKind> &kind,
      const std::optional<engine::Offset> &offset)
    {
        w.put<std::uint8_t>(static_cast<std::uint8_t>(type));
        w.put<std::uint8_t>(opt_enum(dir));
        w.put<std::int8_t>(kind ? static_cast<std::int8_t>(*kind) : std::int8_t{ -1 });
        w.put<std::uint8_t>(offset ? 1 : 0);
        w.put<std::int8_t>(static_cast<std::int8_t>(offset ? offset->dx : 0));
        w.put<std::int8_t>(static_cast<std::int8_t>(offset ? offset->dy : 0));
    }

    template<typename Target> void get_action(Reader &r, Target &t, engine::ActionType &type)
    {
        type = static_cast<engine::ActionType>(r.get<std::uint8_t>());
        t.direction = read_opt_enum<engine::Direction>(r.get<std::uint8_t>());
        const auto kind = r.get<std::int8_t>();
        if (kind >= 0) { t.produce_kind = static_cast<engine::UnitKind>(kind); }
        const bool has_offset = r.get<std::uint8_t>() != 0;
        const int dx = r.get<std::int8_t>();
        const int dy = r.get<std::int8_t>();
        if (has_offset) { t.attack_offset = engine::Offset{ dx, dy }; }
    }

}// namespace

void write_traces(std::ostream &os, const std::vector<const PlayTrace *> &traces)
{
    Writer w(os);
    os.write("PSTR", 4);
    w.put<std::uint32_t>(kVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(traces.size()));
    for (const auto *t : traces) {
        w.str(t->match_id);
        w.put<std::uint8_t>(static_cast<std::uint8_t>(t->map_variant));
        w.put<std::uint8_t>(static_cast<std::uint8_t>(t->pov));
        w.str(t->agent);
        w.str(t->opponent);
        w.put<std::int32_t>(t->repeat);
        w.put<std::uint16_t>(static_cast<std::uint16_t>(t->width));
        w.put<std::uint16_t>(static_cast<std::uint16_t>(t->height));
        w.put<std::uint32_t>(static_cast<std::uint32_t>(t->frames.size()));
        for (const auto &f : t->frames) {
            w.put<std::int32_t>(f.tick);
            w.put<std::uint16_t>(static_cast<std::uint16_t>(f.units.size()));
            for (const auto &u : f.units) {
                w.put<std::int32_t>(u.id);
                w.put<std::uint8_t>(static_cast<std::uint8_t>(u.owner));
                w.put<std::uint8_t>(static_cast<std::uint8_t>(u.kind));
                w.put<std::int16_t>(static_cast<std::int16_t>(u.pos.x));
                w.put<std::int16_t>(static_cast<std::int16_t>(u.pos.y));
                w.put<std::int16_t>(static_cast<std::int16_t>(u.hp));
                w.put<std::int16_t>(static_cast<std::int16_t>(u.carried));
                w.put<std::uint8_t>(u.busy ? 1 : 0);
                if (u.busy) {
                    put_action(w, u.busy->type, u.busy->direction, u.busy->produce_kind, u.busy->attack_offset);
                    w.put<std::int32_t>(u.busy->remaining);
                }
            }
            w.put<std::uint16_t>(static_cast<std::uint16_t>(f.commands.size()));
            for (const auto &c : f.commands) {
                w.put<std::int32_t>(c.unit_id);
                put_action(w, c.action, c.direction, c.produce_kind, c.attack_offset);
            }
        }
    }
    if (!os) { throw CodecError("failed to write trace shard"); }
}

std::vector<PlayTrace> read_traces(std::istream &is)
{
    Reader r(is);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "PSTR", 4) != 0) { throw CodecError("not a trace shard"); }
    if (const auto v = r.get<std::uint32_t>(); v != kVersion) {
        throw CodecError(fmt::format("unsupported trace shard version {}", v));
    }
    const auto n = r.get<std::uint32_t>();
    std::vector<PlayTrace> traces(n);
    for (auto &t : traces) {
        t.match_id = r.str();
        t.map_variant = static_cast<char>(r.get<std::uint8_t>());
        t.pov = static_cast<engine::Player>(r.get<std::uint8_t>());
        t.agent = r.str();
        t.opponent = r.str();
        t.repeat = r.get<std::int32_t>();
        t.width = r.get<std::uint16_t>();
        t.height = r.get<std::uint16_t>();
        t.frames.resize(r.get<std::uint32_t>());
        for (auto &f : t.frames) {
            f.tick = r.get<std::int32_t>();
            f.units.resize(r.get<std::uint16_t>());
            for (auto &u : f.units) {
                u.id = r.get<std::int32_t>();
                u.owner = static_cast<engine::Player>(r.get<std::uint8_t>());
                u.kind = static_cast<engine::UnitKind>(r.get<std::uint8_t>());
                u.pos.x = r.get<std::int16_t>();
                u.pos.y = r.get<std::int16_t>();
                u.hp = r.get<std::int16_t>();
                u.carried = r.get<std::int16_t>();
                if (r.get<std::uint8_t>() != 0) {
                    engine::BusyAction b;
                    get_action(r, b, b.type);
                    b.remaining = r.get<std::int32_t>();
                    u.busy = b;
                }
            }
            f.commands.resize(r.get<std::uint16_t>());
            for (auto &c : f.commands) {
                c.unit_id = r.get<std::int32_t>();
                get_action(r, c, c.action);
            }
        }
    }
    return traces;
}

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int size = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::string hex;
    hex.reserve(size * 2);
    for (unsigned int i = 0; i < size; ++i) { hex += fmt::format("{:02x}", digest[i]); }
    return hex;
}

std::string sha256_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw std::runtime_error("cannot open " + path.string()); }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

}// namespace playstyle::codec
