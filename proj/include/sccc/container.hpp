#pragma once

// Binary scheme container ("SCCC") and raw-library loading.  All integers are
// little-endian fixed width.  Layout: header, then section-tagged payloads
// for the original library, precoded blocks, key pool, caches and (when a
// delivery ran) the demand plus broadcast message.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sccc/scheme.hpp"

namespace sccc {

namespace detail {

inline void put_u16(std::ostream& os, std::uint16_t v) {
    char b[2] = {char(v & 0xFF), char(v >> 8)};
    os.write(b, 2);
}
inline void put_u32(std::ostream& os, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) os.put(char(v >> (8 * i) & 0xFF));
}
inline void put_u64(std::ostream& os, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) os.put(char(v >> (8 * i) & 0xFF));
}
inline std::uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    is.read(reinterpret_cast<char*>(b), 2);
    if (!is) throw ContainerError("container truncated");
    return std::uint16_t(b[0] | (b[1] << 8));
}
inline std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        int c = is.get();
        if (c < 0) throw ContainerError("container truncated");
        v |= std::uint32_t(c) << (8 * i);
    }
    return v;
}
inline std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        int c = is.get();
        if (c < 0) throw ContainerError("container truncated");
        v |= std::uint64_t(c) << (8 * i);
    }
    return v;
}

inline void put_symbols(std::ostream& os, const std::vector<Symbol>& v) {
    put_u64(os, v.size());
    for (Symbol s : v) put_u16(os, s);
}
inline std::vector<Symbol> get_symbols(std::istream& is) {
    const std::uint64_t n = get_u64(is);
    if (n > (1ull << 32)) throw ContainerError("implausible symbol count");
    std::vector<Symbol> v(n);
    for (auto& s : v) s = get_u16(is);
    return v;
}

} // namespace detail

struct SchemeContainer {
    unsigned num_files = 0, num_users = 0, max_colluders = 0, cache_param = 0;
    long long file_bits = 0;     // padded, P*m aligned
    long long original_bits = 0; // before padding
    unsigned field_width = 0;
    std::uint32_t reduction_polynomial = 0;
    std::uint64_t seed = 0;

    FileLibrary library;
    PrecodedLibrary precoded;
    KeyPool pool;
    std::vector<UserCache> caches;
    std::optional<DemandVector> demand;
    std::optional<BroadcastMessage> message;

    SchemeParams params() const {
        return derive_params(num_files, num_users, max_colluders, cache_param, file_bits,
                             FieldSpec(field_width, reduction_polynomial));
    }
};

inline void write_container(const std::string& path, const SchemeContainer& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ContainerError("cannot open container for writing: " + path);
    using namespace detail;
    os.write("SCCC", 4);
    put_u32(os, 1); // version
    put_u32(os, c.num_files);
    put_u32(os, c.num_users);
    put_u32(os, c.max_colluders);
    put_u32(os, c.cache_param);
    put_u64(os, std::uint64_t(c.file_bits));
    put_u64(os, std::uint64_t(c.original_bits));
    put_u32(os, c.field_width);
    put_u32(os, c.reduction_polynomial);
    put_u64(os, c.seed);

    os.write("LIB0", 4);
    put_u64(os, c.library.files.size());
    for (const auto& f : c.library.files) put_symbols(os, f);

    os.write("PRE0", 4);
    put_u64(os, c.precoded.blocks.size());
    for (std::size_t n = 0; n < c.precoded.blocks.size(); ++n) {
        put_u64(os, c.precoded.blocks[n].size());
        for (const auto& b : c.precoded.blocks[n]) put_symbols(os, b);
        put_u64(os, c.precoded.y_keys[n].size());
        for (const auto& y : c.precoded.y_keys[n]) put_symbols(os, y);
    }

    os.write("KEY0", 4);
    put_u64(os, c.pool.e_keys.size());
    for (const auto& e : c.pool.e_keys) put_symbols(os, e);

    os.write("CCH0", 4);
    put_u64(os, c.caches.size());
    for (const auto& z : c.caches) {
        put_u32(os, z.user);
        put_u64(os, z.blocks.size());
        for (const auto& [key, b] : z.blocks) {
            put_u32(os, key.first);
            put_u64(os, key.second);
            put_symbols(os, b);
        }
        put_u64(os, z.e_keys.size());
        for (const auto& [j, e] : z.e_keys) {
            put_u64(os, j);
            put_symbols(os, e);
        }
    }

    if (c.demand && c.message) {
        os.write("MSG0", 4);
        put_u64(os, c.demand->demands.size());
        for (unsigned d : c.demand->demands) put_u32(os, d);
        put_u64(os, c.message->symbols.size());
        for (const auto& [j, sym] : c.message->symbols) {
            put_u64(os, j);
            put_symbols(os, sym);
        }
    }
    if (!os) throw ContainerError("write failed: " + path);
}

inline SchemeContainer read_container(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ContainerError("cannot open container: " + path);
    using namespace detail;
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "SCCC") throw ContainerError("bad magic");
    if (get_u32(is) != 1) throw ContainerError("unsupported container version");

    SchemeContainer c;
    c.num_files = get_u32(is);
    c.num_users = get_u32(is);
    c.max_colluders = get_u32(is);
    c.cache_param = get_u32(is);
    c.file_bits = (long long)get_u64(is);
    c.original_bits = (long long)get_u64(is);
    c.field_width = get_u32(is);
    c.reduction_polynomial = get_u32(is);
    c.seed = get_u64(is);

    char tag[4];
    while (is.read(tag, 4)) {
        const std::string t(tag, 4);
        if (t == "LIB0") {
            c.library.files.resize(get_u64(is));
            for (auto& f : c.library.files) f = get_symbols(is);
        } else if (t == "PRE0") {
            const std::uint64_t n_files = get_u64(is);
            c.precoded.blocks.resize(n_files);
            c.precoded.y_keys.resize(n_files);
            for (std::uint64_t n = 0; n < n_files; ++n) {
                c.precoded.blocks[n].resize(get_u64(is));
                for (auto& b : c.precoded.blocks[n]) b = get_symbols(is);
                c.precoded.y_keys[n].resize(get_u64(is));
                for (auto& y : c.precoded.y_keys[n]) y = get_symbols(is);
            }
        } else if (t == "KEY0") {
            c.pool.e_keys.resize(get_u64(is));
            for (auto& e : c.pool.e_keys) e = get_symbols(is);
        } else if (t == "CCH0") {
            c.caches.resize(get_u64(is));
            for (auto& z : c.caches) {
                z.user = get_u32(is);
                const std::uint64_t nb = get_u64(is);
                for (std::uint64_t i = 0; i < nb; ++i) {
                    const unsigned file = get_u32(is);
                    const std::uint64_t subset = get_u64(is);
                    z.blocks[{file, subset}] = get_symbols(is);
                }
                const std::uint64_t ne = get_u64(is);
                for (std::uint64_t i = 0; i < ne; ++i) {
                    const std::uint64_t j = get_u64(is);
                    z.e_keys[j] = get_symbols(is);
                }
            }
        } else if (t == "MSG0") {
            DemandVector d;
            d.demands.resize(get_u64(is));
            for (auto& v : d.demands) v = get_u32(is);
            c.demand = d;
            BroadcastMessage m;
            const std::uint64_t ns = get_u64(is);
            for (std::uint64_t i = 0; i < ns; ++i) {
                const std::uint64_t j = get_u64(is);
                m.symbols[j] = get_symbols(is);
            }
            c.message = m;
        } else {
            throw ContainerError("unknown section tag: " + t);
        }
    }
    return c;
}

// --- raw library input: concatenated file bytes + JSON sidecar -------------

struct RawLibrary {
    std::vector<std::vector<std::uint8_t>> files;
};

inline RawLibrary read_raw_library(const std::string& raw_path, const std::string& sidecar_path) {
    std::ifstream sc(sidecar_path);
    if (!sc) throw ContainerError("cannot open sidecar: " + sidecar_path);
    nlohmann::json j;
    sc >> j;
    if (!j.contains("file_lengths") || !j["file_lengths"].is_array())
        throw ContainerError("sidecar must contain a file_lengths array");
    std::ifstream raw(raw_path, std::ios::binary);
    if (!raw) throw ContainerError("cannot open raw library: " + raw_path);
    RawLibrary lib;
    for (const auto& len : j["file_lengths"]) {
        std::vector<std::uint8_t> bytes(len.get<std::size_t>());
        raw.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
        if (!raw) throw ContainerError("raw library shorter than the sidecar claims");
        lib.files.push_back(std::move(bytes));
    }
    return lib;
}

// Packs each file's bits (MSB-first within a byte) into m-bit symbols,
// zero-padded up to F = P*m-aligned bits.
inline FileLibrary to_symbols(const RawLibrary& raw, const SchemeParams& params) {
    const unsigned m = params.spec().width();
    const std::size_t total_symbols =
        std::size_t(params.secret_count * params.symbols_per_subfile());
    FileLibrary lib;
    for (const auto& bytes : raw.files) {
        if ((long long)bytes.size() * 8 > params.file_bits)
            throw ShapeMismatch("file longer than the scheme's file size");
        std::vector<Symbol> syms(total_symbols, 0);
        for (std::size_t s = 0; s < total_symbols; ++s) {
            Symbol v = 0;
            for (unsigned b = 0; b < m; ++b) {
                const std::size_t bit = s * m + b;
                const std::size_t byte = bit / 8;
                const unsigned in_bit = 7 - unsigned(bit % 8);
                const unsigned val = byte < bytes.size() ? (bytes[byte] >> in_bit) & 1u : 0u;
                v = Symbol((v << 1) | val);
            }
            syms[s] = v;
        }
        lib.files.push_back(std::move(syms));
    }
    if (lib.files.size() != params.num_files)
        throw ShapeMismatch("library file count does not match the scheme");
    return lib;
}

} // namespace sccc
