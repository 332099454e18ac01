#pragma once

// The end-to-end secure coded caching scheme: parameter derivation, file
// precoding through the (G,P,Q) secret sharing codec, cache placement,
// key-encrypted broadcast delivery and per-user decoding.
//
// Users and files are 0-based here.  t-subsets of the user set index the file
// blocks in lexicographic order; (t+1)-subsets index the unique keys and the
// broadcast symbols.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sccc/combinatorics.hpp"
#include "sccc/field.hpp"
#include "sccc/rational.hpp"
#include "sccc/rng.hpp"
#include "sccc/secret_sharing.hpp"

namespace sccc {

class SchemeParams {
public:
    unsigned num_files;    // N
    unsigned num_users;    // K
    unsigned max_colluders; // l
    unsigned cache_param;  // t
    long long file_bits;   // F
    long long secret_count; // P = C(K-l, t)
    long long key_count;    // Q = C(K, t) - C(K-l, t)
    long long share_count;  // G = C(K, t)
    SubsetIndex t_subsets;
    SubsetIndex t1_subsets;
    SharingParams sharing;

    static long long max_cache_param(unsigned k, unsigned l) {
        const long long v = ((long long)k + l) / l - 2; // ceil((K+1)/l) - 2
        return v > 0 ? v : 0;
    }

    long long subfile_bits() const { return file_bits / secret_count; }
    long long symbols_per_subfile() const {
        return file_bits / (secret_count * (long long)sharing.spec.width());
    }
    const FieldSpec& spec() const { return sharing.spec; }

    SchemeParams(unsigned n, unsigned k, unsigned l, unsigned t, long long f,
                 FieldSpec field_spec)
        : num_files(n), num_users(k), max_colluders(l), cache_param(t), file_bits(f),
          secret_count(binomial((long long)k - l, t)),
          key_count(binomial(k, t) - binomial((long long)k - l, t)),
          share_count(binomial(k, t)),
          t_subsets(k, t), t1_subsets(k, t + 1),
          sharing(make_canonical_sharing(std::size_t(secret_count), std::size_t(key_count),
                                         field_spec)) {}
};

enum class Alignment { require, pad };

inline SchemeParams derive_params(unsigned n, unsigned k, unsigned l, unsigned t, long long f,
                                  std::optional<FieldSpec> field_override = std::nullopt,
                                  Alignment alignment = Alignment::require) {
    if (n < 1 || k < 1) throw InvalidCollusion("need at least one file and one user");
    if (l < 1 || l > k - 1) throw InvalidCollusion("colluder count must lie in [1, K-1]");
    if (t > SchemeParams::max_cache_param(k, l))
        throw InvalidT("caching parameter exceeds max(ceil((K+1)/l)-2, 0)");
    const long long g = binomial(k, t);
    FieldSpec spec = [&] {
        if (field_override) {
            if ((long long)field_override->order() < 2 * g)
                throw FieldTooSmall("field override too small for 2^m >= 2G");
            return *field_override;
        }
        unsigned m = 1;
        while (m <= 16 && (1ll << m) < 2 * g) ++m;
        if (m > 16) throw FieldTooSmall("no built-in field satisfies 2^m >= 2G");
        return FieldSpec(m);
    }();
    const long long p = binomial((long long)k - l, t);
    const long long align = p * spec.width();
    if (f <= 0) {
        if (alignment == Alignment::require) throw AlignmentError("file size must be positive");
        f = align;
    } else if (f % align != 0) {
        if (alignment == Alignment::require)
            throw AlignmentError("file size must be a multiple of P*m bits");
        f += align - f % align;
    }
    return SchemeParams(n, k, l, t, f, spec);
}

struct FileLibrary {
    // files[n] holds P * (symbols per subfile) field symbols; subfile p is the
    // contiguous slice starting at p * symbols_per_subfile.
    std::vector<std::vector<Symbol>> files;
};

inline FileLibrary random_library(const SchemeParams& params, StreamRng& rng) {
    FileLibrary lib;
    const std::size_t len = std::size_t(params.secret_count * params.symbols_per_subfile());
    lib.files.resize(params.num_files);
    for (auto& f : lib.files) {
        f.resize(len);
        for (auto& s : f) s = rng.symbol(params.spec());
    }
    return lib;
}

struct PrecodedLibrary {
    // blocks[n][i]: share of file n for t-subset index i, subfile-sized.
    std::vector<std::vector<std::vector<Symbol>>> blocks;
    // y_keys[n][q]: the encryption keys consumed to make those shares.
    std::vector<std::vector<std::vector<Symbol>>> y_keys;
};

struct KeyPool {
    // e_keys[j]: unique key for (t+1)-subset index j, subfile-sized.
    std::vector<std::vector<Symbol>> e_keys;
};

struct UserCache {
    unsigned user = 0;
    std::map<std::pair<unsigned, std::size_t>, std::vector<Symbol>> blocks; // (file, t-subset)
    std::map<std::size_t, std::vector<Symbol>> e_keys;                      // (t+1)-subset
};

struct DemandVector {
    std::vector<unsigned> demands; // demands[k] in [0, N)
};

struct BroadcastMessage {
    std::map<std::size_t, std::vector<Symbol>> symbols; // keyed by (t+1)-subset index
};

inline void check_demand(const DemandVector& demand, const SchemeParams& params) {
    if (demand.demands.size() != params.num_users)
        throw InvalidDemand("demand vector must have one entry per user");
    for (unsigned d : demand.demands)
        if (d >= params.num_files) throw InvalidDemand("demanded file index out of range");
}

inline PrecodedLibrary precode(const FileLibrary& library, const SchemeParams& params,
                               StreamRng& rng) {
    const std::size_t spc = std::size_t(params.symbols_per_subfile());
    const std::size_t p_cnt = std::size_t(params.secret_count);
    const std::size_t q_cnt = std::size_t(params.key_count);
    const std::size_t g = std::size_t(params.share_count);
    if (library.files.size() != params.num_files)
        throw ShapeMismatch("library file count does not match the scheme");
    for (const auto& f : library.files)
        if (f.size() != p_cnt * spc) throw ShapeMismatch("library file length does not match F");

    PrecodedLibrary out;
    out.blocks.resize(params.num_files);
    out.y_keys.resize(params.num_files);
    std::vector<Symbol> secrets(p_cnt), keys(q_cnt);
    for (unsigned n = 0; n < params.num_files; ++n) {
        auto& ykeys = out.y_keys[n];
        ykeys.resize(q_cnt);
        for (auto& y : ykeys) {
            y.resize(spc);
            for (auto& s : y) s = rng.symbol(params.spec());
        }
        auto& blocks = out.blocks[n];
        blocks.assign(g, std::vector<Symbol>(spc));
        for (std::size_t s = 0; s < spc; ++s) {
            for (std::size_t p = 0; p < p_cnt; ++p) secrets[p] = library.files[n][p * spc + s];
            for (std::size_t q = 0; q < q_cnt; ++q) keys[q] = ykeys[q][s];
            ShareStripe stripe = make_shares(secrets, keys, params.sharing);
            for (std::size_t i = 0; i < g; ++i) blocks[i][s] = stripe[i];
        }
    }
    return out;
}

inline KeyPool generate_key_pool(const SchemeParams& params, StreamRng& rng) {
    KeyPool pool;
    const std::size_t spc = std::size_t(params.symbols_per_subfile());
    pool.e_keys.resize(params.t1_subsets.size());
    for (auto& e : pool.e_keys) {
        e.resize(spc);
        for (auto& s : e) s = rng.symbol(params.spec());
    }
    return pool;
}

inline std::vector<UserCache> place(const PrecodedLibrary& precoded, const KeyPool& pool,
                                    const SchemeParams& params) {
    std::vector<UserCache> caches(params.num_users);
    for (unsigned k = 0; k < params.num_users; ++k) {
        caches[k].user = k;
        for (std::size_t i = 0; i < params.t_subsets.size(); ++i) {
            if (!(params.t_subsets.mask(i) >> k & 1u)) continue;
            for (unsigned n = 0; n < params.num_files; ++n)
                caches[k].blocks[{n, i}] = precoded.blocks[n][i];
        }
        for (std::size_t j = 0; j < params.t1_subsets.size(); ++j)
            if (params.t1_subsets.mask(j) >> k & 1u) caches[k].e_keys[j] = pool.e_keys[j];
    }
    return caches;
}

inline BroadcastMessage deliver(const DemandVector& demand, const PrecodedLibrary& precoded,
                                const KeyPool& pool, const SchemeParams& params) {
    check_demand(demand, params);
    const std::size_t spc = std::size_t(params.symbols_per_subfile());
    BroadcastMessage msg;
    for (std::size_t j = 0; j < params.t1_subsets.size(); ++j) {
        std::vector<Symbol> sym = pool.e_keys[j];
        for (unsigned u : mask_elements(params.t1_subsets.mask(j))) {
            const std::size_t ti = params.t_subsets.index(params.t1_subsets.mask(j) & ~(1u << u));
            const auto& block = precoded.blocks[demand.demands[u]][ti];
            for (std::size_t s = 0; s < spc; ++s) sym[s] ^= block[s];
        }
        msg.symbols[j] = std::move(sym);
    }
    return msg;
}

inline std::vector<Symbol> decode(unsigned k, const DemandVector& demand, const UserCache& cache,
                                  const BroadcastMessage& message, const SchemeParams& params) {
    check_demand(demand, params);
    if (k >= params.num_users) throw IndexOutOfRange("user index out of range");
    const std::size_t spc = std::size_t(params.symbols_per_subfile());
    const std::size_t g = std::size_t(params.share_count);
    const unsigned want = demand.demands[k];

    // Assemble the full G-share stripe of the wanted file.
    std::vector<std::vector<Symbol>> shares(g);
    for (std::size_t i = 0; i < g; ++i) {
        const std::uint32_t t_mask = params.t_subsets.mask(i);
        if (t_mask >> k & 1u) {
            auto it = cache.blocks.find({want, i});
            if (it == cache.blocks.end()) throw DecodeFailure("cached block missing");
            shares[i] = it->second;
            continue;
        }
        // Peel the wanted block out of the broadcast symbol for T u {k}.
        const std::uint32_t t1_mask = t_mask | (1u << k);
        const std::size_t j = params.t1_subsets.index(t1_mask);
        auto xit = message.symbols.find(j);
        if (xit == message.symbols.end()) throw DecodeFailure("broadcast symbol missing");
        std::vector<Symbol> sym = xit->second;
        auto eit = cache.e_keys.find(j);
        if (eit == cache.e_keys.end()) throw DecodeFailure("unique key missing");
        for (std::size_t s = 0; s < spc; ++s) sym[s] ^= eit->second[s];
        for (unsigned u : mask_elements(t_mask)) {
            const std::size_t ui = params.t_subsets.index(t1_mask & ~(1u << u));
            auto bit = cache.blocks.find({demand.demands[u], ui});
            if (bit == cache.blocks.end()) throw DecodeFailure("interference block missing");
            for (std::size_t s = 0; s < spc; ++s) sym[s] ^= bit->second[s];
        }
        shares[i] = std::move(sym);
    }

    // Feed every stripe through the sharing codec to recover the subfiles.
    std::vector<Symbol> file(std::size_t(params.secret_count) * spc);
    ShareStripe stripe(g);
    for (std::size_t s = 0; s < spc; ++s) {
        for (std::size_t i = 0; i < g; ++i) stripe[i] = shares[i][s];
        auto [secrets, keys] = reconstruct(stripe, params.sharing);
        (void)keys;
        for (std::size_t p = 0; p < secrets.size(); ++p) file[p * spc + s] = secrets[p];
    }
    return file;
}

// Eqs for the scheme's memory and communication load, as exact rationals.
inline std::pair<Rational, Rational> rate_pair(const SchemeParams& params) {
    const long long n = params.num_files;
    const long long k = params.num_users;
    const long long t = params.cache_param;
    const long long p = params.secret_count;
    const Rational m(n * binomial(k - 1, t - 1) + binomial(k - 1, t), p);
    const Rational r(binomial(k, t + 1), p);
    return {m, r};
}

inline long long cache_bits(const UserCache& cache, const SchemeParams& params) {
    return (long long)(cache.blocks.size() + cache.e_keys.size()) * params.subfile_bits();
}

inline long long message_bits(const BroadcastMessage& msg, const SchemeParams& params) {
    return (long long)msg.symbols.size() * params.subfile_bits();
}

} // namespace sccc
