#pragma once

// Deterministic seedable randomness with named independent streams, so that
// mutating one stream (e.g. for negative controls) leaves the others fixed.

#include <cstdint>
#include <random>
#include <string_view>

#include "sccc/field.hpp"

namespace sccc {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
        h ^= std::uint8_t(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace detail

class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::string_view stream)
        : gen_(detail::splitmix64(seed ^ detail::fnv1a(stream))) {}

    Symbol symbol(const FieldSpec& spec) {
        return Symbol(gen_() & (spec.order() - 1));
    }

    std::uint64_t uniform(std::uint64_t bound) {
        std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
        return d(gen_);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace sccc
