#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sccc/errors.hpp"

namespace sccc {

inline long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i; // divides exactly at every step
    }
    return r;
}

// All k-subsets of {0,...,n-1} as bitmasks, in lexicographic order of the
// sorted element lists.
inline std::vector<std::uint32_t> subsets_of_size(unsigned n, unsigned k) {
    std::vector<std::uint32_t> out;
    if (k > n) return out;
    std::vector<unsigned> idx(k);
    for (unsigned i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::uint32_t mask = 0;
        for (unsigned i : idx) mask |= 1u << i;
        out.push_back(mask);
        // advance to the next combination
        int pos = int(k) - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (unsigned i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

inline std::vector<unsigned> mask_elements(std::uint32_t mask) {
    std::vector<unsigned> out;
    for (unsigned i = 0; mask; ++i, mask >>= 1)
        if (mask & 1u) out.push_back(i);
    return out;
}

// Lookup from subset mask to its lexicographic index.
class SubsetIndex {
public:
    SubsetIndex() = default;
    SubsetIndex(unsigned n, unsigned k) : masks_(subsets_of_size(n, k)) {
        for (std::size_t i = 0; i < masks_.size(); ++i) index_[masks_[i]] = i;
    }

    std::size_t size() const { return masks_.size(); }
    std::uint32_t mask(std::size_t i) const { return masks_[i]; }
    const std::vector<std::uint32_t>& masks() const { return masks_; }

    std::size_t index(std::uint32_t mask) const {
        auto it = index_.find(mask);
        if (it == index_.end()) throw IndexOutOfRange("subset is not indexed");
        return it->second;
    }

private:
    std::vector<std::uint32_t> masks_;
    std::unordered_map<std::uint32_t, std::size_t> index_;
};

} // namespace sccc
