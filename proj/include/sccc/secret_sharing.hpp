#pragma once

// (G, P, Q) non-perfect secret sharing over GF(2^m): P secret symbols and Q
// uniform key symbols go through a G x G Cauchy matrix; all G shares recover
// the secrets, any Q or fewer shares carry zero information about them.

#include <cstdint>
#include <utility>
#include <vector>

#include "sccc/field.hpp"

namespace sccc {

struct SharingParams {
    std::size_t secret_count; // P
    std::size_t key_count;    // Q
    FieldSpec spec;
    FieldMatrix matrix;  // G x G precoding matrix
    FieldMatrix inverse; // cached for reconstruction

    std::size_t share_count() const { return secret_count + key_count; } // G

    SharingParams(std::size_t p, std::size_t q, FieldSpec field_spec, FieldMatrix precoding)
        : secret_count(p), key_count(q), spec(std::move(field_spec)), matrix(std::move(precoding)) {
        const std::size_t g = share_count();
        if (matrix.rows() != g || matrix.cols() != g)
            throw ShapeMismatch("precoding matrix must be (P+Q) x (P+Q)");
        inverse = mat_inverse(matrix, spec); // throws Singular if rank deficient
    }
};

// Canonical scheme: Cauchy precoding matrix over the given field.
inline SharingParams make_canonical_sharing(std::size_t p, std::size_t q, const FieldSpec& spec) {
    return SharingParams(p, q, spec, build_cauchy(p + q, spec));
}

using ShareStripe = std::vector<Symbol>;

inline ShareStripe make_shares(const std::vector<Symbol>& secrets, const std::vector<Symbol>& keys,
                               const SharingParams& params) {
    if (secrets.size() != params.secret_count || keys.size() != params.key_count)
        throw ShapeMismatch("secret/key vector lengths do not match the sharing parameters");
    const std::size_t g = params.share_count();
    ShareStripe shares(g, 0);
    for (std::size_t i = 0; i < g; ++i) {
        Symbol acc = 0;
        const Symbol* row = params.matrix.row(i);
        for (std::size_t j = 0; j < params.secret_count; ++j)
            acc ^= params.spec.mul(row[j], secrets[j]);
        for (std::size_t j = 0; j < params.key_count; ++j)
            acc ^= params.spec.mul(row[params.secret_count + j], keys[j]);
        shares[i] = acc;
    }
    return shares;
}

inline std::pair<std::vector<Symbol>, std::vector<Symbol>> reconstruct(const ShareStripe& stripe,
                                                                       const SharingParams& params) {
    const std::size_t g = params.share_count();
    if (stripe.size() != g) throw ShapeMismatch("stripe length must equal the share count");
    std::vector<Symbol> combined(g, 0);
    for (std::size_t i = 0; i < g; ++i) {
        Symbol acc = 0;
        const Symbol* row = params.inverse.row(i);
        for (std::size_t j = 0; j < g; ++j) acc ^= params.spec.mul(row[j], stripe[j]);
        combined[i] = acc;
    }
    std::vector<Symbol> secrets(combined.begin(), combined.begin() + params.secret_count);
    std::vector<Symbol> keys(combined.begin() + params.secret_count, combined.end());
    return {std::move(secrets), std::move(keys)};
}

// True iff the given shares leak nothing about the secrets: no combination of
// the selected rows is zero on the key columns but nonzero on the secret
// columns, i.e. rank([V1|V2]) == rank(V2).
inline bool leakage_rank_check(const std::vector<std::size_t>& share_indices,
                               const SharingParams& params) {
    const std::size_t g = params.share_count();
    for (std::size_t i : share_indices)
        if (i >= g) throw IndexOutOfRange("share index out of range");
    FieldMatrix full(share_indices.size(), g);
    FieldMatrix keys_only(share_indices.size(), params.key_count);
    for (std::size_t r = 0; r < share_indices.size(); ++r)
        for (std::size_t j = 0; j < g; ++j) {
            full.at(r, j) = params.matrix.at(share_indices[r], j);
            if (j >= params.secret_count)
                keys_only.at(r, j - params.secret_count) = full.at(r, j);
        }
    return mat_rank(full, params.spec) == mat_rank(keys_only, params.spec);
}

} // namespace sccc
