#pragma once

// Exact certification of the two collusion security constraints.  Every
// symbol a colluding set observes (cached blocks, cached unique keys and,
// post-delivery, every broadcast symbol) is a linear form in the file symbols
// and the key symbols.  Zero mutual information for such observations with
// uniform independent keys holds iff rank([A|B]) == rank(B), where A collects
// the secret (file) coefficients and B the key coefficients.
//
// Everything works at stripe granularity: one field symbol per subfile.

#include <cstdint>
#include <cmath>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sccc/combinatorics.hpp"
#include "sccc/field.hpp"
#include "sccc/scheme.hpp"

namespace sccc {

enum class Phase { pre_delivery, post_delivery };

struct Mutation {
    enum Kind { none, drop_ekey, reduce_q } kind = none;
    std::size_t ekey_index = 0; // for drop_ekey

    static Mutation None() { return {}; }
    static Mutation DropEKey(std::size_t j) { return {drop_ekey, j}; }
    static Mutation ReduceQ() { return {reduce_q, 0}; }
};

struct ObservationSystem {
    FieldMatrix secret_map; // A: rows x (secret file symbols)
    FieldMatrix key_map;    // B: rows x (key symbols + non-secret file symbols)
    FieldSpec spec;
};

inline bool verify_zero_leakage(const ObservationSystem& system) {
    if (system.secret_map.rows() != system.key_map.rows())
        throw ShapeMismatch("A and B must have the same row count");
    const std::size_t rows = system.secret_map.rows();
    FieldMatrix both(rows, system.secret_map.cols() + system.key_map.cols());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < system.secret_map.cols(); ++c)
            both.at(r, c) = system.secret_map.at(r, c);
        for (std::size_t c = 0; c < system.key_map.cols(); ++c)
            both.at(r, system.secret_map.cols() + c) = system.key_map.at(r, c);
    }
    return mat_rank(both, system.spec) == mat_rank(system.key_map, system.spec);
}

namespace detail {

using Row = std::vector<Symbol>;

// Global column layout of the observation coefficient space:
//   [0, N*P)              file symbols W_{n,p}
//   [N*P, N*P + N*Q)      encryption keys Y_{n,q}
//   [.., .. + C(K,t+1))   unique keys E
struct ObsLayout {
    std::size_t w_count, y_count, e_count;

    explicit ObsLayout(const SchemeParams& params)
        : w_count(std::size_t(params.num_files) * std::size_t(params.secret_count)),
          y_count(std::size_t(params.num_files) * std::size_t(params.key_count)),
          e_count(params.t1_subsets.size()) {}

    std::size_t total() const { return w_count + y_count + e_count; }
    std::size_t w_col(unsigned n, std::size_t p, const SchemeParams& pr) const {
        return std::size_t(n) * std::size_t(pr.secret_count) + p;
    }
    std::size_t y_col(unsigned n, std::size_t q, const SchemeParams& pr) const {
        return w_count + std::size_t(n) * std::size_t(pr.key_count) + q;
    }
    std::size_t e_col(std::size_t j) const { return w_count + y_count + j; }
};

inline void apply_mutation(Row& row, const ObsLayout& lay, const SchemeParams& params,
                           const Mutation& mut) {
    // A mutated key is treated as publicly known: its contribution can be
    // subtracted by the adversary, so its column is removed.
    if (mut.kind == Mutation::drop_ekey) {
        row[lay.e_col(mut.ekey_index)] = 0;
    } else if (mut.kind == Mutation::reduce_q) {
        if (params.key_count < 1) throw InvalidT("reduce_q needs Q >= 1");
        for (unsigned n = 0; n < params.num_files; ++n)
            row[lay.y_col(n, std::size_t(params.key_count) - 1, params)] = 0;
    }
}

// Coefficient row of block W~_{n,T_i}.
inline Row block_row(unsigned n, std::size_t i, const ObsLayout& lay, const SchemeParams& params,
                     const Mutation& mut) {
    Row row(lay.total(), 0);
    const Symbol* c = params.sharing.matrix.row(i);
    for (std::size_t p = 0; p < std::size_t(params.secret_count); ++p)
        row[lay.w_col(n, p, params)] = c[p];
    for (std::size_t q = 0; q < std::size_t(params.key_count); ++q)
        row[lay.y_col(n, q, params)] = c[std::size_t(params.secret_count) + q];
    apply_mutation(row, lay, params, mut);
    return row;
}

// Coefficient row of broadcast symbol X_{D,T+_j}.
inline Row broadcast_row(std::size_t j, const DemandVector& demand, const ObsLayout& lay,
                         const SchemeParams& params, const Mutation& mut) {
    Row row(lay.total(), 0);
    row[lay.e_col(j)] = 1;
    const std::uint32_t t1 = params.t1_subsets.mask(j);
    for (unsigned u : mask_elements(t1)) {
        const std::size_t ti = params.t_subsets.index(t1 & ~(1u << u));
        const unsigned n = demand.demands[u];
        const Symbol* c = params.sharing.matrix.row(ti);
        for (std::size_t p = 0; p < std::size_t(params.secret_count); ++p)
            row[lay.w_col(n, p, params)] ^= c[p];
        for (std::size_t q = 0; q < std::size_t(params.key_count); ++q)
            row[lay.y_col(n, q, params)] ^= c[std::size_t(params.secret_count) + q];
    }
    apply_mutation(row, lay, params, mut);
    return row;
}

// Rows of the union cache Z_L: every block with T meeting L, every unique key
// with T+ meeting L.
inline std::vector<Row> cache_rows(std::uint32_t colluders, const ObsLayout& lay,
                                   const SchemeParams& params, const Mutation& mut) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < params.t_subsets.size(); ++i) {
        if (!(params.t_subsets.mask(i) & colluders)) continue;
        for (unsigned n = 0; n < params.num_files; ++n)
            rows.push_back(block_row(n, i, lay, params, mut));
    }
    for (std::size_t j = 0; j < params.t1_subsets.size(); ++j) {
        if (!(params.t1_subsets.mask(j) & colluders)) continue;
        Row row(lay.total(), 0);
        row[lay.e_col(j)] = 1;
        apply_mutation(row, lay, params, mut);
        rows.push_back(row);
    }
    return rows;
}

inline bool row_is_zero(const Row& r) {
    for (Symbol s : r)
        if (s) return false;
    return true;
}

// In-place RREF over the given column order; pivot columns are cleared in all
// rows.  Returns the pivot columns.
inline std::vector<std::size_t> eliminate(std::vector<Row>& rows,
                                          const std::vector<std::size_t>& col_order,
                                          const FieldSpec& spec) {
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c : col_order) {
        std::size_t piv = next;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[next]);
        const Symbol pinv = spec.inv(rows[next][c]);
        for (Symbol& s : rows[next]) s = spec.mul(s, pinv);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == next) continue;
            const Symbol f = rows[r][c];
            if (!f) continue;
            for (std::size_t k = 0; k < rows[r].size(); ++k)
                rows[r][k] ^= spec.mul(f, rows[next][k]);
        }
        pivots.push_back(c);
        ++next;
    }
    return pivots;
}

// Reduce a row against an already-eliminated basis (rows[i] has a 1 at
// pivots[i] and zeros at every other pivot column).
inline void reduce_against(Row& row, const std::vector<Row>& basis,
                           const std::vector<std::size_t>& pivots, const FieldSpec& spec) {
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        const Symbol f = row[pivots[i]];
        if (!f) continue;
        for (std::size_t k = 0; k < row.size(); ++k) row[k] ^= spec.mul(f, basis[i][k]);
    }
}

} // namespace detail

// The observation system for a colluding set, per the requested security
// constraint.  target_files lists the file indices whose symbols count as
// secret; by default all files (the pre-delivery constraint) or all files the
// colluders did not request (the post-delivery constraint).
inline ObservationSystem build_observation_system(
    std::uint32_t colluders, Phase phase, const std::optional<DemandVector>& demand,
    const SchemeParams& params, std::optional<std::vector<unsigned>> target_files = std::nullopt,
    const Mutation& mutation = Mutation::None()) {
    if (phase == Phase::post_delivery && !demand) throw MissingDemand();
    if (demand) check_demand(*demand, params);
    for (unsigned u : mask_elements(colluders))
        if (u >= params.num_users) throw IndexOutOfRange("colluder index out of range");

    detail::ObsLayout lay(params);
    std::vector<detail::Row> rows = detail::cache_rows(colluders, lay, params, mutation);
    if (phase == Phase::post_delivery)
        for (std::size_t j = 0; j < params.t1_subsets.size(); ++j)
            rows.push_back(detail::broadcast_row(j, *demand, lay, params, mutation));

    std::vector<bool> secret_file(params.num_files, false);
    if (target_files) {
        for (unsigned n : *target_files) {
            if (n >= params.num_files) throw IndexOutOfRange("target file out of range");
            secret_file[n] = true;
        }
    } else {
        secret_file.assign(params.num_files, true);
        if (phase == Phase::post_delivery)
            for (unsigned u : mask_elements(colluders)) secret_file[demand->demands[u]] = false;
    }

    std::vector<std::size_t> a_cols, b_cols;
    for (unsigned n = 0; n < params.num_files; ++n)
        for (std::size_t p = 0; p < std::size_t(params.secret_count); ++p)
            (secret_file[n] ? a_cols : b_cols).push_back(lay.w_col(n, p, params));
    for (std::size_t c = lay.w_count; c < lay.total(); ++c) b_cols.push_back(c);

    ObservationSystem sys{FieldMatrix(rows.size(), a_cols.size()),
                          FieldMatrix(rows.size(), b_cols.size()), params.spec()};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < a_cols.size(); ++c) sys.secret_map.at(r, c) = rows[r][a_cols[c]];
        for (std::size_t c = 0; c < b_cols.size(); ++c) sys.key_map.at(r, c) = rows[r][b_cols[c]];
    }
    return sys;
}

struct SweepRecord {
    int constraint = 4;        // 4: caches only, 5: caches + broadcast
    std::uint32_t colluders = 0;
    int demand_index = -1;     // index into the sampled demand list, -1 for constraint 4
    bool ok = false;
    long long rank_full = 0;
    long long rank_keys = 0;
};

struct SweepReport {
    unsigned num_files = 0, num_users = 0, max_colluders = 0, cache_param = 0;
    std::vector<DemandVector> demands;
    std::vector<SweepRecord> records;

    bool all_ok() const {
        for (const auto& r : records)
            if (!r.ok) return false;
        return true;
    }
    std::vector<SweepRecord> violations() const {
        std::vector<SweepRecord> v;
        for (const auto& r : records)
            if (!r.ok) v.push_back(r);
        return v;
    }
};

// Runs the rank criterion for every l-subset of users: the pre-delivery
// constraint once per set, the post-delivery constraint once per sampled
// demand vector.  Single Gaussian elimination per check, with the colluders'
// cache echelonized once per set and reused across demands.
inline SweepReport sweep_all_colluding_sets(const SchemeParams& params,
                                            const std::vector<DemandVector>& demand_sample,
                                            const Mutation& mutation = Mutation::None()) {
    if (binomial(params.num_users, params.max_colluders) > 1000000)
        throw TooManySets("too many colluding sets to enumerate");
    for (const auto& d : demand_sample) check_demand(d, params);

    const detail::ObsLayout lay(params);
    SweepReport report;
    report.num_files = params.num_files;
    report.num_users = params.num_users;
    report.max_colluders = params.max_colluders;
    report.cache_param = params.cache_param;
    report.demands = demand_sample;

    std::vector<std::size_t> key_cols; // Y then E: never secret
    for (std::size_t c = lay.w_count; c < lay.total(); ++c) key_cols.push_back(c);

    const auto l_sets = subsets_of_size(params.num_users, params.max_colluders);
    for (std::uint32_t colluders : l_sets) {
        // Echelonize the cache rows over the key columns only.  Rows that get
        // no key pivot end up zero on every key column (W-only residue).
        std::vector<detail::Row> basis = detail::cache_rows(colluders, lay, params, mutation);
        const std::vector<std::size_t> base_pivots = detail::eliminate(basis, key_cols, params.spec());
        std::vector<detail::Row> residue(basis.begin() + base_pivots.size(), basis.end());
        basis.resize(base_pivots.size());
        std::erase_if(residue, detail::row_is_zero);

        // Constraint (4): the caches alone, all files secret.  Any W-only
        // residue row is leaked file information.
        {
            std::vector<std::size_t> w_cols;
            for (std::size_t c = 0; c < lay.w_count; ++c) w_cols.push_back(c);
            std::vector<detail::Row> res = residue;
            const auto res_pivots = detail::eliminate(res, w_cols, params.spec());
            SweepRecord rec;
            rec.constraint = 4;
            rec.colluders = colluders;
            rec.rank_keys = (long long)base_pivots.size();
            rec.rank_full = rec.rank_keys + (long long)res_pivots.size();
            rec.ok = res_pivots.empty();
            report.records.push_back(rec);
        }

        // Constraint (5): caches plus the whole broadcast, secrets are the
        // files the colluders did not request.
        for (std::size_t di = 0; di < demand_sample.size(); ++di) {
            const DemandVector& demand = demand_sample[di];
            std::vector<detail::Row> rows = residue;
            for (std::size_t j = 0; j < params.t1_subsets.size(); ++j) {
                detail::Row row = detail::broadcast_row(j, demand, lay, params, mutation);
                detail::reduce_against(row, basis, base_pivots, params.spec());
                if (!detail::row_is_zero(row)) rows.push_back(std::move(row));
            }

            std::vector<bool> requested(params.num_files, false);
            for (unsigned u : mask_elements(colluders)) requested[demand.demands[u]] = true;
            std::vector<std::size_t> order = key_cols; // keys, requested W, then secret W
            for (unsigned n = 0; n < params.num_files; ++n)
                if (requested[n])
                    for (std::size_t p = 0; p < std::size_t(params.secret_count); ++p)
                        order.push_back(lay.w_col(n, p, params));
            for (unsigned n = 0; n < params.num_files; ++n)
                if (!requested[n])
                    for (std::size_t p = 0; p < std::size_t(params.secret_count); ++p)
                        order.push_back(lay.w_col(n, p, params));

            const auto pivots = detail::eliminate(rows, order, params.spec());
            std::size_t secret_pivots = 0;
            for (std::size_t c : pivots) {
                // a pivot is secret iff it is a W column of an unrequested file
                if (c < lay.w_count && !requested[c / std::size_t(params.secret_count)])
                    ++secret_pivots;
            }
            SweepRecord rec;
            rec.constraint = 5;
            rec.colluders = colluders;
            rec.demand_index = int(di);
            rec.rank_keys = (long long)(base_pivots.size() + pivots.size() - secret_pivots);
            rec.rank_full = (long long)(base_pivots.size() + pivots.size());
            rec.ok = secret_pivots == 0;
            report.records.push_back(rec);
        }
    }
    return report;
}

struct MiResult {
    double bits = 0.0;
    bool is_zero = true;      // exact integer independence test
    std::uint64_t states = 0; // enumerated realizations
};

// Exhaustive mutual information between the secret tuple and the observation
// tuple of a linear observation system, all variables uniform i.i.d. field
// symbols.  Independent of the rank criterion.
inline MiResult mutual_information(const ObservationSystem& sys) {
    const unsigned m = sys.spec.width();
    const std::size_t a_vars = sys.secret_map.cols();
    const std::size_t b_vars = sys.key_map.cols();
    const std::size_t rows = sys.secret_map.rows();
    const std::uint64_t total_bits = std::uint64_t(m) * (a_vars + b_vars);
    if (total_bits > 24) throw TooLarge("more than 24 random bits to enumerate");
    if (std::uint64_t(m) * rows > 40 || std::uint64_t(m) * a_vars > 24)
        throw TooLarge("observation or secret tuple too wide to enumerate");

    const std::uint64_t states = 1ull << total_bits;
    const std::uint64_t sym_mask = sys.spec.order() - 1;
    const std::size_t vars = a_vars + b_vars;

    // By linearity the packed observation word is the XOR of one contribution
    // per variable value; tabulate those once instead of multiplying per state.
    std::vector<std::uint64_t> table(vars << m, 0);
    for (std::size_t i = 0; i < vars; ++i)
        for (std::uint64_t s = 0; s <= sym_mask; ++s) {
            std::uint64_t w = 0;
            for (std::size_t r = 0; r < rows; ++r) {
                const Symbol coef = i < a_vars ? sys.secret_map.at(r, i)
                                               : sys.key_map.at(r, i - a_vars);
                w = (w << m) | sys.spec.mul(coef, Symbol(s));
            }
            table[(i << m) | s] = w;
        }

    std::unordered_map<std::uint64_t, std::uint64_t> cnt_joint, cnt_obs;
    const std::uint64_t secret_mask = (a_vars ? (1ull << (m * a_vars)) : 1ull) - 1;
    for (std::uint64_t v = 0; v < states; ++v) {
        std::uint64_t obs = 0, rest = v;
        for (std::size_t i = 0; i < vars; ++i) {
            obs ^= table[(i << m) | (rest & sym_mask)];
            rest >>= m;
        }
        ++cnt_joint[(obs << 24) | (v & secret_mask)];
        ++cnt_obs[obs];
    }
    // each secret tuple appears once per key assignment
    const std::uint64_t cs = states >> (m * a_vars);

    MiResult res;
    res.states = states;
    for (const auto& [key, c] : cnt_joint) {
        const std::uint64_t co = cnt_obs[key >> 24];
        if (c * states != cs * co) res.is_zero = false;
        res.bits += double(c) / double(states) *
                    std::log2(double(c) * double(states) / (double(cs) * double(co)));
    }
    if (res.is_zero) res.bits = 0.0;
    return res;
}

inline MiResult brute_force_mi_oracle(const SchemeParams& tiny_params, std::uint32_t colluders,
                                      Phase phase, const std::optional<DemandVector>& demand,
                                      const Mutation& mutation = Mutation::None()) {
    return mutual_information(
        build_observation_system(colluders, phase, demand, tiny_params, std::nullopt, mutation));
}

} // namespace sccc
