#pragma once

// Analytical memory/communication tradeoff: the achievable rate points and
// their lower convex envelope, the cut-set style outer bound R_s*(M), the
// closed-form rate R^C(t) and the inner/outer gap ratios.  Everything is
// exact rational arithmetic; doubles appear only when serializing.

#include <algorithm>
#include <vector>

#include "sccc/combinatorics.hpp"
#include "sccc/errors.hpp"
#include "sccc/rational.hpp"

namespace sccc {

struct RatePoint {
    long long t = 0;
    Rational mem;  // M
    Rational rate; // R
};

struct TradeoffCurve {
    std::vector<RatePoint> points;   // one per valid t, sorted by M
    std::vector<RatePoint> envelope; // vertices of the lower convex envelope

    // Piecewise-linear envelope value; defined on [min M, max M].
    Rational envelope_rate(const Rational& m) const {
        if (envelope.empty() || m < envelope.front().mem || m > envelope.back().mem)
            throw DomainError("memory load outside the envelope's range");
        for (std::size_t i = 0; i + 1 < envelope.size(); ++i) {
            const auto& a = envelope[i];
            const auto& b = envelope[i + 1];
            if (m <= b.mem) {
                if (a.mem == b.mem) return std::min(a.rate, b.rate);
                return a.rate + (b.rate - a.rate) * (m - a.mem) / (b.mem - a.mem);
            }
        }
        return envelope.back().rate;
    }
};

inline void check_system(long long n, long long k, long long l) {
    if (n < 1 || k < 1) throw InvalidCollusion("need at least one file and one user");
    if (l < 1 || l > k - 1) throw InvalidCollusion("colluder count must lie in [1, K-1]");
}

inline long long max_cache_param(long long k, long long l) {
    const long long v = (k + l) / l - 2; // ceil((K+1)/l) - 2
    return v > 0 ? v : 0;
}

inline RatePoint achievable_point(long long n, long long k, long long l, long long t) {
    check_system(n, k, l);
    if (t < 0 || t > max_cache_param(k, l)) throw InvalidT("t outside the achievable range");
    const long long p = binomial(k - l, t);
    return {t, Rational(n * binomial(k - 1, t - 1) + binomial(k - 1, t), p),
            Rational(binomial(k, t + 1), p)};
}

// R^C(t), evaluated through both closed forms as a cross-check.
inline Rational rc_of_t(long long n, long long k, long long l, long long t) {
    const RatePoint pt = achievable_point(n, k, l, t);
    Rational product(k - t, t + 1);
    for (long long j = 0; j < t; ++j) product *= Rational(k - j, k - l - j);
    if (product != pt.rate) throw Error("closed forms of R^C(t) disagree");
    return pt.rate;
}

namespace detail {

// z-component of the cross product (b-a) x (c-a); >= 0 keeps the lower hull.
inline Rational cross(const RatePoint& a, const RatePoint& b, const RatePoint& c) {
    return (b.mem - a.mem) * (c.rate - a.rate) - (b.rate - a.rate) * (c.mem - a.mem);
}

} // namespace detail

inline TradeoffCurve achievable_points(long long n, long long k, long long l) {
    check_system(n, k, l);
    TradeoffCurve curve;
    for (long long t = 0; t <= max_cache_param(k, l); ++t)
        curve.points.push_back(achievable_point(n, k, l, t));
    std::sort(curve.points.begin(), curve.points.end(),
              [](const RatePoint& a, const RatePoint& b) { return a.mem < b.mem; });
    for (const RatePoint& p : curve.points) {
        auto& h = curve.envelope;
        while (h.size() >= 2 && detail::cross(h[h.size() - 2], h.back(), p) <= Rational(0))
            h.pop_back();
        h.push_back(p);
    }
    return curve;
}

// Cut-set style lower bound R_s*(M) on the communication load, M >= 1.
inline Rational outer_bound(const Rational& m, long long n, long long k, long long l) {
    check_system(n, k, l);
    if (m < Rational(1)) throw DomainError("the outer bound is stated for M >= 1");
    const long long s_cap = std::min(n / 2, k);
    if (l >= s_cap) return Rational(s_cap);
    Rational best(0);
    for (long long s = l; s <= s_cap; ++s) {
        const long long files_per_round = n / s;
        const Rational v = (Rational(s * files_per_round - l) - Rational(s - l) * m) /
                           Rational(files_per_round - 1);
        best = std::max(best, v);
    }
    return std::max(best, Rational(0));
}

// One cut-set inequality instance: (floor(N/s)-1)R + (s-l)M >= s*floor(N/s) - l.
inline bool satisfies_cutset_inequalities(const Rational& m, const Rational& r, long long n,
                                          long long k, long long l) {
    check_system(n, k, l);
    const long long s_cap = std::min(n / 2, k);
    for (long long s = l; s <= s_cap; ++s) {
        const long long fpr = n / s;
        if (Rational(fpr - 1) * r + Rational(s - l) * m < Rational(s * fpr - l)) return false;
    }
    return true;
}

struct GapEntry {
    long long t = 0;
    Rational mem;
    Rational inner_rate; // R^C
    Rational outer_rate; // R_s*
    Rational ratio;      // R^C / R_s*
    bool flagged = false; // meets the order-optimality hypotheses
};

inline std::vector<GapEntry> gap_ratio(long long n, long long k, long long l) {
    const TradeoffCurve curve = achievable_points(n, k, l);
    const long long t_flag = (k + 1) / (10 * l);
    std::vector<GapEntry> out;
    for (const RatePoint& p : curve.points) {
        GapEntry e;
        e.t = p.t;
        e.mem = p.mem;
        e.inner_rate = p.rate;
        e.outer_rate = outer_bound(p.mem, n, k, l);
        e.ratio = e.inner_rate / e.outer_rate; // R_s* >= l >= 1 whenever M >= 1
        e.flagged = p.t >= t_flag && k <= 3 * n;
        out.push_back(e);
    }
    return out;
}

} // namespace sccc
