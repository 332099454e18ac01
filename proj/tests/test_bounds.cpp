#include <catch2/catch_amalgamated.hpp>

#include "sccc/bounds.hpp"
#include "sccc/scheme.hpp"

using namespace sccc;

TEST_CASE("achievable corner points") {
    SECTION("the 4-file 4-user pair-collusion system") {
        TradeoffCurve c = achievable_points(4, 4, 2);
        REQUIRE(c.points.size() == 2);
        CHECK(c.points[0].t == 0);
        CHECK(c.points[0].mem == Rational(1));
        CHECK(c.points[0].rate == Rational(4));
        CHECK(c.points[1].t == 1);
        CHECK(c.points[1].mem == Rational(7, 2));
        CHECK(c.points[1].rate == Rational(3));
    }
    SECTION("every curve starts at (1, K)") {
        for (long long l : {1, 2, 5, 10, 29}) {
            RatePoint p = achievable_point(30, 30, l, 0);
            CHECK(p.mem == Rational(1));
            CHECK(p.rate == Rational(30));
        }
    }
    SECTION("t range follows the collusion level") {
        CHECK(sccc::max_cache_param(30, 5) == 5);
        CHECK(sccc::max_cache_param(30, 1) == 29);
        CHECK(sccc::max_cache_param(4, 2) == 1);
        CHECK(sccc::max_cache_param(4, 3) == 0);
        CHECK_NOTHROW(achievable_point(30, 30, 5, 5));
        CHECK_THROWS_AS(achievable_point(30, 30, 5, 6), InvalidT);
        CHECK_THROWS_AS(achievable_point(4, 4, 2, -1), InvalidT);
        CHECK_THROWS_AS(achievable_point(4, 4, 0, 0), InvalidCollusion);
        CHECK_THROWS_AS(achievable_point(4, 4, 4, 0), InvalidCollusion);
    }
}

TEST_CASE("closed-form rate") {
    CHECK(rc_of_t(4, 4, 2, 1) == Rational(3));
    CHECK(rc_of_t(30, 30, 5, 0) == Rational(30));
    // (30,30,5,5): C(30,6)/C(25,5)
    CHECK(rc_of_t(30, 30, 5, 5) == Rational(binomial(30, 6), binomial(25, 5)));
    SECTION("strictly decreasing in t") {
        for (long long l : {1, 2, 5}) {
            Rational prev = rc_of_t(30, 30, l, 0);
            for (long long t = 1; t <= sccc::max_cache_param(30, l); ++t) {
                const Rational cur = rc_of_t(30, 30, l, t);
                REQUIRE(cur < prev);
                prev = cur;
            }
        }
    }
    SECTION("matches an independently coded binomial quotient") {
        for (long long k = 2; k <= 12; ++k)
            for (long long l = 1; l < k; ++l)
                for (long long t = 0; t <= sccc::max_cache_param(k, l); ++t)
                    REQUIRE(rc_of_t(k, k, l, t) ==
                            Rational(binomial(k, t + 1), binomial(k - l, t)));
    }
}

TEST_CASE("lower convex envelope") {
    for (auto [n, k, l] : std::vector<std::array<long long, 3>>{
             {4, 4, 2}, {30, 30, 1}, {30, 30, 5}, {10, 14, 3}, {6, 20, 2}}) {
        TradeoffCurve c = achievable_points(n, k, l);
        REQUIRE_FALSE(c.envelope.empty());
        // vertices are a subset of the points, strictly increasing in M
        for (std::size_t i = 0; i + 1 < c.envelope.size(); ++i)
            REQUIRE(c.envelope[i].mem < c.envelope[i + 1].mem);
        // convex: consecutive slopes strictly increase
        for (std::size_t i = 0; i + 2 < c.envelope.size(); ++i) {
            const auto& a = c.envelope[i];
            const auto& b = c.envelope[i + 1];
            const auto& d = c.envelope[i + 2];
            REQUIRE((b.mem - a.mem) * (d.rate - b.rate) >
                    (b.rate - a.rate) * (d.mem - b.mem));
        }
        // dominates nothing: every achievable point lies on or above it
        for (const RatePoint& p : c.points)
            REQUIRE(c.envelope_rate(p.mem) <= p.rate);
        // interpolation at segment midpoints stays on the segment
        for (std::size_t i = 0; i + 1 < c.envelope.size(); ++i) {
            const auto& a = c.envelope[i];
            const auto& b = c.envelope[i + 1];
            const Rational mid = (a.mem + b.mem) / 2;
            REQUIRE(c.envelope_rate(mid) == (a.rate + b.rate) / 2);
        }
        CHECK_THROWS_AS(c.envelope_rate(c.envelope.front().mem - 1), DomainError);
        CHECK_THROWS_AS(c.envelope_rate(c.envelope.back().mem + 1), DomainError);
    }
}

TEST_CASE("outer bound") {
    SECTION("collusion at the cut cap collapses the bound to a constant") {
        // N=4, K=4, l=2: s can only be 2 and l >= s_cap
        for (Rational m : {Rational(1), Rational(7, 2), Rational(100)})
            CHECK(outer_bound(m, 4, 4, 2) == Rational(2));
    }
    SECTION("M = 1 bound equals the cut cap") {
        // every term simplifies to s, so the max is s_cap = 15
        CHECK(outer_bound(Rational(1), 30, 30, 5) == Rational(15));
        Rational best(0);
        for (long long s = 5; s <= 15; ++s) {
            const long long fpr = 30 / s;
            best = std::max(best,
                            Rational(s * fpr - 5 - (s - 5)) / Rational(fpr - 1));
        }
        CHECK(best == Rational(15));
    }
    SECTION("agrees with a direct maximization on a grid") {
        for (auto [n, k, l] : std::vector<std::array<long long, 3>>{
                 {30, 30, 5}, {30, 30, 1}, {12, 20, 3}, {9, 7, 2}}) {
            const long long s_cap = std::min(n / 2, k);
            for (int num = 2; num <= 40; num += 3) {
                const Rational m(num, 2);
                Rational want(0);
                for (long long s = l; s <= s_cap; ++s) {
                    const long long fpr = n / s;
                    want = std::max(want, (Rational(s * fpr - l) - Rational(s - l) * m) /
                                              Rational(fpr - 1));
                }
                if (l >= s_cap) want = Rational(s_cap);
                REQUIRE(outer_bound(m, n, k, l) == want);
            }
        }
    }
    SECTION("monotone nonincreasing in M and clamped at zero") {
        Rational prev = outer_bound(Rational(1), 30, 30, 5);
        for (int num = 3; num <= 200; ++num) {
            const Rational cur = outer_bound(Rational(num, 2), 30, 30, 5);
            REQUIRE(cur <= prev);
            REQUIRE(cur >= Rational(0));
            prev = cur;
        }
    }
    CHECK_THROWS_AS(outer_bound(Rational(1, 2), 4, 4, 2), DomainError);
}

TEST_CASE("achievable points satisfy every cut-set inequality") {
    for (long long k = 2; k <= 10; ++k)
        for (long long n : {k, 2 * k, k + 1})
            for (long long l = 1; l < k; ++l)
                for (long long t = 0; t <= sccc::max_cache_param(k, l); ++t) {
                    const RatePoint p = achievable_point(n, k, l, t);
                    REQUIRE(satisfies_cutset_inequalities(p.mem, p.rate, n, k, l));
                    REQUIRE(p.rate >= outer_bound(p.mem, n, k, l));
                }
    // a point strictly below the bound must fail
    CHECK_FALSE(satisfies_cutset_inequalities(Rational(1), Rational(1), 30, 30, 5));
}

TEST_CASE("gap ratios") {
    SECTION("the 30-user 5-colluder system stays under 3") {
        Rational worst(0);
        for (const GapEntry& e : gap_ratio(30, 30, 5)) {
            REQUIRE(e.outer_rate > Rational(0));
            worst = std::max(worst, e.ratio);
        }
        CHECK(worst < Rational(3));
    }
    SECTION("flagged entries respect the constant-factor bound") {
        for (long long k : {6, 10, 18, 30})
            for (long long l = 1; l < k; ++l)
                for (const GapEntry& e : gap_ratio(k, k, l))
                    if (e.flagged) REQUIRE(e.ratio <= Rational(12));
    }
    SECTION("flag condition") {
        // K=30, l=1: t >= 3 and K <= 3N
        for (const GapEntry& e : gap_ratio(30, 30, 1)) CHECK(e.flagged == (e.t >= 3));
        // K > 3N: never flagged
        for (const GapEntry& e : gap_ratio(2, 7, 1)) CHECK_FALSE(e.flagged);
    }
}

TEST_CASE("scheme rate pairs land on the analytical curve") {
    for (unsigned k = 2; k <= 6; ++k)
        for (unsigned l = 1; l < k; ++l)
            for (unsigned t = 0; t <= SchemeParams::max_cache_param(k, l); ++t) {
                SchemeParams p = derive_params(k, k, l, t, 0, std::nullopt, Alignment::pad);
                const auto [m, r] = rate_pair(p);
                const RatePoint pt = achievable_point(k, k, l, t);
                REQUIRE(m == pt.mem);
                REQUIRE(r == pt.rate);
            }
}
