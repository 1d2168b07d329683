#include <doctest.h>

#include <cmath>

#include "circlelab/arcs.hpp"
#include "circlelab/prng.hpp"

using namespace circlelab;
using arcs::ArcDissection;

TEST_CASE("level 1 dissection") {
    auto d = ArcDissection::dissect(1, 3);
    REQUIRE(d.size() == 2);
    CHECK(d.arc(0).a == 0);
    CHECK(d.arc(0).q == 1);
    CHECK(d.arc(1).a == 1);
    CHECK(d.arc(1).q == 1);
    CHECK(d.radius(0) == Rational::of(1, 12));
    auto [major, minor] = d.major_total_measure();
    CHECK(major == Rational::of(1, 6));
    CHECK(minor == Rational::of(5, 6));
}

TEST_CASE("level 3 centers") {
    auto d = ArcDissection::dissect(3, 3);
    REQUIRE(d.size() == 5);
    CHECK(d.center(1) == Rational::of(1, 3));
    CHECK(d.center(2) == Rational::of(1, 2));
    CHECK(d.center(3) == Rational::of(2, 3));
}

TEST_CASE("farey cardinality against the phi sieve") {
    auto phi = arcs::phi_sieve(150);
    for (std::int64_t n : {1, 2, 5, 17, 60, 150}) {
        std::uint64_t expect = 1;
        for (std::int64_t q = 1; q <= n; ++q) expect += phi[static_cast<std::size_t>(q)];
        for (int k : {3, 4}) {
            auto d = ArcDissection::dissect(n, k);
            CHECK(d.size() == expect);
        }
    }
}

TEST_CASE("adjacent arcs are disjoint as rational intervals") {
    auto d = ArcDissection::dissect(20, 3);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        Rational hi = d.center(i) + d.radius(i);
        Rational lo = d.center(i + 1) - d.radius(i + 1);
        CHECK(hi < lo);
    }
}

TEST_CASE("classify hits centers and rejects points past the radius") {
    auto d = ArcDissection::dissect(50, 3);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        double theta = double(d.arc(i).a) / double(d.arc(i).q);
        auto c = d.classify(theta);
        CHECK(c.major);
        CHECK(c.a == d.arc(i).a);
        CHECK(c.q == d.arc(i).q);
    }
    // just outside twice the radius of the 1/2 arc
    double r = d.radius_for(2).to_double();
    auto c = d.classify(0.5 + 2.0 * r);
    CHECK_FALSE(c.major);
}

TEST_CASE("classify agrees with the linear scan") {
    auto d = ArcDissection::dissect(100, 3);
    SplitMix64 rng(11);
    for (int i = 0; i < 20000; ++i) {
        double theta = rng.uniform01();
        auto fast = d.classify(theta);
        auto slow = d.classify_linear(theta);
        CHECK(fast.major == slow.major);
        if (fast.major) {
            CHECK(fast.a == slow.a);
            CHECK(fast.q == slow.q);
        }
    }
}

TEST_CASE("rational classification is exactly within the radius") {
    auto d = ArcDissection::dissect(30, 3);
    SplitMix64 rng(5);
    for (int i = 0; i < 500; ++i) {
        Rational theta = Rational::of(static_cast<long long>(rng.uniform_u64(0, 999)), 1000);
        auto c = d.classify_rational(theta);
        if (c.major) {
            Rational diff = theta - Rational(BigInt(c.a), BigInt(c.q));
            if (diff.is_negative()) diff = -diff;
            CHECK(diff <= d.radius_for(c.q));
        } else {
            for (std::size_t j = 0; j < d.size(); ++j) {
                Rational diff = theta - d.center(j);
                if (diff.is_negative()) diff = -diff;
                CHECK(diff > d.radius(j));
            }
        }
    }
}

TEST_CASE("major measure stays below one and shrinks with k") {
    for (std::int64_t n : {1, 4, 9, 33}) {
        Rational prev;
        bool have = false;
        for (int k : {3, 4, 5}) {
            auto d = ArcDissection::dissect(n, k);
            auto [major, minor] = d.major_total_measure();
            CHECK(major < Rational(1));
            CHECK(major + minor == Rational(1));
            if (have) CHECK(major < prev);
            prev = major;
            have = true;
        }
    }
}

TEST_CASE("measure equals the interval-merge oracle") {
    for (std::int64_t n : {1, 2, 7, 23, 40}) {
        auto d = ArcDissection::dissect(n, 3);
        CHECK(d.major_total_measure().first == arcs::merged_measure_oracle(d));
    }
}
