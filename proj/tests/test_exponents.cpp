#include <doctest.h>

#include <cmath>

#include "circlelab/exponents.hpp"

using namespace circlelab;
namespace ex = circlelab::exponents;

TEST_CASE("d0 closed form") {
    auto r3 = ex::d0(3);
    CHECK(r3.value == Rational(9));
    CHECK(r3.maximizer == 2);
    auto r4 = ex::d0(4);
    CHECK(r4.value == Rational(15));
    CHECK(r4.maximizer == 3);
    auto r5 = ex::d0(5);
    CHECK(r5.value == Rational::of(70, 3));
    CHECK(r5.maximizer == 3);
    CHECK_THROWS_AS(ex::d0(2), precondition_error);
}

TEST_CASE("d0_star reproduces the published row") {
    const long long expected[] = {10, 16, 24, 35, 47, 62, 79, 97};
    for (int k = 3; k <= 10; ++k) CHECK(ex::d0_star(k) == expected[k - 3]);
    auto rows = ex::table1();
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].first == int(i) + 3);
        CHECK(rows[i].second == expected[i]);
    }
}

TEST_CASE("tau") {
    CHECK(ex::tau(3) == Rational::of(1, 4));
    CHECK(ex::tau(4) == Rational::of(1, 8));
    CHECK(ex::tau(5) == Rational::of(1, 16));
    CHECK(ex::tau(6) == Rational::of(1, 30));   // 1/(k^2-k) wins from here
    CHECK(ex::tau(10) == Rational::of(1, 90));
}

TEST_CASE("delta0 branches and seam") {
    CHECK(ex::delta0({3, 9}).value == Rational(0));
    CHECK(ex::delta0({3, 12}).value == Rational::of(1, 3));
    CHECK(ex::delta0({3, 13}).value == Rational::of(5, 12));
    CHECK_FALSE(ex::delta0({3, 12}).below_threshold);
    auto low = ex::delta0({3, 8});
    CHECK(low.below_threshold);
    CHECK(low.value < Rational(0));
    // both branches agree at the seam d = k^2 + k
    for (int k = 3; k <= 7; ++k) {
        int seam = k * k + k;
        Rational first = (Rational(seam) - ex::d0(k).value) /
                         (Rational(k * k + k) - ex::d0(k).value) * Rational::of(1, k);
        CHECK(ex::delta0({k, seam}).value == first);
    }
}

TEST_CASE("p0 exact max of branches") {
    CHECK(ex::p0({3, 10}) == Rational::of(20, 11));
    CHECK(ex::p0({3, 12}) == Rational::of(8, 5));
    CHECK_THROWS_AS(ex::p0({3, 3}), precondition_error);
    // brute-force both branches, and monotone non-increasing in d
    Rational prev;
    bool have_prev = false;
    for (int d = 10; d <= 80; ++d) {
        FormParams p{3, d};
        Rational first = Rational::of(d, d - 3);
        Rational second = Rational(1) + Rational(1) / (Rational(1) + Rational(2) * ex::delta0(p).value);
        CHECK(ex::p0(p) == max(first, second));
        if (have_prev) CHECK(ex::p0(p) <= prev);
        prev = ex::p0(p);
        have_prev = true;
        CHECK(ex::p0(p) > Rational(1));
        CHECK(ex::p0(p) < Rational(2));
    }
}

TEST_CASE("r1 and the interpolation line") {
    auto r32 = ex::r1(3, 2);
    CHECK(r32.r1 == Rational(9));
    CHECK(r32.delta_at(Rational(9)) == Rational(0));
    CHECK(r32.delta_at(Rational(12)) == Rational(1));  // k^2 + k = 12
    auto r43 = ex::r1(4, 3);
    CHECK(r43.r1 == Rational(15));
    CHECK(r43.delta_at(Rational(20)) == Rational(1));
    CHECK_THROWS_AS(ex::r1(3, 1), precondition_error);
    CHECK_THROWS_AS(ex::r1(3, 3), precondition_error);
}

TEST_CASE("delta(r) line equals k delta0 inside the first branch") {
    for (int k : {3, 4, 5, 6}) {
        auto line = ex::r1(k, ex::l0(k));
        long long lo = ex::d0(k).value.floor().to_ll() + 1;
        for (long long d = lo; d <= k * k + k; ++d) {
            Rational lhs = line.delta_at(Rational(d));
            Rational rhs = Rational(k) * ex::delta0({k, int(d)}).value;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("alpha_p") {
    CHECK(ex::alpha_p(Rational(2), Rational(0)).value == Rational(0));
    CHECK(ex::alpha_p(Rational(2), Rational::of(1, 3)).value == Rational::of(1, 3));
    CHECK_THROWS_AS(ex::alpha_p(Rational(1), Rational(0)), precondition_error);
    CHECK_THROWS_AS(ex::alpha_p(Rational(3), Rational(0)), precondition_error);
    // alpha vanishes exactly at p = 1 + 1/(1 + 2 delta)
    for (auto delta : {Rational::of(1, 9), Rational::of(1, 3), Rational::of(5, 12), Rational(1)}) {
        Rational p = Rational(1) + Rational(1) / (Rational(1) + Rational(2) * delta);
        auto a = ex::alpha_p(p, delta);
        CHECK(a.value == Rational(0));
        CHECK_FALSE(a.positive);
        Rational eps = Rational::of(1, 1000);
        CHECK(ex::alpha_p(p + eps, delta).positive);
    }
}

TEST_CASE("d0_star growth bounds") {
    for (int k = 3; k <= 30; ++k) {
        long long star = ex::d0_star(k);
        CHECK(2 * star >= 3 * k);  // d0* >= 3k/2
        // d0* <= k^2 except at k = 3, where d0(3) = 9 = k^2 exactly and the
        // floor pushes d0* to k^2 + 1
        CHECK(star <= (long long)k * k + (k == 3 ? 1 : 0));
        if (k >= 10) {
            double dev = std::abs(double(star) - double(k) * k + k);
            CHECK(dev <= 4.0 * std::sqrt(double(k)));
        }
    }
}

TEST_CASE("d1 constants") {
    CHECK(ex::d1(3) == 13);
    CHECK(ex::d1(4) == 23);
    CHECK(ex::d1(10) == 113);
    CHECK_THROWS_AS(ex::d1(2), precondition_error);
}

TEST_CASE("gamma and beta_p") {
    CHECK(ex::gamma_exponent({3, 7}) == Rational::of(1, 3));
    CHECK(ex::gamma_exponent({3, 12}) == Rational::of(1, 2));  // saturates at 1/2
    FormParams p{3, 10};
    Rational p1 = Rational::of(10, 7);
    CHECK(ex::beta_p(p, p1) == Rational(0));
    CHECK(ex::beta_p(p, Rational(2)) > Rational(0));
}

TEST_CASE("exponent budget is deterministic") {
    auto a = ex::budget({3, 11});
    auto b = ex::budget({3, 11});
    CHECK(a.d0 == b.d0);
    CHECK(a.delta0 == b.delta0);
    CHECK(a.p0 == b.p0);
    CHECK(a.tau == b.tau);
    CHECK(a.gamma == b.gamma);
    CHECK(a.d0_star == 10);
    CHECK(a.l0 == 2);
}
