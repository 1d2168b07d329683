#include <doctest.h>

#include <numeric>

#include "circlelab/bigint.hpp"
#include "circlelab/prng.hpp"
#include "circlelab/rational.hpp"

using circlelab::BigInt;
using circlelab::Rational;
using circlelab::SplitMix64;

TEST_CASE("bigint arithmetic matches 128-bit oracle") {
    SplitMix64 rng(42);
    for (int i = 0; i < 2000; ++i) {
        long long a = static_cast<long long>(rng.next() >> 16) - (1ll << 46);
        long long b = static_cast<long long>(rng.next() >> 16) - (1ll << 46);
        BigInt A(a), B(b);
        CHECK((A + B).to_ll() == a + b);
        CHECK((A - B).to_ll() == a - b);
        __int128 prod = static_cast<__int128>(a) * b;
        BigInt P = A * B;
        __int128 back = 0;
        bool neg = P.sign() < 0;
        for (std::size_t j = P.limbs().size(); j-- > 0;) back = (back << 32) | P.limbs()[j];
        if (neg) back = -back;
        CHECK(back == prod);
        if (b != 0) {
            BigInt q, r;
            BigInt::divmod(A, B, q, r);
            CHECK(q.to_ll() == a / b);
            CHECK(r.to_ll() == a % b);
        }
    }
}

TEST_CASE("bigint gcd matches std::gcd") {
    SplitMix64 rng(7);
    for (int i = 0; i < 500; ++i) {
        unsigned long long a = rng.next() >> 12, b = rng.next() >> 12;
        CHECK(BigInt::gcd(BigInt(a), BigInt(b)).to_u64() == std::gcd(a, b));
    }
}

TEST_CASE("bigint decimal round trip and big products") {
    BigInt v(1);
    for (int i = 0; i < 30; ++i) v *= BigInt(1000000007ll);
    std::string s = v.to_string();
    CHECK(BigInt::parse(s) == v);
    CHECK(s.size() > 200);
    CHECK(BigInt::parse("-123").to_ll() == -123);
    CHECK(BigInt(0).to_string() == "0");
    CHECK(BigInt::pow(BigInt(2), 100).to_string() == "1267650600228229401496703205376");
}

TEST_CASE("bigint shifts and to_double") {
    BigInt one(1);
    CHECK(one.shifted_left(100).shifted_right(100) == one);
    CHECK(BigInt(12345).to_double() == 12345.0);
    double big = BigInt::pow(BigInt(10), 30).to_double();
    CHECK(big == doctest::Approx(1e30).epsilon(1e-12));
}

TEST_CASE("rational normalization and arithmetic") {
    Rational r = Rational::of(6, -4);
    CHECK(r.num.to_ll() == -3);
    CHECK(r.den.to_ll() == 2);
    CHECK(r.to_string() == "-3/2");
    CHECK((Rational::of(1, 3) + Rational::of(1, 6)) == Rational::of(1, 2));
    CHECK((Rational::of(2, 3) * Rational::of(9, 4)) == Rational::of(3, 2));
    CHECK((Rational::of(1, 3) / Rational::of(2, 3)) == Rational::of(1, 2));
    CHECK(Rational::of(7, 2).floor().to_ll() == 3);
    CHECK(Rational::of(-7, 2).floor().to_ll() == -4);
    CHECK(Rational::of(1, 3).to_double() == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(Rational::of(1, 2) < Rational::of(2, 3));
}

TEST_CASE("rational evaluation is reproducible") {
    auto compute = [] {
        Rational acc;
        for (long long q = 1; q <= 50; ++q) acc += Rational::of(1, q * q);
        return acc;
    };
    Rational a = compute(), b = compute();
    CHECK(a == b);
    CHECK(a.to_string() == b.to_string());
}
