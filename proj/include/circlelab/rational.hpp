#ifndef CIRCLELAB_RATIONAL_HPP
#define CIRCLELAB_RATIONAL_HPP

#include <string>

#include "circlelab/bigint.hpp"

namespace circlelab {

// Exact rational on BigInt, always normalized with positive denominator.
struct Rational {
    BigInt num;
    BigInt den{1};

    Rational() = default;
    Rational(long long v) : num(v) {}
    Rational(const BigInt& n) : num(n) {}
    Rational(BigInt n, BigInt d);
    static Rational of(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

    bool is_zero() const { return num.is_zero(); }
    bool is_negative() const { return num.sign() < 0; }
    bool is_integer() const { return den == BigInt(1); }

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    int cmp(const Rational& o) const;
    bool operator==(const Rational& o) const { return cmp(o) == 0; }
    bool operator!=(const Rational& o) const { return cmp(o) != 0; }
    bool operator<(const Rational& o) const { return cmp(o) < 0; }
    bool operator<=(const Rational& o) const { return cmp(o) <= 0; }
    bool operator>(const Rational& o) const { return cmp(o) > 0; }
    bool operator>=(const Rational& o) const { return cmp(o) >= 0; }

    BigInt floor() const;
    double to_double() const;
    std::string to_string() const;  // "num/den", or "num" when integral

private:
    void normalize();
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}

#endif
