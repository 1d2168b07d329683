#include "circlelab/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace circlelab {

Rational::Rational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::domain_error("Rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den.sign() < 0) { num = -num; den = -den; }
    if (num.is_zero()) { den = BigInt(1); return; }
    BigInt g = BigInt::gcd(num.abs(), den);
    if (g > BigInt(1)) { num = num / g; den = den / g; }
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num = -r.num;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(num * o.den, den * o.num);
}

int Rational::cmp(const Rational& o) const {
    return (num * o.den).cmp(o.num * den);
}

BigInt Rational::floor() const {
    BigInt q, r;
    BigInt::divmod(num, den, q, r);
    if (num.sign() < 0 && !r.is_zero()) q -= BigInt(1);
    return q;
}

double Rational::to_double() const {
    // scale so the quotient's leading ~60 bits are exact, then adjust
    std::size_t nb = num.bit_length(), db = den.bit_length();
    if (num.is_zero()) return 0.0;
    int shift = static_cast<int>(db) - static_cast<int>(nb) + 64;
    BigInt scaled = shift >= 0 ? num.shifted_left(static_cast<unsigned>(shift))
                               : num.shifted_right(static_cast<unsigned>(-shift));
    BigInt q = scaled / den;
    return std::ldexp(q.to_double(), -shift);
}

std::string Rational::to_string() const {
    if (is_integer()) return num.to_string();
    return num.to_string() + "/" + den.to_string();
}

Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }

}
