#include "circlelab/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circlelab {

namespace {

using Limbs = std::vector<std::uint32_t>;

void trim(Limbs& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

int cmp_mag(const Limbs& a, const Limbs& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

Limbs add_mag(const Limbs& a, const Limbs& b) {
    const Limbs& lo = a.size() < b.size() ? a : b;
    const Limbs& hi = a.size() < b.size() ? b : a;
    Limbs out(hi.size() + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < hi.size(); ++i) {
        std::uint64_t s = carry + hi[i] + (i < lo.size() ? lo[i] : 0u);
        out[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
    }
    out[hi.size()] = static_cast<std::uint32_t>(carry);
    trim(out);
    return out;
}

// requires |a| >= |b|
Limbs sub_mag(const Limbs& a, const Limbs& b) {
    Limbs out(a.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t s = std::int64_t(a[i]) - borrow - (i < b.size() ? std::int64_t(b[i]) : 0);
        if (s < 0) { s += (std::int64_t(1) << 32); borrow = 1; } else borrow = 0;
        out[i] = static_cast<std::uint32_t>(s);
    }
    trim(out);
    return out;
}

Limbs mul_mag(const Limbs& a, const Limbs& b) {
    if (a.empty() || b.empty()) return {};
    Limbs out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t carry = 0;
        std::uint64_t ai = a[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t s = std::uint64_t(out[i + j]) + ai * b[j] + carry;
            out[i + j] = static_cast<std::uint32_t>(s);
            carry = s >> 32;
        }
        out[i + b.size()] += static_cast<std::uint32_t>(carry);
    }
    trim(out);
    return out;
}

Limbs shl_mag(const Limbs& a, unsigned bits) {
    if (a.empty()) return {};
    unsigned words = bits / 32, rem = bits % 32;
    Limbs out(a.size() + words + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t v = std::uint64_t(a[i]) << rem;
        out[i + words] |= static_cast<std::uint32_t>(v);
        out[i + words + 1] |= static_cast<std::uint32_t>(v >> 32);
    }
    trim(out);
    return out;
}

Limbs shr_mag(const Limbs& a, unsigned bits) {
    unsigned words = bits / 32, rem = bits % 32;
    if (words >= a.size()) return {};
    Limbs out(a.size() - words, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t v = std::uint64_t(a[i + words]) >> rem;
        if (rem && i + words + 1 < a.size())
            v |= std::uint64_t(a[i + words + 1]) << (32 - rem);
        out[i] = static_cast<std::uint32_t>(v);
    }
    trim(out);
    return out;
}

std::size_t bit_length_mag(const Limbs& a) {
    if (a.empty()) return 0;
    std::uint32_t top = a.back();
    std::size_t bits = (a.size() - 1) * 32;
    while (top) { ++bits; top >>= 1; }
    return bits;
}

// divide magnitude by a small value, return remainder
std::uint32_t divmod_small(Limbs& a, std::uint32_t d) {
    std::uint64_t rem = 0;
    for (std::size_t i = a.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | a[i];
        a[i] = static_cast<std::uint32_t>(cur / d);
        rem = cur % d;
    }
    trim(a);
    return static_cast<std::uint32_t>(rem);
}

}  // namespace

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    unsigned long long m = v < 0 ? ~static_cast<unsigned long long>(v) + 1ull
                                 : static_cast<unsigned long long>(v);
    while (m) { mag_.push_back(static_cast<std::uint32_t>(m)); m >>= 32; }
}

BigInt::BigInt(unsigned long long v) {
    if (v == 0) return;
    sign_ = 1;
    while (v) { mag_.push_back(static_cast<std::uint32_t>(v)); v >>= 32; }
}

BigInt BigInt::from_limbs(int sign, std::vector<std::uint32_t> limbs) {
    BigInt r;
    r.mag_ = std::move(limbs);
    trim(r.mag_);
    r.sign_ = r.mag_.empty() ? 0 : (sign < 0 ? -1 : 1);
    return r;
}

void BigInt::normalize() {
    trim(mag_);
    if (mag_.empty()) sign_ = 0;
}

std::size_t BigInt::bit_length() const { return bit_length_mag(mag_); }

int BigInt::cmp(const BigInt& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_ ? -1 : 1;
    int c = cmp_mag(mag_, o.mag_);
    return sign_ >= 0 ? c : -c;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    BigInt r;
    if (sign_ == o.sign_) {
        r.mag_ = add_mag(mag_, o.mag_);
        r.sign_ = sign_;
    } else {
        int c = cmp_mag(mag_, o.mag_);
        if (c == 0) return BigInt();
        if (c > 0) { r.mag_ = sub_mag(mag_, o.mag_); r.sign_ = sign_; }
        else { r.mag_ = sub_mag(o.mag_, mag_); r.sign_ = o.sign_; }
    }
    r.normalize();
    return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
    BigInt r;
    r.mag_ = mul_mag(mag_, o.mag_);
    r.sign_ = (mag_.empty() || o.mag_.empty()) ? 0 : sign_ * o.sign_;
    r.normalize();
    return r;
}

void BigInt::divmod(const BigInt& n, const BigInt& d, BigInt& q, BigInt& r) {
    if (d.is_zero()) throw std::domain_error("BigInt: division by zero");
    int c = cmp_mag(n.mag_, d.mag_);
    if (c < 0) { q = BigInt(); r = n; return; }
    // shift-subtract long division on magnitudes
    std::size_t shift = bit_length_mag(n.mag_) - bit_length_mag(d.mag_);
    Limbs rem = n.mag_;
    Limbs quo((shift / 32) + 1, 0);
    Limbs dd = shl_mag(d.mag_, static_cast<unsigned>(shift));
    for (std::size_t s = shift + 1; s-- > 0;) {
        if (cmp_mag(rem, dd) >= 0) {
            rem = sub_mag(rem, dd);
            quo[s / 32] |= (1u << (s % 32));
        }
        dd = shr_mag(dd, 1);
    }
    trim(quo);
    trim(rem);
    q = BigInt();
    q.mag_ = std::move(quo);
    q.sign_ = q.mag_.empty() ? 0 : n.sign_ * d.sign_;
    r = BigInt();
    r.mag_ = std::move(rem);
    r.sign_ = r.mag_.empty() ? 0 : n.sign_;
}

BigInt BigInt::operator/(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return r;
}

BigInt BigInt::shifted_left(unsigned bits) const {
    BigInt r = *this;
    r.mag_ = shl_mag(mag_, bits);
    r.normalize();
    return r;
}

BigInt BigInt::shifted_right(unsigned bits) const {
    BigInt r = *this;
    r.mag_ = shr_mag(mag_, bits);
    r.normalize();
    return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    unsigned common = 0;
    while (a.is_even() && b.is_even()) {
        a = a.shifted_right(1);
        b = b.shifted_right(1);
        ++common;
    }
    while (a.is_even()) a = a.shifted_right(1);
    while (!b.is_zero()) {
        while (b.is_even()) b = b.shifted_right(1);
        if (cmp_mag(a.mag_, b.mag_) > 0) std::swap(a, b);
        b = b - a;
    }
    return a.shifted_left(common);
}

BigInt BigInt::pow(const BigInt& base, unsigned exp) {
    BigInt r(1), b = base;
    while (exp) {
        if (exp & 1u) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

double BigInt::to_double() const {
    if (mag_.empty()) return 0.0;
    double v = 0.0;
    std::size_t n = mag_.size();
    std::size_t take = std::min<std::size_t>(n, 3);  // 96 top bits is plenty
    for (std::size_t i = 0; i < take; ++i)
        v = v * 4294967296.0 + mag_[n - 1 - i];
    v = std::ldexp(v, 32 * static_cast<int>(n - take));
    return sign_ < 0 ? -v : v;
}

std::uint64_t BigInt::to_u64() const {
    std::uint64_t v = 0;
    if (mag_.size() > 2) throw std::overflow_error("BigInt: does not fit u64");
    for (std::size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
    return v;
}

long long BigInt::to_ll() const {
    std::uint64_t v = to_u64();
    if (sign_ >= 0) {
        if (v > 0x7fffffffffffffffull) throw std::overflow_error("BigInt: does not fit ll");
        return static_cast<long long>(v);
    }
    if (v > 0x8000000000000000ull) throw std::overflow_error("BigInt: does not fit ll");
    return -static_cast<long long>(v - 1) - 1;
}

std::string BigInt::to_string() const {
    if (mag_.empty()) return "0";
    Limbs tmp = mag_;
    std::string digits;
    while (!tmp.empty()) {
        std::uint32_t rem = divmod_small(tmp, 1000000000u);
        if (tmp.empty()) {
            std::string head = std::to_string(rem);
            std::reverse(head.begin(), head.end());
            digits += head;
        } else {
            for (int i = 0; i < 9; ++i) { digits += char('0' + rem % 10); rem /= 10; }
        }
    }
    if (sign_ < 0) digits += '-';
    std::reverse(digits.begin(), digits.end());
    return digits;
}

BigInt BigInt::parse(const std::string& s) {
    BigInt r;
    std::size_t i = 0;
    int sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sign = -1;
        ++i;
    }
    if (i == s.size()) throw std::invalid_argument("BigInt: empty literal");
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
        r = r * BigInt(10) + BigInt(s[i] - '0');
    }
    if (sign < 0) r = -r;
    return r;
}

}
