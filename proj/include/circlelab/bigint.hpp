#ifndef CIRCLELAB_BIGINT_HPP
#define CIRCLELAB_BIGINT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace circlelab {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs
// (little-endian). Schoolbook multiplication; division is shift-subtract.
// The limb layout is also the on-disk cache format.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);
    BigInt(unsigned long long v);
    BigInt(long v) : BigInt(static_cast<long long>(v)) {}
    BigInt(unsigned long v) : BigInt(static_cast<unsigned long long>(v)) {}
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(unsigned v) : BigInt(static_cast<unsigned long long>(v)) {}

    static BigInt from_limbs(int sign, std::vector<std::uint32_t> limbs);

    bool is_zero() const { return mag_.empty(); }
    int sign() const { return sign_; }
    const std::vector<std::uint32_t>& limbs() const { return mag_; }
    std::size_t bit_length() const;

    int cmp(const BigInt& o) const;
    bool operator==(const BigInt& o) const { return cmp(o) == 0; }
    bool operator!=(const BigInt& o) const { return cmp(o) != 0; }
    bool operator<(const BigInt& o) const { return cmp(o) < 0; }
    bool operator<=(const BigInt& o) const { return cmp(o) <= 0; }
    bool operator>(const BigInt& o) const { return cmp(o) > 0; }
    bool operator>=(const BigInt& o) const { return cmp(o) >= 0; }

    BigInt operator-() const;
    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
    BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
    BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

    // Quotient truncated toward zero, remainder with the sign of n.
    static void divmod(const BigInt& n, const BigInt& d, BigInt& q, BigInt& r);
    BigInt operator/(const BigInt& o) const;
    BigInt operator%(const BigInt& o) const;

    BigInt shifted_left(unsigned bits) const;
    BigInt shifted_right(unsigned bits) const;
    bool is_even() const { return mag_.empty() || (mag_[0] & 1u) == 0; }

    static BigInt gcd(BigInt a, BigInt b);  // binary gcd, result >= 0
    static BigInt pow(const BigInt& base, unsigned exp);
    BigInt abs() const;

    double to_double() const;
    // Value must fit; callers guard with bit_length().
    std::uint64_t to_u64() const;
    long long to_ll() const;

    std::string to_string() const;  // decimal
    static BigInt parse(const std::string& s);

private:
    void normalize();
    int sign_ = 0;                        // -1, 0, +1
    std::vector<std::uint32_t> mag_;      // little-endian, no leading zeros
};

}

#endif
