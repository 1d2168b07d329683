#include "circlelab/arcs.hpp"

#include <algorithm>
#include <cmath>

namespace circlelab::arcs {

namespace {

using u128 = unsigned __int128;

// floor(theta * 2^64) for theta in [0,1]; exact since scaling by 2^64 is a
// pure exponent shift on the double
u128 snap64(double theta) {
    if (theta <= 0.0) return 0;
    if (theta >= 1.0) return u128(1) << 64;
    long double scaled = std::ldexp(static_cast<long double>(theta), 64);
    return static_cast<u128>(scaled);
}

}  // namespace

ArcDissection ArcDissection::dissect(std::int64_t N, int k) {
    if (N < 1) throw precondition_error("arcs: level N must be >= 1");
    if (k < 2) throw precondition_error("arcs: degree k must be >= 2");
    ArcDissection d;
    d.n_ = N;
    d.k_ = k;
    d.denom_ = BigInt(4ll * k) * BigInt::pow(BigInt(N), static_cast<unsigned>(k - 1));
    if (d.denom_.bit_length() <= 52) {
        d.denom_fits_u64_ = true;
        d.denom_u64_ = d.denom_.to_u64();
    }
    // Farey sequence of order N by the standard next-term recurrence
    std::uint64_t a = 0, b = 1, c = 1, q = static_cast<std::uint64_t>(N);
    d.arcs_.push_back({0, 1});
    while (c <= static_cast<std::uint64_t>(N) && !(c == 1 && q == 1)) {
        d.arcs_.push_back({c, q});
        std::uint64_t t = (static_cast<std::uint64_t>(N) + b) / q;
        std::uint64_t c2 = t * c - a, q2 = t * q - b;
        a = c; b = q; c = c2; q = q2;
    }
    d.arcs_.push_back({1, 1});
    // adjacent arcs are disjoint iff q + q' < 4 k N^{k-1}; assert exactly
    for (std::size_t i = 0; i + 1 < d.arcs_.size(); ++i) {
        BigInt qsum(static_cast<long long>(d.arcs_[i].q + d.arcs_[i + 1].q));
        if (!(qsum < d.denom_))
            throw std::logic_error("arcs: adjacent major arcs are not disjoint");
    }
    return d;
}

Rational ArcDissection::center(std::size_t i) const {
    const Arc& A = arcs_[i];
    return Rational(BigInt(A.a), BigInt(A.q));
}

Rational ArcDissection::radius_for(std::uint64_t q) const {
    return Rational(BigInt(1), BigInt(static_cast<long long>(q)) * denom_);
}

Rational ArcDissection::radius(std::size_t i) const { return radius_for(arcs_[i].q); }

Classification ArcDissection::check_snapped(std::size_t idx, u128 m) const {
    // |m/2^64 - a/q| <= 1/(q * 4kN^{k-1})  <=>  |m q - a 2^64| * 4kN^{k-1} <= 2^64
    const Arc& A = arcs_[idx];
    u128 lhs = m * A.q;
    u128 rhs = u128(A.a) << 64;
    u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    if (denom_fits_u64_) {
        // diff < 2^64 * q <= 2^64 * N; guard the product against overflow
        u128 limit = u128(1) << 64;
        if (diff > limit) return {};  // certainly too far once diff > 2^64
        if (diff * denom_u64_ <= limit) return {true, A.a, A.q};
        return {};
    }
    // slow exact path for extreme parameters
    BigInt diff_big = BigInt(static_cast<unsigned long long>(diff >> 64)).shifted_left(64) +
                      BigInt(static_cast<unsigned long long>(diff));
    BigInt lim = BigInt(1).shifted_left(64);
    if (diff_big * denom_ <= lim) return {true, A.a, A.q};
    return {};
}

Classification ArcDissection::classify(double theta) const {
    u128 m = snap64(theta);
    if (m >= (u128(1) << 64)) m = 0;  // theta = 1 is the wrapped 0/1 center
    // binary search for the last center <= theta
    std::size_t lo = 0, hi = arcs_.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        // center <= m/2^64  <=>  a * 2^64 <= m * q
        const Arc& A = arcs_[mid];
        if ((u128(A.a) << 64) <= m * A.q) lo = mid; else hi = mid - 1;
    }
    Classification c = check_snapped(lo, m);
    if (c.major) return c;
    if (lo + 1 < arcs_.size()) {
        c = check_snapped(lo + 1, m);
        if (c.major) return c;
    }
    // wrap: points near 1 belong to the 1/1 arc, near 0 to the 0/1 arc
    c = check_snapped(0, m);
    if (c.major) return c;
    c = check_snapped(arcs_.size() - 1, m);
    if (c.major) return c;
    return {};
}

Classification ArcDissection::classify_linear(double theta) const {
    u128 m = snap64(theta);
    if (m >= (u128(1) << 64)) m = 0;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        Classification c = check_snapped(i, m);
        if (c.major) return c;
    }
    return {};
}

Classification ArcDissection::classify_rational(const Rational& theta) const {
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        Rational diff = theta - center(i);
        if (diff.is_negative()) diff = -diff;
        if (diff <= radius(i)) return {true, arcs_[i].a, arcs_[i].q};
    }
    return {};
}

std::pair<Rational, Rational> ArcDissection::major_total_measure() const {
    // one wrapped arc for the 0/1, 1/1 pair; every interior a/q contributes 2r_q
    Rational total = Rational(2) * radius_for(1);
    for (std::size_t i = 1; i + 1 < arcs_.size(); ++i)
        total += Rational(2) * radius(i);
    return {total, Rational(1) - total};
}

Rational merged_measure_oracle(const ArcDissection& d) {
    // clip every arc to [0,1], merge, and sum lengths
    std::vector<std::pair<Rational, Rational>> iv;
    for (std::size_t i = 0; i < d.size(); ++i) {
        Rational lo = d.center(i) - d.radius(i);
        Rational hi = d.center(i) + d.radius(i);
        if (lo < Rational(0)) {  // wrap below 0 onto [1-r, 1]
            iv.emplace_back(Rational(0), hi);
            iv.emplace_back(lo + Rational(1), Rational(1));
        } else if (hi > Rational(1)) {
            iv.emplace_back(lo, Rational(1));
            iv.emplace_back(Rational(0), hi - Rational(1));
        } else {
            iv.emplace_back(lo, hi);
        }
    }
    std::sort(iv.begin(), iv.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Rational total;
    Rational cur_lo, cur_hi;
    bool open = false;
    for (const auto& [lo, hi] : iv) {
        if (!open) { cur_lo = lo; cur_hi = hi; open = true; continue; }
        if (lo <= cur_hi) {
            cur_hi = max(cur_hi, hi);
        } else {
            total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        }
    }
    if (open) total += cur_hi - cur_lo;
    return total;
}

std::vector<std::uint32_t> phi_sieve(std::uint32_t n) {
    std::vector<std::uint32_t> phi(n + 1);
    for (std::uint32_t i = 0; i <= n; ++i) phi[i] = i;
    for (std::uint32_t p = 2; p <= n; ++p) {
        if (phi[p] == p) {  // prime
            for (std::uint32_t m = p; m <= n; m += p) phi[m] -= phi[m] / p;
        }
    }
    return phi;
}

}
