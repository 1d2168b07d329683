#ifndef CIRCLELAB_ARCS_HPP
#define CIRCLELAB_ARCS_HPP

#include <cstdint>
#include <vector>

#include "circlelab/rational.hpp"
#include "circlelab/errors.hpp"

namespace circlelab::arcs {

// One major arc [a/q - r, a/q + r] with r = 1/(4 k q N^{k-1}).
struct Arc {
    std::uint64_t a;
    std::uint64_t q;
};

struct Classification {
    bool major = false;
    std::uint64_t a = 0;
    std::uint64_t q = 0;
};

// Farey dissection of T at level N for degree k. Arcs are stored as reduced
// fractions (including both 0/1 and 1/1) sorted by center; centers and radii
// are exact rationals derived on demand. Immutable after construction.
class ArcDissection {
public:
    static ArcDissection dissect(std::int64_t N, int k);

    std::int64_t level() const { return n_; }
    int degree() const { return k_; }
    std::size_t size() const { return arcs_.size(); }
    const Arc& arc(std::size_t i) const { return arcs_[i]; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    Rational center(std::size_t i) const;
    Rational radius(std::size_t i) const;  // same for all arcs of denominator q
    Rational radius_for(std::uint64_t q) const;

    // theta in [0,1); theta is snapped to floor(theta*2^64)/2^64 and compared
    // exactly, so boundary behavior is bit-reproducible. Closed arcs.
    Classification classify(double theta) const;
    // fully exact variant for rational test inputs
    Classification classify_rational(const Rational& theta) const;
    // linear scan over all arcs; oracle for the binary search
    Classification classify_linear(double theta) const;

    // total length of the major arcs as an exact rational (the two half arcs
    // at 0/1 and 1/1 wrap to a single arc); second value is 1 - measure
    std::pair<Rational, Rational> major_total_measure() const;

private:
    std::int64_t n_ = 0;
    int k_ = 0;
    std::vector<Arc> arcs_;
    BigInt denom_;             // 4 k N^{k-1}
    bool denom_fits_u64_ = false;
    std::uint64_t denom_u64_ = 0;
    Classification check_snapped(std::size_t idx, unsigned __int128 m) const;
};

// Independent interval-merge oracle for the union measure (test support).
Rational merged_measure_oracle(const ArcDissection& d);

// Euler phi for 1..n by sieve.
std::vector<std::uint32_t> phi_sieve(std::uint32_t n);

}

#endif
