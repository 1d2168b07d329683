#ifndef CIRCLELAB_EXPONENTS_HPP
#define CIRCLELAB_EXPONENTS_HPP

#include <utility>
#include <vector>

#include "circlelab/formparams.hpp"
#include "circlelab/rational.hpp"

namespace circlelab::exponents {

// d0(k) = k^2 - max_{2<=j<=k-1} (kj - min(2^j+2, j^2+j))/(k-j+1),
// together with the maximizing index (ties broken by smallest j).
struct D0Result {
    Rational value;
    int maximizer;  // l0(k)
};
D0Result d0(int k);
long long d0_star(int k);  // 1 + floor(d0(k))
int l0(int k);

// dimension threshold of the prime-coordinate variant: 13 for k = 3,
// k^2 + k + 3 otherwise (exposed as published constants only)
long long d1(int k);

// tau_k = max(2^{1-k}, 1/(k^2-k))
Rational tau(int k);

// k*delta0 = (d-d0)/(k^2+k-d0) on d <= k^2+k, else 1 + (d-k^2-k)*tau_k.
// For d < d0 the first branch's value is returned with the regime flag set.
struct Delta0Result {
    Rational value;
    bool below_threshold;  // d < d0(k): value is <= 0, outside the theorem range
};
Delta0Result delta0(const FormParams& params);

// p0 = max(d/(d-k), 1 + 1/(1+2*delta0)); requires d > k
Rational p0(const FormParams& params);

// r1(k,l) and the interpolation line delta(r) with delta(r1)=0, delta(k^2+k)=1
struct R1Result {
    Rational r1;
    int k;
    Rational delta_at(const Rational& r) const;
};
R1Result r1(int k, int l);

// alpha_p = 2(1+delta)(1-1/p) - 1 for p in (1,2], delta >= 0
struct AlphaResult {
    Rational value;
    bool positive;
};
AlphaResult alpha_p(const Rational& p, const Rational& delta);

// gamma = min(d/k - 2, 1/2)
Rational gamma_exponent(const FormParams& params);

// open-form major-arc interpolation exponent 2*gamma*(p-p1)/(k*p*(2-p1)),
// p1 = d/(d-k); a formula evaluation, not a sharpness claim
Rational beta_p(const FormParams& params, const Rational& p);

// Every closed-form exponent for one (d,k).
struct ExponentBudget {
    FormParams params;
    Rational d0;
    long long d0_star;
    int l0;
    Rational tau;
    Rational delta0;
    bool delta0_below_threshold;
    Rational p0;            // valid when d > k
    bool p0_defined;
    Rational gamma;
};
ExponentBudget budget(const FormParams& params);

// Table 1 row: (k, d0_star(k)) for k = 3..10
std::vector<std::pair<int, long long>> table1();

}

#endif
