#include "circlelab/exponents.hpp"

namespace circlelab::exponents {

namespace {

// (k*l - min(2^l+2, l^2+l)) / (k-l+1)
Rational penalty_term(int k, int l) {
    BigInt two_l = BigInt::pow(BigInt(2), static_cast<unsigned>(l)) + BigInt(2);
    BigInt quad = BigInt(static_cast<long long>(l) * l + l);
    BigInt m = two_l < quad ? two_l : quad;
    return Rational(BigInt(static_cast<long long>(k) * l) - m, BigInt(k - l + 1));
}

void require_degree(int k) {
    if (k < 3) throw precondition_error("exponents: requires k >= 3 (empty index range for k < 3)");
}

}  // namespace

D0Result d0(int k) {
    require_degree(k);
    Rational best;
    int best_j = 0;
    for (int j = 2; j <= k - 1; ++j) {
        Rational t = penalty_term(k, j);
        if (best_j == 0 || t > best) {  // ties keep the smallest j
            best = t;
            best_j = j;
        }
    }
    return {Rational(static_cast<long long>(k) * k) - best, best_j};
}

long long d0_star(int k) {
    return 1 + d0(k).value.floor().to_ll();
}

int l0(int k) { return d0(k).maximizer; }

long long d1(int k) {
    require_degree(k);
    return k == 3 ? 13 : static_cast<long long>(k) * k + k + 3;
}

Rational tau(int k) {
    require_degree(k);
    Rational a(BigInt(1), BigInt::pow(BigInt(2), static_cast<unsigned>(k - 1)));
    Rational b(BigInt(1), BigInt(static_cast<long long>(k) * k - k));
    return max(a, b);
}

Delta0Result delta0(const FormParams& params) {
    require_degree(params.k);
    params.validate();
    const int k = params.k;
    const long long d = params.d;
    Rational d0v = d0(k).value;
    Rational kk1(static_cast<long long>(k) * k + k);
    Rational inv_k = Rational::of(1, k);
    if (Rational(d) > kk1) {
        Rational v = (Rational(1) + (Rational(d) - kk1) * tau(k)) * inv_k;
        return {v, false};
    }
    Rational v = (Rational(d) - d0v) / (kk1 - d0v) * inv_k;
    return {v, Rational(d) < d0v};
}

Rational p0(const FormParams& params) {
    require_degree(params.k);
    if (params.d <= params.k)
        throw precondition_error("p0: requires d > k");
    Rational first = Rational::of(params.d, params.d - params.k);
    Rational d0v = delta0(params).value;
    Rational second = Rational(1) + Rational(1) / (Rational(1) + Rational(2) * d0v);
    return max(first, second);
}

Rational R1Result::delta_at(const Rational& r) const {
    Rational top(static_cast<long long>(k) * k + k);
    return (r - r1) / (top - r1);
}

R1Result r1(int k, int l) {
    require_degree(k);
    if (l < 2 || l > k - 1)
        throw precondition_error("r1: requires 2 <= l <= k-1");
    return {Rational(static_cast<long long>(k) * k) - penalty_term(k, l), k};
}

AlphaResult alpha_p(const Rational& p, const Rational& delta) {
    if (p <= Rational(1) || p > Rational(2))
        throw precondition_error("alpha_p: requires 1 < p <= 2");
    if (delta.is_negative())
        throw precondition_error("alpha_p: requires delta >= 0");
    Rational v = Rational(2) * (Rational(1) + delta) * (Rational(1) - Rational(1) / p) - Rational(1);
    return {v, v > Rational(0)};
}

Rational gamma_exponent(const FormParams& params) {
    params.validate();
    Rational a = Rational::of(params.d, params.k) - Rational(2);
    return min(a, Rational::of(1, 2));
}

Rational beta_p(const FormParams& params, const Rational& p) {
    if (params.d <= params.k) throw precondition_error("beta_p: requires d > k");
    Rational p1 = Rational::of(params.d, params.d - params.k);
    Rational g = gamma_exponent(params);
    return Rational(2) * g * (p - p1) / (Rational(params.k) * p * (Rational(2) - p1));
}

ExponentBudget budget(const FormParams& params) {
    ExponentBudget b;
    b.params = params;
    auto d0r = d0(params.k);
    b.d0 = d0r.value;
    b.l0 = d0r.maximizer;
    b.d0_star = 1 + d0r.value.floor().to_ll();
    b.tau = tau(params.k);
    auto d0res = delta0(params);
    b.delta0 = d0res.value;
    b.delta0_below_threshold = d0res.below_threshold;
    b.p0_defined = params.d > params.k;
    if (b.p0_defined) b.p0 = p0(params);
    b.gamma = gamma_exponent(params);
    return b;
}

std::vector<std::pair<int, long long>> table1() {
    std::vector<std::pair<int, long long>> rows;
    for (int k = 3; k <= 10; ++k) rows.emplace_back(k, d0_star(k));
    return rows;
}

}
