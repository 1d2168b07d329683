#include "circlelab/expsum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "circlelab/prng.hpp"

namespace circlelab::expsum {

namespace {

using u128 = unsigned __int128;
constexpr double two_pi = 2.0 * std::numbers::pi;

double u128_to_double(u128 v) {
    return std::ldexp(double(std::uint64_t(v >> 64)), 64) + double(std::uint64_t(v));
}

std::uint64_t ipow_u64(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return std::uint64_t((u128)a * b % q);
}

std::uint64_t powmod(std::uint64_t base, int exp, std::uint64_t q) {
    std::uint64_t r = 1 % q;
    base %= q;
    for (int i = 0; i < exp; ++i) r = mulmod(r, base, q);
    return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) { std::uint64_t t = a % b; a = b; b = t; }
    return a;
}

}  // namespace

std::complex<double> unit_phase(double x) {
    return {std::cos(two_pi * x), std::sin(two_pi * x)};
}

double frac_mul(double x, std::uint64_t n) {
    if (x == 0.0 || n == 0) return 0.0;
    bool neg = x < 0;
    double ax = neg ? -x : x;
    double f = std::floor(ax);
    ax -= f;  // phases only matter mod 1
    if (ax == 0.0) return 0.0;
    int e;
    double m = std::frexp(ax, &e);           // ax = m * 2^e, m in [0.5, 1)
    std::uint64_t mant = std::uint64_t(std::ldexp(m, 53));  // exact 53-bit integer
    int shift = 53 - e;                      // ax = mant / 2^shift, shift >= 53
    double r;
    if (shift >= 128) {
        r = ax * double(n);                  // product < 2^-11, cannot wrap
    } else {
        u128 prod = (u128)mant * n;
        u128 mask = shift == 128 ? ~u128(0) : ((u128(1) << shift) - 1);
        u128 fracbits = prod & mask;
        r = std::ldexp(u128_to_double(fracbits), -shift);
    }
    if (neg && r != 0.0) r = 1.0 - r;
    return r;
}

std::complex<double> s_n(double theta, double xi, std::int64_t N, int k) {
    if (N < 0) throw precondition_error("s_n: N must be >= 0");
    std::complex<double> acc{1.0, 0.0};  // n = 0 term
    for (std::int64_t n = 1; n <= N; ++n) {
        double pt = frac_mul(theta, ipow_u64(std::uint64_t(n), k));
        double px = frac_mul(xi, std::uint64_t(n));
        acc += unit_phase(pt + px) + unit_phase(pt - px);
    }
    return acc;
}

std::complex<double> f_n(double theta, std::span<const double> xi, std::int64_t N,
                         const FormParams& params) {
    params.validate();
    if (static_cast<int>(xi.size()) != params.d)
        throw precondition_error("f_n: xi dimension mismatch");
    std::complex<double> prod{1.0, 0.0};
    for (double x : xi) prod *= s_n(theta, x, N, params.k);
    return prod;
}

std::complex<double> weyl_sum(const PhaseVector& phase, std::int64_t N, int k) {
    if (N < 1) throw precondition_error("weyl_sum: N must be >= 1");
    if (static_cast<int>(phase.xi.size()) > k - 1)
        throw precondition_error("weyl_sum: lower-order phase degree must be < k");
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t n = 1; n <= N; ++n) {
        double p = frac_mul(phase.theta, ipow_u64(std::uint64_t(n), k));
        std::uint64_t np = 1;
        for (std::size_t j = 0; j < phase.xi.size(); ++j) {
            np *= std::uint64_t(n);
            p += frac_mul(phase.xi[j], np);
        }
        acc += unit_phase(p - std::floor(p));
    }
    return acc;
}

GaussSum gauss_sum(std::uint64_t q, std::uint64_t a, std::uint64_t b, int k) {
    if (q < 1) throw precondition_error("gauss_sum: q must be >= 1");
    if (q > (1ull << 31)) throw precondition_error("gauss_sum: q too large");
    a %= q;
    b %= q;
    if (gcd_u64(a == 0 ? q : a, q) != 1)
        throw precondition_error("gauss_sum: gcd(a, q) must be 1");
    std::complex<double> acc{0.0, 0.0};
    for (std::uint64_t x = 0; x < q; ++x) {
        std::uint64_t r = (mulmod(a, powmod(x, k, q), q) + mulmod(b, x, q)) % q;
        acc += unit_phase(double(r) / double(q));
    }
    if (q == 1) acc = {1.0, 0.0};
    return {q, a, b, k, acc / double(q)};
}

std::complex<double> gauss_sum_multi(std::uint64_t q, std::uint64_t a,
                                     std::span<const std::uint64_t> b, const FormParams& params) {
    params.validate();
    if (static_cast<int>(b.size()) != params.d)
        throw precondition_error("gauss_sum_multi: b dimension mismatch");
    std::complex<double> prod{1.0, 0.0};
    for (std::uint64_t bj : b) prod *= gauss_sum(q, a, bj, params.k).value;
    return prod;
}

std::pair<std::complex<double>, std::complex<double>>
gauss_fourier_check(std::uint64_t q, std::uint64_t a, std::uint64_t m, int k) {
    std::complex<double> lhs{0.0, 0.0};
    m %= q;
    for (std::uint64_t b = 0; b < q; ++b) {
        std::uint64_t r = mulmod(m, b, q);
        lhs += std::conj(unit_phase(double(r) / double(q))) * gauss_sum(q, a, b, k).value;
    }
    if (q == 1) lhs = {1.0, 0.0};
    std::uint64_t rr = mulmod(a % q, powmod(m, k, q), q);
    return {lhs, unit_phase(double(rr) / double(q))};
}

namespace {

struct PowKey {
    std::array<std::uint64_t, 5> v{};
    bool operator==(const PowKey& o) const { return v == o.v; }
};

struct PowKeyHash {
    std::size_t operator()(const PowKey& k) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (std::uint64_t x : k.v) {
            h ^= x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
            h *= 0xBF58476D1CE4E5B9ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// visit every multiset of size s from {1..N} as a non-decreasing tuple,
// with its number of distinct orderings
template <typename Fn>
void for_each_multiset(int s, std::int64_t N, Fn&& fn) {
    std::vector<std::int64_t> tup(static_cast<std::size_t>(s), 1);
    std::vector<std::uint64_t> fact(static_cast<std::size_t>(s) + 1, 1);
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * i;
    for (;;) {
        std::uint64_t perms = fact[static_cast<std::size_t>(s)];
        std::size_t run = 1;
        for (std::size_t i = 1; i < tup.size(); ++i) {
            if (tup[i] == tup[i - 1]) ++run;
            else { perms /= fact[run]; run = 1; }
        }
        perms /= fact[run];
        fn(tup, perms);
        int j = s - 1;
        while (j >= 0 && tup[static_cast<std::size_t>(j)] == N) --j;
        if (j < 0) break;
        std::int64_t v = tup[static_cast<std::size_t>(j)] + 1;
        for (int i = j; i < s; ++i) tup[static_cast<std::size_t>(i)] = v;
    }
}

}  // namespace

BigInt vinogradov_count(int s, int k, std::int64_t N, const Budget& budget) {
    if (s < 1 || k < 1 || N < 1)
        throw precondition_error("vinogradov_count: requires s, k, N >= 1");
    if (k > 5) throw precondition_error("vinogradov_count: k > 5 not supported");
    if (s > 20) throw precondition_error("vinogradov_count: s > 20 not supported");
    std::unordered_map<PowKey, std::uint64_t, PowKeyHash> table;
    std::uint64_t limit_entries = budget.max_table_bytes / 96;
    for_each_multiset(s, N, [&](const std::vector<std::int64_t>& tup, std::uint64_t perms) {
        PowKey key;
        for (std::int64_t x : tup) {
            std::uint64_t p = 1;
            for (int j = 0; j < k; ++j) {
                p *= std::uint64_t(x);
                key.v[static_cast<std::size_t>(j)] += p;
            }
        }
        table[key] += perms;
        if (table.size() > limit_entries)
            throw budget_error("vinogradov_count: power-sum table exceeds the memory budget");
    });
    // J = sum over keys of count^2; 64-bit with overflow promotion
    std::uint64_t acc = 0;
    BigInt big;
    for (const auto& [key, c] : table) {
        std::uint64_t sq, next;
        if (!__builtin_mul_overflow(c, c, &sq) && !__builtin_add_overflow(acc, sq, &next)) {
            acc = next;
            continue;
        }
        big += BigInt(acc);  // drain and take the slow path for this key
        acc = 0;
        big += BigInt(c) * BigInt(c);
    }
    big += BigInt(acc);
    return big;
}

std::pair<std::complex<double>, std::complex<double>>
mean_value_identity_check(double theta, int s, int l, int k, std::int64_t N,
                          const Budget& budget) {
    if (s < 1 || N < 1) throw precondition_error("mean_value_identity_check: s, N >= 1");
    if (l < 1 || l > k - 1) throw precondition_error("mean_value_identity_check: 1 <= l <= k-1");
    double tuples = std::pow(double(N), s);
    if (tuples > double(budget.max_solutions) || tuples > 4e6)
        throw budget_error("mean_value_identity_check: N^s enumeration too large");
    if (tuples * tuples > 4e9)
        throw budget_error("mean_value_identity_check: N^{2s} pair enumeration too large");

    const std::size_t count = static_cast<std::size_t>(tuples + 0.5);
    // enumerate ordered s-tuples, recording low power sums and the degree-k sum
    std::vector<std::array<std::uint64_t, 4>> lows(count);
    std::vector<std::uint64_t> highs(count);
    std::vector<std::int64_t> tup(static_cast<std::size_t>(s), 1);
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::array<std::uint64_t, 4> lo{};
        std::uint64_t hi = 0;
        for (std::int64_t x : tup) {
            std::uint64_t p = 1;
            for (int j = 1; j <= k; ++j) {
                p *= std::uint64_t(x);
                if (j <= l) lo[static_cast<std::size_t>(j - 1)] += p;
            }
            hi += p;
        }
        lows[idx] = lo;
        highs[idx] = hi;
        int j = s - 1;
        while (j >= 0 && tup[static_cast<std::size_t>(j)] == N) {
            tup[static_cast<std::size_t>(j)] = 1;
            --j;
        }
        if (j >= 0) ++tup[static_cast<std::size_t>(j)];
    }

    // LHS: group by low power sums, accumulate a_h(theta), then sum |a_h|^2
    struct LowHash {
        std::size_t operator()(const std::array<std::uint64_t, 4>& a) const {
            std::uint64_t h = 14695981039346656037ull;
            for (std::uint64_t x : a) { h ^= x; h *= 1099511628211ull; }
            return static_cast<std::size_t>(h);
        }
    };
    std::unordered_map<std::array<std::uint64_t, 4>, std::complex<double>, LowHash> groups;
    for (std::size_t i = 0; i < count; ++i)
        groups[lows[i]] += unit_phase(frac_mul(theta, highs[i]));
    std::complex<double> lhs{0.0, 0.0};
    for (const auto& [h, a] : groups) lhs += a * std::conj(a);

    // RHS: direct double loop over pairs with matching low power sums
    std::complex<double> rhs{0.0, 0.0};
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            if (lows[i] != lows[j]) continue;
            double ph = frac_mul(theta, highs[i]) - frac_mul(theta, highs[j]);
            rhs += unit_phase(ph - std::floor(ph));
        }
    }
    return {lhs, rhs};
}

double sup_over_xi(double theta, std::int64_t N, int k, int grid, int top) {
    if (grid < 4) grid = 4;
    // c_n = e(theta n^k); S(xi) = 1 + 2 sum c_n cos(2 pi xi n)
    std::vector<std::complex<double>> c(static_cast<std::size_t>(N) + 1);
    for (std::int64_t n = 1; n <= N; ++n)
        c[static_cast<std::size_t>(n)] = unit_phase(frac_mul(theta, ipow_u64(std::uint64_t(n), k)));

    auto eval = [&](double xi) {
        std::complex<double> acc{1.0, 0.0};
        for (std::int64_t n = 1; n <= N; ++n) {
            double cs = std::cos(two_pi * frac_mul(xi, std::uint64_t(n)));
            acc += 2.0 * cs * c[static_cast<std::size_t>(n)];
        }
        return std::abs(acc);
    };

    // coarse pass on roots of unity via a table: e(m n / M) = w[(m n) mod M]
    std::vector<double> cos_table(static_cast<std::size_t>(grid));
    for (int m = 0; m < grid; ++m)
        cos_table[static_cast<std::size_t>(m)] = std::cos(two_pi * m / grid);
    std::vector<std::pair<double, int>> scored(static_cast<std::size_t>(grid));
    for (int m = 0; m < grid; ++m) {
        std::complex<double> acc{1.0, 0.0};
        std::size_t idx = 0;
        for (std::int64_t n = 1; n <= N; ++n) {
            idx += static_cast<std::size_t>(m);
            if (idx >= static_cast<std::size_t>(grid)) idx -= static_cast<std::size_t>(grid);
            acc += 2.0 * cos_table[idx] * c[static_cast<std::size_t>(n)];
        }
        scored[static_cast<std::size_t>(m)] = {std::abs(acc), m};
    }
    std::partial_sort(scored.begin(), scored.begin() + std::min<std::size_t>(scored.size(), std::size_t(top)),
                      scored.end(), [](auto& a, auto& b) { return a.first > b.first; });

    double best = 0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int t = 0; t < top && t < grid; ++t) {
        best = std::max(best, scored[static_cast<std::size_t>(t)].first);
        double center = double(scored[static_cast<std::size_t>(t)].second) / grid;
        double a = center - 1.0 / grid, b = center + 1.0 / grid;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = eval(x1), f2 = eval(x2);
        for (int it = 0; it < 48; ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = eval(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = eval(x1);
            }
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

MinorSupResult minor_arc_sup_scan(std::int64_t N, int k, std::span<const double> theta_samples,
                                  std::span<const double> xi_samples,
                                  const arcs::ArcDissection& dissection) {
    MinorSupResult res;
    for (double theta : theta_samples) {
        if (dissection.classify(theta).major) continue;
        ++res.kept;
        for (double xi : xi_samples)
            res.sup = std::max(res.sup, std::abs(s_n(theta, xi, N, k)));
    }
    if (res.kept == 0)
        throw precondition_error("minor_arc_sup_scan: no theta sample lies on the minor arcs");
    return res;
}

SupSweepResult minor_sup_sweep(std::span<const std::int64_t> Ns, int k, int theta_samples,
                               int xi_samples, std::uint64_t seed, const Parallelism& par) {
    SupSweepResult out;
    std::vector<double> lx, ly;
    for (std::int64_t N : Ns) {
        auto dissection = arcs::ArcDissection::dissect(N, k);
        SplitMix64 rng(seed ^ std::uint64_t(N));
        std::vector<double> thetas;
        thetas.reserve(static_cast<std::size_t>(theta_samples));
        while (thetas.size() < static_cast<std::size_t>(theta_samples)) {
            double t = rng.uniform01();
            if (!dissection.classify(t).major) thetas.push_back(t);
        }
        std::vector<double> sups(thetas.size(), 0.0);
        parallel_ranges(par, thetas.size(), 8, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                sups[i] = sup_over_xi(thetas[i], N, k, std::max(16, xi_samples), 2);
        });
        double sup = 0;
        for (double s : sups) sup = std::max(sup, s);
        out.rows.push_back({N, sup});
        lx.push_back(std::log(double(N)));
        ly.push_back(std::log(sup));
    }
    out.fitted_exponent = fit_line(lx, ly).slope;
    return out;
}

double mean_value_integral_estimate(double r, int k, std::int64_t N,
                                    const arcs::ArcDissection& dissection,
                                    std::int64_t grid_resolution, const Parallelism& par) {
    if (r < 2) throw precondition_error("mean_value_integral_estimate: requires r >= 2");
    BigInt scale = BigInt(4ll * k) * BigInt::pow(BigInt(N), static_cast<unsigned>(k - 1));
    if (BigInt(grid_resolution) * BigInt(2) < scale * BigInt(4))
        throw precondition_error(
            "mean_value_integral_estimate: grid resolution is below the arc scale (need >= 8 k N^{k-1})");
    const std::size_t res = static_cast<std::size_t>(grid_resolution);
    const std::size_t blocks = 256;
    std::vector<double> partial(blocks, 0.0);
    parallel_blocks(par, blocks, [&](std::size_t b) {
        double acc = 0;
        for (std::size_t i = b; i < res; i += blocks) {
            double theta = (double(i) + 0.5) / double(res);
            if (dissection.classify(theta).major) continue;
            acc += std::pow(sup_over_xi(theta, N, k), r);
        }
        partial[b] = acc;
    });
    double total = 0;
    for (double p : partial) total += p;
    return total / double(res);
}

double mean_value_calibration(std::int64_t N, int k, std::int64_t theta_res, std::int64_t xi_res) {
    double acc = 0;
    for (std::int64_t i = 0; i < theta_res; ++i) {
        double theta = double(i) / double(theta_res);
        for (std::int64_t j = 0; j < xi_res; ++j) {
            double xi = double(j) / double(xi_res);
            acc += std::norm(s_n(theta, xi, N, k));
        }
    }
    return acc / (double(theta_res) * double(xi_res));
}

SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw precondition_error("fit_line: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = double(n) * sxx - sx * sx;
    if (denom == 0) return {0.0, sy / double(n)};
    double slope = (double(n) * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / double(n)};
}

}
