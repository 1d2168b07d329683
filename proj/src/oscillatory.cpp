#include "circlelab/oscillatory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "circlelab/expsum.hpp"  // unit_phase, frac_mul

namespace circlelab::osc {

namespace {

using cd = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr cd ii{0.0, 1.0};

// ---------------------------------------------------------------- Gauss-Legendre

struct GLRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

const GLRule& gl_rule(int order) {
    static std::map<int, GLRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    GLRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= order; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= order; ++j) {
            double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        double dp = order * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(order - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache[order] = std::move(rule);
}

double ipow_d(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// phase fraction of theta * t^k + xi * t with the integer part of t^k handled
// through the exact reduction in expsum::frac_mul
double phase_of(double theta, double xi, double t, int k) {
    double tk = ipow_d(t, k);
    double fi = std::floor(tk);
    double p = 0.0;
    if (fi >= 1.0 && fi <= 9.2e18)
        p += expsum::frac_mul(theta, static_cast<std::uint64_t>(fi));
    else
        p += theta * fi;
    p += theta * (tk - fi);
    double ft = std::floor(t);
    if (ft >= 1.0 && ft <= 9.2e18)
        p += expsum::frac_mul(xi, static_cast<std::uint64_t>(ft));
    else
        p += xi * ft;
    p += xi * (t - ft);
    return p;
}

constexpr std::size_t panel_cap = 1u << 22;

// greedy panel splitting of [0, upper]: each panel's phase variation
// |theta| (t2^k - t1^k) + |xi| (t2 - t1) stays within the budget
template <typename Fn>
void for_each_panel(double theta, double xi, double upper, int k, double budget, Fn&& fn) {
    double at = std::abs(theta), ax = std::abs(xi);
    double t = 0.0;
    std::size_t panels = 0;
    while (t < upper) {
        double lo = t, hi = upper;
        // largest step with at*(x^k - t^k) + ax*(x - t) <= budget
        if (at * (ipow_d(upper, k) - ipow_d(t, k)) + ax * (upper - t) > budget) {
            for (int it = 0; it < 52; ++it) {
                double mid = 0.5 * (lo + hi);
                double dv = at * (ipow_d(mid, k) - ipow_d(t, k)) + ax * (mid - t);
                if (dv > budget) hi = mid; else lo = mid;
            }
        } else {
            lo = upper;
        }
        double next = std::max(lo, t + upper * 1e-15);
        fn(t, next);
        t = next;
        if (++panels > panel_cap)
            throw budget_error("oscillatory: panel count exceeds the cap (" +
                               std::to_string(panel_cap) + "); phase too large for this rule");
    }
}

cd integrate_phase(double theta, double xi, double upper, int k, const QuadratureSpec& spec) {
    const GLRule& rule = gl_rule(spec.panel_order);
    cd acc{0.0, 0.0};
    for_each_panel(theta, xi, upper, k, spec.phase_budget, [&](double a, double b) {
        double h = 0.5 * (b - a), c = 0.5 * (a + b);
        cd panel{0.0, 0.0};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double t = c + h * rule.nodes[i];
            panel += rule.weights[i] * expsum::unit_phase(phase_of(theta, xi, t, k));
        }
        acc += h * panel;
    });
    return acc;
}

// ------------------------------------------------------------------- W function

// Taylor coefficients of W(y) = int_0^inf e(s^k + y s) ds at y = 0:
//   c_m = (2 pi i)^m / m! * e^{i pi (m+1)/(2k)} Gamma((m+1)/k) / (k (2 pi)^{(m+1)/k})
struct WTaylor {
    std::vector<cd> coeff;
    double radius;  // |y| below which the series is numerically safe
};

const WTaylor& w_taylor(int k) {
    static std::map<int, WTaylor> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    WTaylor wt;
    const int M = 160;
    wt.coeff.resize(M);
    double log2pi = std::log(two_pi);
    for (int m = 0; m < M; ++m) {
        double lg = std::lgamma((m + 1.0) / k) - std::lgamma(m + 1.0) + m * log2pi -
                    ((m + 1.0) / k) * log2pi - std::log(double(k));
        double arg = std::numbers::pi * 0.5 * (m + (m + 1.0) / k);
        wt.coeff[static_cast<std::size_t>(m)] = std::exp(lg) * cd{std::cos(arg), std::sin(arg)};
    }
    // radius: largest |y| with max term magnitude <= 1e5 (keeps cancellation
    // loss below ~1e-11)
    double radius = 0.1;
    for (double y = 0.1; y < 8.0; y += 0.05) {
        double worst = 0;
        for (int m = 0; m < M; ++m)
            worst = std::max(worst, std::abs(wt.coeff[static_cast<std::size_t>(m)]) * std::pow(y, m));
        if (worst > 1e5) break;
        radius = y;
    }
    wt.radius = radius;
    return cache[k] = std::move(wt);
}

cd w_series(cd y, int k) {
    const WTaylor& wt = w_taylor(k);
    cd acc{0.0, 0.0}, yp{1.0, 0.0};
    for (std::size_t m = 0; m < wt.coeff.size(); ++m) {
        cd term = wt.coeff[m] * yp;
        acc += term;
        yp *= y;
        if (std::abs(term) < 1e-20 && m > 8) break;
    }
    return acc;
}

cd w_quadrature(cd y, int k, const QuadratureSpec& spec) {
    // rotate to s = e^{i pi/(2k)} r: integrand exp(2 pi i y e^{i a} r - 2 pi r^k)
    const double a = std::numbers::pi / (2.0 * k);
    const cd rot{std::cos(a), std::sin(a)};
    const cd lin = two_pi * ii * y * rot;  // coefficient of r in the exponent
    // find r_end with Re(lin) r - 2 pi r^k <= -50
    double growth = std::max(0.0, lin.real());
    double r_end = std::pow(60.0 / two_pi, 1.0 / k);
    for (int it = 0; it < 200; ++it) {
        double v = growth * r_end - two_pi * ipow_d(r_end, k);
        if (v <= -50.0) break;
        r_end *= 1.25;
    }
    // greedy panels: oscillation |Im lin| * dr plus decay variation
    const GLRule& rule = gl_rule(std::max(spec.panel_order, 12));
    double osc = std::abs(lin.imag()) / two_pi;  // turns per unit r
    cd acc{0.0, 0.0};
    double t = 0.0;
    double budget = 6.0 * spec.phase_budget;  // default 0.75 turn per panel
    while (t < r_end) {
        double rate = osc + k * ipow_d(t + 0.3, k - 1) + std::abs(growth) / two_pi + 1.0;
        double step = std::min(budget / rate, r_end - t);
        double h = 0.5 * step, c = t + h;
        cd panel{0.0, 0.0};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double r = c + h * rule.nodes[i];
            panel += rule.weights[i] * std::exp(lin * r - two_pi * ipow_d(r, k));
        }
        acc += h * panel;
        t += step;
    }
    return rot * acc;
}

cd w_eval(cd y, int k, const QuadratureSpec& spec) {
    if (std::abs(y) <= w_taylor(k).radius) return w_series(y, k);
    return w_quadrature(y, k, spec);
}

// ------------------------------------------------------ endpoint series for T

// N_m(1) as a polynomial sum_{i+j<=m} C[m][i][j] a^i b^j with a = k u, b = z,
// from the recursion N_{m+1} = -(N_m' phi' - (2m+1) phi'' N_m),
// phi' = a t^{k-1} + b, phi'' = a (k-1) t^{k-2}.
struct TSeriesTable {
    int k = 0;
    int max_m = 0;
    // coeffs[m] maps (i, j) -> value of the coefficient summed over t-powers at t=1
    std::vector<std::vector<double>> coeffs;  // [m][i * (max_m + 1) + j]
};

const TSeriesTable& t_series_table(int k) {
    static std::map<int, TSeriesTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;

    const int M = 14;
    // dense polynomial in (t-power p, a-power i, b-power j)
    const int P = M * (k > 1 ? k : 1) + 2;
    auto at = [&](std::vector<double>& poly, int p, int i, int j) -> double& {
        return poly[static_cast<std::size_t>((p * (M + 2) + i) * (M + 2) + j)];
    };
    std::size_t dim = static_cast<std::size_t>(P + 1) * (M + 2) * (M + 2);
    std::vector<double> cur(dim, 0.0), next(dim, 0.0);
    at(cur, 0, 0, 0) = 1.0;  // N_0 = 1

    TSeriesTable table;
    table.k = k;
    table.max_m = M;
    table.coeffs.resize(static_cast<std::size_t>(M + 1));
    auto snapshot = [&](int m, const std::vector<double>& poly) {
        std::vector<double> flat(static_cast<std::size_t>(M + 2) * (M + 2), 0.0);
        for (int p = 0; p <= P; ++p)
            for (int i = 0; i <= M + 1; ++i)
                for (int j = 0; j <= M + 1; ++j) {
                    double v = poly[static_cast<std::size_t>((p * (M + 2) + i) * (M + 2) + j)];
                    if (v != 0.0) flat[static_cast<std::size_t>(i * (M + 2) + j)] += v;  // t = 1
                }
        table.coeffs[static_cast<std::size_t>(m)] = std::move(flat);
    };
    snapshot(0, cur);

    for (int m = 0; m < M; ++m) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int p = 0; p <= P; ++p)
            for (int i = 0; i <= M; ++i)
                for (int j = 0; j <= M; ++j) {
                    double v = at(cur, p, i, j);
                    if (v == 0.0) continue;
                    // -(N' phi'): N' has term v*p t^{p-1}; phi' = a t^{k-1} + b
                    if (p >= 1) {
                        if (p - 1 + k - 1 <= P) at(next, p - 1 + k - 1, i + 1, j) -= v * p;
                        at(next, p - 1, i, j + 1) -= v * p;
                    }
                    // +(2m+1) phi'' N = (2m+1) a (k-1) t^{k-2} N
                    if (k >= 2 && p + k - 2 <= P)
                        at(next, p + k - 2, i + 1, j) += v * (2 * m + 1) * (k - 1);
                }
        cur.swap(next);
        snapshot(m + 1, cur);
    }
    return cache[k] = std::move(table);
}

// S(u, z) with T(u, z) = e(u + z) S(u, z):
//   S = - sum_m N_m(1) / ((2 pi i)^{m+1} phi'(1)^{2m+1})
cd t_series_s(cd u, double z, int k) {
    const TSeriesTable& table = t_series_table(k);
    const int M = table.max_m;
    cd a = double(k) * u, b{z, 0.0};
    cd phi1 = a + b;  // phi'(1)
    std::vector<cd> apow(static_cast<std::size_t>(M + 2)), bpow(static_cast<std::size_t>(M + 2));
    apow[0] = bpow[0] = cd{1.0, 0.0};
    for (int i = 1; i <= M + 1; ++i) {
        apow[static_cast<std::size_t>(i)] = apow[static_cast<std::size_t>(i - 1)] * a;
        bpow[static_cast<std::size_t>(i)] = bpow[static_cast<std::size_t>(i - 1)] * b;
    }
    cd inv_phi = 1.0 / phi1;
    cd inv_2pii = 1.0 / (two_pi * ii);
    cd denom = inv_2pii * inv_phi;  // 1/((2 pi i) phi')
    cd acc{0.0, 0.0};
    double last = 1e300;
    for (int m = 0; m <= M; ++m) {
        const auto& flat = table.coeffs[static_cast<std::size_t>(m)];
        cd nm{0.0, 0.0};
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j + i <= m; ++j) {
                double cval = flat[static_cast<std::size_t>(i * (M + 2) + j)];
                if (cval != 0.0) nm += cval * apow[static_cast<std::size_t>(i)] * bpow[static_cast<std::size_t>(j)];
            }
        cd term = nm * denom;
        double mag = std::abs(term);
        if (mag > last && m > 2) break;  // asymptotic series turned
        acc += term;
        last = mag;
        if (mag < 1e-19) break;
        denom *= inv_2pii * inv_phi * inv_phi;
    }
    return -acc;
}

cd v_asym(cd u, double z, int k, const QuadratureSpec& spec) {
    // V part only: u^{-1/k} W(z u^{-1/k}); callers combine with the T part
    cd uinv = std::pow(u, -1.0 / k);
    return uinv * w_eval(z * uinv, k, spec);
}

// ---------------------------------------------------------------- region grids

// composite master grid on [0,1] for batches of v1(u, z) with u in [0, ustar]
struct MasterGrid {
    std::vector<double> t, w, tk;                 // nodes, weights, t^k
    std::vector<double> u, uw;                    // outer nodes and weights
    std::vector<cd> ephase;                       // e(u_i t_p^k), row-major
};

struct GridKey {
    int k, order;
    long budget_milli, ustar10, zmax10;
    bool operator<(const GridKey& o) const {
        return std::tie(k, order, budget_milli, ustar10, zmax10) <
               std::tie(o.k, o.order, o.budget_milli, o.ustar10, o.zmax10);
    }
};

const MasterGrid& master_grid(int k, double ustar, double zmax, const QuadratureSpec& spec) {
    static std::map<GridKey, MasterGrid> cache;
    static std::mutex mu;
    GridKey key{k, spec.panel_order, long(spec.phase_budget * 1000), long(ustar * 10),
                long(zmax * 10)};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    MasterGrid g;
    const GLRule& rule = gl_rule(std::max(spec.panel_order, 12));
    // t-panels sized for the worst case u = ustar: phase var <= 6*budget turns
    double tbudget = 6.0 * spec.phase_budget;
    for_each_panel(ustar, zmax, 1.0, k, tbudget, [&](double a, double b) {
        double h = 0.5 * (b - a), c = 0.5 * (a + b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            g.t.push_back(c + h * rule.nodes[i]);
            g.w.push_back(h * rule.weights[i]);
        }
    });
    g.tk.resize(g.t.size());
    for (std::size_t p = 0; p < g.t.size(); ++p) g.tk[p] = ipow_d(g.t[p], k);
    // outer u-panels: frequencies up to ~2 resolved at full order; higher
    // frequency components carry amplitude u^{-m} and stay below tolerance
    double ulen = 3.0 * spec.phase_budget;
    double t = 0.0;
    while (t < ustar) {
        double step = std::min(ulen, ustar - t);
        double h = 0.5 * step, c = t + h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            g.u.push_back(c + h * rule.nodes[i]);
            g.uw.push_back(h * rule.weights[i]);
        }
        t += step;
    }
    g.ephase.resize(g.u.size() * g.t.size());
    for (std::size_t i = 0; i < g.u.size(); ++i)
        for (std::size_t p = 0; p < g.t.size(); ++p) {
            double ph = g.u[i] * g.tk[p];
            g.ephase[i * g.t.size() + p] = expsum::unit_phase(ph - std::floor(ph));
        }
    return cache[key] = std::move(g);
}

// -------------------------------------------------------------- kernel integral

struct HalfWeights {
    std::vector<cd> plus, minus;  // per coordinate
};

// product over coordinates of (plus_j v1p_j + minus_j v1m_j)
cd assemble(const HalfWeights& w, std::span<const cd> v1p, std::span<const cd> v1m) {
    cd prod{1.0, 0.0};
    for (std::size_t j = 0; j < w.plus.size(); ++j)
        prod *= w.plus[j] * v1p[j] + w.minus[j] * v1m[j];
    return prod;
}

// elementary-symmetric DP: expand prod_j (V_j - x B_j) into coefficients of x^c
void dp_components(std::span<const cd> V, std::span<const cd> B, std::vector<cd>& out) {
    const std::size_t d = V.size();
    out.assign(d + 1, cd{0.0, 0.0});
    out[0] = cd{1.0, 0.0};
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t c = j + 1; c-- > 0;) {
            out[c + 1] += out[c] * (-B[j]);
            out[c] *= V[j];
        }
    }
}

struct TailPrimitives {
    std::vector<cd> Vp, Vm, Sp, Sm;  // per coordinate at one u
};

void tail_primitives(cd u, std::span<const CoordFactor> f, int k, const QuadratureSpec& spec,
                     TailPrimitives& prim) {
    const std::size_t d = f.size();
    prim.Vp.resize(d); prim.Vm.resize(d); prim.Sp.resize(d); prim.Sm.resize(d);
    cd uinv = std::pow(u, -1.0 / k);
    for (std::size_t j = 0; j < d; ++j) {
        double z = f[j].z;
        if (z == 0.0) {
            prim.Vp[j] = prim.Vm[j] = uinv * w_eval(cd{0.0, 0.0}, k, spec);
            prim.Sp[j] = prim.Sm[j] = t_series_s(u, 0.0, k);
        } else {
            prim.Vp[j] = uinv * w_eval(z * uinv, k, spec);
            prim.Vm[j] = uinv * w_eval(-z * uinv, k, spec);
            prim.Sp[j] = t_series_s(u, z, k);
            prim.Sm[j] = t_series_s(u, -z, k);
        }
    }
}

// B-amplitudes carry the e(z) phase; the e(u) factor is handled by the rays
void tail_vb(const TailPrimitives& prim, std::span<const CoordFactor> f, const HalfWeights& w,
             std::vector<cd>& V, std::vector<cd>& B) {
    const std::size_t d = f.size();
    V.resize(d);
    B.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        cd ez = expsum::unit_phase(f[j].z - std::floor(f[j].z));
        V[j] = w.plus[j] * prim.Vp[j] + w.minus[j] * prim.Vm[j];
        B[j] = w.plus[j] * ez * prim.Sp[j] + w.minus[j] * std::conj(ez) * prim.Sm[j];
    }
}

// integral over [ustar, inf) of prod_j f_j(u) e(-u) du for one weight set,
// evaluated per oscillation component: c = 1 along the real axis, c != 1 on
// vertical rays where e((c-1) u) decays
cd tail_integral(std::span<const CoordFactor> f, const HalfWeights& wset, int k, double ustar,
                 const QuadratureSpec& spec) {
    const std::size_t d = f.size();
    const GLRule& rule = gl_rule(12);
    TailPrimitives prim;
    std::vector<cd> V, B, comps;
    cd total{0.0, 0.0};

    // rays for c - 1 = m != 0
    for (std::size_t c = 0; c <= d; ++c) {
        int m = int(c) - 1;
        if (m == 0) continue;
        double am = std::abs(double(m));
        // int_0^inf E_c(ustar + i sgn(m) v) e^{-2 pi |m| v} dv on [0, 48/(2 pi |m|)]
        double vmax = 48.0 / (two_pi * am);
        static constexpr std::array<double, 5> cuts{0.0, 0.04, 0.16, 0.45, 1.0};
        cd ray{0.0, 0.0};
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            double a = cuts[s] * vmax, b = cuts[s + 1] * vmax;
            double h = 0.5 * (b - a), cc = 0.5 * (a + b);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                double v = cc + h * rule.nodes[i];
                cd u = cd{ustar, (m > 0 ? v : -v)};
                tail_primitives(u, f, k, spec, prim);
                tail_vb(prim, f, wset, V, B);
                dp_components(V, B, comps);
                ray += h * rule.weights[i] * comps[c] * std::exp(-two_pi * am * v);
            }
        }
        cd pref = (m > 0 ? ii : -ii) * expsum::unit_phase(m * ustar - std::floor(m * ustar));
        total += pref * ray;
    }

    // c = 1: smooth non-oscillatory power-law decay; geometric panels
    {
        double a = ustar;
        const double ratio = 1.35;
        double decay = (double(d) - 1.0) / k;  // E_1 ~ u^{-1 - decay}
        for (int panel = 0; panel < 400; ++panel) {
            double b = a * ratio;
            double h = 0.5 * (b - a), cc = 0.5 * (a + b);
            cd pv{0.0, 0.0};
            double mag = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                cd u = cd{cc + h * rule.nodes[i], 0.0};
                tail_primitives(u, f, k, spec, prim);
                tail_vb(prim, f, wset, V, B);
                dp_components(V, B, comps);
                pv += h * rule.weights[i] * comps[1];
                mag = std::max(mag, std::abs(comps[1]));
            }
            total += pv;
            a = b;
            // remaining tail ~ mag * a / decay
            if (mag * a / std::max(decay, 0.05) < 0.05 * spec.tail_tolerance) break;
        }
    }
    return total;
}

double bucket_up(double v, std::initializer_list<double> buckets) {
    for (double b : buckets)
        if (v <= b) return b;
    return v;
}

}  // namespace

std::complex<double> v_n(double theta, double xi, double N, int k, const QuadratureSpec& spec) {
    spec.validate();
    if (!(N > 0)) {
        if (N == 0) return {0.0, 0.0};
        throw precondition_error("v_n: N must be > 0");
    }
    if (k < 1) throw precondition_error("v_n: k must be >= 1");
    return integrate_phase(theta, xi, N, k, spec);
}

double check_vn_bound2(double theta, double xi, double N, int k, const QuadratureSpec& spec) {
    cd v = v_n(theta, xi, N, k, spec);
    return std::abs(v) * std::sqrt(1.0 + N * std::abs(xi)) / N;
}

std::complex<double> v1_direct(double u, double z, int k, const QuadratureSpec& spec) {
    if (u >= 0) return integrate_phase(u, z, 1.0, k, spec);
    return std::conj(integrate_phase(-u, -z, 1.0, k, spec));
}

std::complex<double> airy_w(std::complex<double> y, int k, const QuadratureSpec& spec) {
    return w_eval(y, k, spec);
}

std::complex<double> tail_t_series(std::complex<double> u, double z, int k) {
    cd s = t_series_s(u, z, k);
    // T = e(phi(1)) S with phi(1) = u + z; u may be complex
    cd phase = std::exp(two_pi * ii * (u + z));
    return phase * s;
}

std::complex<double> v1_asymptotic(std::complex<double> u, double z, int k,
                                   const QuadratureSpec& spec) {
    return v_asym(u, z, k, spec) - tail_t_series(u, z, k);
}

std::complex<double> kernel_integral(std::span<const CoordFactor> factors, int k,
                                     const QuadratureSpec& spec) {
    spec.validate();
    if (factors.empty()) throw precondition_error("kernel_integral: no coordinates");
    if (k < 2) throw precondition_error("kernel_integral: k must be >= 2");
    const std::size_t d = factors.size();

    double zmax = 0.0;
    for (const auto& f : factors) zmax = std::max(zmax, std::abs(f.z));

    const double wradius = w_taylor(k).radius;
    double ustar = std::max({10.0, (28.0 + zmax) / k,
                             std::min(std::pow(zmax / wradius, double(k)) * 1.05, 60.0)});
    // keep |z| u^{-1/k} within the quadrature comfort zone
    double ylimit = 6.0;
    if (zmax / std::pow(ustar, 1.0 / k) > ylimit)
        ustar = std::pow(zmax / ylimit, double(k)) * 1.05;
    ustar = bucket_up(ustar, {10.0, 15.0, 20.0, 30.0, 40.0, 60.0});
    double zb = bucket_up(zmax, {1.0, 2.0, 4.0, 8.0, 16.0, 32.0});
    if (zb < zmax) zb = zmax;

    const MasterGrid& grid = master_grid(k, ustar, zb, spec);
    const std::size_t P = grid.t.size(), U = grid.u.size();

    // per-coordinate phase tables e(z_j t_p), weighted
    std::vector<cd> cvec(d * P);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t p = 0; p < P; ++p) {
            double ph = factors[j].z * grid.t[p];
            cvec[j * P + p] = grid.w[p] * expsum::unit_phase(ph - std::floor(ph));
        }

    HalfWeights wp, wq;
    wp.plus.resize(d); wp.minus.resize(d);
    wq.plus.resize(d); wq.minus.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        wp.plus[j] = factors[j].plus;
        wp.minus[j] = factors[j].minus;
        wq.plus[j] = std::conj(factors[j].minus);
        wq.minus[j] = std::conj(factors[j].plus);
    }

    // region 1: [0, ustar] for both halves off the shared E-matrix
    cd r1p{0.0, 0.0}, r1q{0.0, 0.0};
    std::vector<cd> v1p(d), v1m(d);
    for (std::size_t i = 0; i < U; ++i) {
        const cd* row = &grid.ephase[i * P];
        for (std::size_t j = 0; j < d; ++j) {
            cd sp{0.0, 0.0}, sm{0.0, 0.0};
            const cd* cv = &cvec[j * P];
            for (std::size_t p = 0; p < P; ++p) {
                sp += row[p] * cv[p];
                sm += row[p] * std::conj(cv[p]);
            }
            v1p[j] = sp;
            v1m[j] = sm;
        }
        double uph = grid.u[i];
        cd em = std::conj(expsum::unit_phase(uph - std::floor(uph)));  // e(-u)
        r1p += grid.uw[i] * assemble(wp, v1p, v1m) * em;
        r1q += grid.uw[i] * assemble(wq, v1p, v1m) * em;
    }

    cd tp = tail_integral(factors, wp, k, ustar, spec);
    cd tq = tail_integral(factors, wq, k, ustar, spec);
    return r1p + tp + std::conj(r1q + tq);
}

std::complex<double> j_lambda(std::span<const double> eta, double lambda,
                              const FormParams& params, const QuadratureSpec& spec) {
    params.validate();
    if (params.d <= params.k)
        throw precondition_error("j_lambda: requires d > k (non-integrable tail otherwise)");
    if (!(lambda >= 1)) throw precondition_error("j_lambda: lambda must be >= 1");
    if (static_cast<int>(eta.size()) != params.d)
        throw precondition_error("j_lambda: eta dimension mismatch");
    const double N = std::pow(lambda, 1.0 / params.k);
    std::vector<CoordFactor> factors(static_cast<std::size_t>(params.d));
    for (std::size_t j = 0; j < factors.size(); ++j) {
        factors[j].plus = cd{1.0, 0.0};
        factors[j].minus = cd{0.0, 0.0};
        factors[j].z = N * eta[j];
    }
    cd kappa = kernel_integral(factors, params.k, spec);
    return std::pow(lambda, double(params.d) / params.k - 1.0) * kappa;
}

std::complex<double> sigma_hat(std::span<const double> eta, double lambda,
                               const FormParams& params, const QuadratureSpec& spec) {
    params.validate();
    if (params.d <= params.k)
        throw precondition_error("sigma_hat: requires d > k");
    const double N = std::pow(lambda, 1.0 / params.k);
    std::vector<CoordFactor> factors(static_cast<std::size_t>(params.d));
    for (std::size_t j = 0; j < factors.size(); ++j) {
        factors[j].plus = cd{1.0, 0.0};
        factors[j].minus = cd{0.0, 0.0};
        factors[j].z = N * eta[j];
    }
    return kernel_integral(factors, params.k, spec);
}

double j_lambda_zero_oracle(double lambda, const FormParams& params) {
    // derivative in lambda of the positive-orthant volume
    // lambda^{d/k} Gamma(1+1/k)^d / Gamma(1+d/k), doubled per sign pattern
    // elsewhere; here the orthant form matches J_lambda(0)
    double dk = double(params.d) / params.k;
    double lg = params.d * std::lgamma(1.0 + 1.0 / params.k) - std::lgamma(dk);
    return std::pow(lambda, dk - 1.0) * std::exp(lg);
}

}
