#include "circlelab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "circlelab/expsum.hpp"
#include "circlelab/lattice.hpp"
#include "circlelab/prng.hpp"

namespace circlelab::mult {

namespace {

using cd = std::complex<double>;

double smooth_step(double s) {
    // h(s)/(h(s)+h(1-s)) with h(s) = exp(-1/s) for s > 0
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double h1 = std::exp(-1.0 / s);
    double h2 = std::exp(-1.0 / (1.0 - s));
    return h1 / (h1 + h2);
}

std::int64_t ipow_ll(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

double psi_phi(double t) {
    // 1 on |t| <= 1/8, 0 beyond |t| >= 1/4
    return smooth_step((0.25 - std::abs(t)) / 0.125);
}

double psi(std::span<const double> u) {
    double p = 1.0;
    for (double t : u) p *= psi_phi(t);
    return p;
}

std::complex<double> a_hat_direct(std::int64_t lambda, std::span<const double> xi,
                                  const FormParams& params, const Budget& budget) {
    params.validate();
    if (lambda < 1) throw precondition_error("a_hat: lambda must be >= 1");
    if (static_cast<int>(xi.size()) != params.d)
        throw precondition_error("a_hat: xi dimension mismatch");
    auto sols = lattice::enumerate_solutions(params, lambda, lattice::EnumMode::full, budget);
    cd acc{0.0, 0.0};
    for (const auto& x : sols.points) {
        double phase = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) phase += xi[j] * double(x[j]);
        acc += expsum::unit_phase(phase - std::floor(phase));
    }
    return std::pow(double(lambda), 1.0 - double(params.d) / params.k) * acc;
}

namespace {

// phase-table half: F[s] = sum over x in [-N, N]^dims with sum |x|^k = s <= lambda
// of prod_j e(x_j xi_j); built by an odometer with incremental partial sums
void build_half_table(std::int64_t lambda, int k, std::span<const double> xi, int dims,
                      std::vector<cd>& table, const Parallelism& par) {
    const std::int64_t N = lattice::floor_kth_root(lambda, k);
    const std::size_t len = static_cast<std::size_t>(lambda) + 1;
    table.assign(len, cd{0.0, 0.0});
    if (dims == 0) {
        table[0] = cd{1.0, 0.0};
        return;
    }
    const int side = static_cast<int>(2 * N + 1);
    // per-coordinate phase lookups e(x xi_j), x = -N..N
    std::vector<cd> phases(static_cast<std::size_t>(dims) * side);
    for (int j = 0; j < dims; ++j)
        for (std::int64_t x = -N; x <= N; ++x) {
            double ph = xi[static_cast<std::size_t>(j)] * double(x);
            phases[static_cast<std::size_t>(j) * side + static_cast<std::size_t>(x + N)] =
                expsum::unit_phase(ph - std::floor(ph));
        }
    std::vector<std::int64_t> powk(static_cast<std::size_t>(side));
    for (std::int64_t x = -N; x <= N; ++x)
        powk[static_cast<std::size_t>(x + N)] = ipow_ll(std::llabs(x), k);

    // fixed block decomposition over the leading coordinate
    const std::size_t blocks = static_cast<std::size_t>(side);
    std::vector<std::vector<cd>> partial(blocks);
    parallel_blocks(par, blocks, [&](std::size_t b) {
        auto& local = partial[b];
        local.assign(len, cd{0.0, 0.0});
        std::int64_t s0 = powk[b];
        if (s0 > lambda) return;
        cd p0 = phases[b];  // coordinate 0
        if (dims == 1) {
            local[static_cast<std::size_t>(s0)] += p0;
            return;
        }
        // odometer over the remaining dims-1 coordinates
        std::vector<int> idx(static_cast<std::size_t>(dims - 1), 0);
        std::vector<std::int64_t> psum(static_cast<std::size_t>(dims), 0);
        std::vector<cd> pprod(static_cast<std::size_t>(dims), cd{1.0, 0.0});
        psum[0] = s0;
        pprod[0] = p0;
        int level = 0;
        const int rem = dims - 1;
        while (level >= 0) {
            if (level == rem) {
                local[static_cast<std::size_t>(psum[static_cast<std::size_t>(rem)])] +=
                    pprod[static_cast<std::size_t>(rem)];
                --level;
                continue;
            }
            int& i = idx[static_cast<std::size_t>(level)];
            if (i >= side) {
                i = 0;
                --level;
                continue;
            }
            std::int64_t s = psum[static_cast<std::size_t>(level)] + powk[static_cast<std::size_t>(i)];
            cd pr = pprod[static_cast<std::size_t>(level)] *
                    phases[static_cast<std::size_t>(level + 1) * side + static_cast<std::size_t>(i)];
            ++i;
            if (s > lambda) continue;  // larger |x| later may still fit (x scans -N..N)
            psum[static_cast<std::size_t>(level) + 1] = s;
            pprod[static_cast<std::size_t>(level) + 1] = pr;
            ++level;
        }
    });
    for (std::size_t b = 0; b < blocks; ++b) {
        if (partial[b].empty()) continue;
        for (std::size_t s = 0; s < len; ++s) table[s] += partial[b][s];
    }
}

}  // namespace

std::complex<double> a_hat_factored(std::int64_t lambda, std::span<const double> xi,
                                    const FormParams& params, const Parallelism& par) {
    params.validate();
    if (static_cast<int>(xi.size()) != params.d)
        throw precondition_error("a_hat: xi dimension mismatch");
    if (lambda < 1) throw precondition_error("a_hat: lambda must be >= 1");
    const int d1 = (params.d + 1) / 2;
    const int d2 = params.d - d1;
    std::vector<cd> F1, F2;
    build_half_table(lambda, params.k, xi.subspan(0, static_cast<std::size_t>(d1)), d1, F1, par);
    build_half_table(lambda, params.k, xi.subspan(static_cast<std::size_t>(d1)), d2, F2, par);
    cd acc{0.0, 0.0};
    for (std::size_t s = 0; s <= static_cast<std::size_t>(lambda); ++s)
        acc += F1[s] * F2[static_cast<std::size_t>(lambda) - s];
    return std::pow(double(lambda), 1.0 - double(params.d) / params.k) * acc;
}

std::complex<double> a_hat(std::int64_t lambda, std::span<const double> xi,
                           const FormParams& params, const Budget& budget,
                           const Parallelism& par) {
    // factored evaluation wins once the solution set outgrows the half cubes
    const std::int64_t N = lattice::floor_kth_root(lambda, params.k);
    double half_cost = std::pow(double(2 * N + 1), (params.d + 1) / 2);
    if (params.d >= 6 || half_cost < 4e5) return a_hat_factored(lambda, xi, params, par);
    return a_hat_direct(lambda, xi, params, budget);
}

namespace {

struct QATerm {
    std::uint64_t q, a;
};

std::vector<QATerm> farey_pairs(std::int64_t q_max) {
    std::vector<QATerm> out;
    for (std::uint64_t q = 1; q <= static_cast<std::uint64_t>(q_max); ++q)
        for (std::uint64_t a = 1; a <= q; ++a) {
            std::uint64_t x = a, y = q;
            while (y) { std::uint64_t t = x % y; x = y; y = t; }
            if (x == 1) out.push_back({q, a % q});  // a = q means a ≡ 0 only for q = 1
        }
    return out;
}

cd e_q(std::uint64_t r, std::uint64_t q) {
    return expsum::unit_phase(double(r % q) / double(q));
}

// per-coordinate data for one (q, a): the surviving b_j, the psi factor, and
// the Gauss weights G(q; a, +-b_j)
struct CoordTerm {
    bool alive = false;
    std::int64_t b = 0;
    double phi = 0;
    cd gplus, gminus;
    double eta = 0;
};

bool build_coord_terms(std::uint64_t q, std::uint64_t a, std::span<const double> xi, int k,
                       std::vector<CoordTerm>& terms) {
    const std::size_t d = xi.size();
    terms.assign(d, CoordTerm{});
    for (std::size_t j = 0; j < d; ++j) {
        double qx = double(q) * xi[j];
        std::int64_t b = std::llround(qx);
        double t = qx - double(b);
        double phi = psi_phi(t);
        if (phi <= 0.0) return false;  // this (q, a) contributes nothing
        auto& ct = terms[j];
        ct.alive = true;
        ct.b = b;
        ct.phi = phi;
        ct.eta = xi[j] - double(b) / double(q);
        std::uint64_t bq = static_cast<std::uint64_t>(((b % std::int64_t(q)) + std::int64_t(q)) %
                                                      std::int64_t(q));
        ct.gplus = expsum::gauss_sum(q, a, bq, k).value;
        std::uint64_t bneg = bq == 0 ? 0 : q - bq;
        ct.gminus = expsum::gauss_sum(q, a, bneg, k).value;
    }
    return true;
}

}  // namespace

std::complex<double> main_term(std::int64_t lambda, std::span<const double> xi,
                               std::int64_t q_max, const FormParams& params,
                               const osc::QuadratureSpec& spec) {
    params.validate();
    if (params.d <= params.k)
        throw precondition_error("main_term: requires d > k (sigma_hat precondition)");
    if (q_max < 1) throw precondition_error("main_term: q_max must be >= 1");
    if (static_cast<int>(xi.size()) != params.d)
        throw precondition_error("main_term: xi dimension mismatch");
    const double N = std::pow(double(lambda), 1.0 / params.k);
    std::vector<CoordTerm> terms;
    std::vector<osc::CoordFactor> factors(static_cast<std::size_t>(params.d));
    cd total{0.0, 0.0};
    for (const auto& [q, a] : farey_pairs(q_max)) {
        if (!build_coord_terms(q, a, xi, params.k, terms)) continue;
        double psi_factor = 1.0;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            psi_factor *= terms[j].phi;
            factors[j].plus = terms[j].gplus;
            factors[j].minus = terms[j].gminus;
            factors[j].z = N * terms[j].eta;
        }
        // sum over w of prod_j G(q;a,w_j b_j) sigma_hat(w eta) collapses to the
        // kernel integral with two-term coordinate factors
        cd wsum = osc::kernel_integral(factors, params.k, spec);
        std::uint64_t la = (static_cast<std::uint64_t>(lambda % std::int64_t(q)) * a) % q;
        total += std::conj(e_q(la, q)) * psi_factor * wsum;
    }
    return total;
}

std::complex<double> main_term_literal(std::int64_t lambda, std::span<const double> xi,
                                       std::int64_t q_max, const FormParams& params,
                                       const osc::QuadratureSpec& spec) {
    params.validate();
    if (params.d > 16) throw precondition_error("main_term_literal: d too large for the 2^d sum");
    if (params.d <= params.k)
        throw precondition_error("main_term_literal: requires d > k");
    const std::size_t d = xi.size();
    std::vector<CoordTerm> terms;
    std::vector<double> eta(d);
    cd total{0.0, 0.0};
    for (const auto& [q, a] : farey_pairs(q_max)) {
        if (!build_coord_terms(q, a, xi, params.k, terms)) continue;
        double psi_factor = 1.0;
        for (std::size_t j = 0; j < d; ++j) psi_factor *= terms[j].phi;
        cd wsum{0.0, 0.0};
        for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
            cd gprod{1.0, 0.0};
            for (std::size_t j = 0; j < d; ++j) {
                bool neg = (mask >> j) & 1u;
                gprod *= neg ? terms[j].gminus : terms[j].gplus;
                eta[j] = neg ? -terms[j].eta : terms[j].eta;
            }
            wsum += gprod * osc::sigma_hat(eta, double(lambda), params, spec);
        }
        std::uint64_t la = (static_cast<std::uint64_t>(lambda % std::int64_t(q)) * a) % q;
        total += std::conj(e_q(la, q)) * psi_factor * wsum;
    }
    return total;
}

ErrorFieldSummary error_field(std::int64_t lambda, std::span<const std::vector<double>> xi_samples,
                              std::int64_t q_max, const FormParams& params,
                              const osc::QuadratureSpec& spec, const Parallelism& par) {
    ErrorFieldSummary out;
    out.samples.resize(xi_samples.size());
    parallel_blocks(par, xi_samples.size(), [&](std::size_t i) {
        MultiplierSample s;
        s.lambda = lambda;
        s.xi = xi_samples[i];
        s.q_max = q_max;
        s.a_hat = a_hat(lambda, s.xi, params);
        s.main = main_term(lambda, s.xi, q_max, params, spec);
        s.error = s.a_hat - s.main;
        out.samples[i] = std::move(s);
    });
    double sum = 0;
    for (const auto& s : out.samples) {
        double e = std::abs(s.error);
        out.max_error = std::max(out.max_error, e);
        sum += e;
    }
    out.mean_error = out.samples.empty() ? 0.0 : sum / double(out.samples.size());
    return out;
}

SingularSeriesValue singular_series(std::int64_t lambda, std::int64_t q_max,
                                    const FormParams& params) {
    params.validate();
    if (params.d < 2 * params.k + 1)
        throw precondition_error("singular_series: requires d >= 2k+1 for absolute convergence");
    if (q_max < 1) throw precondition_error("singular_series: q_max must be >= 1");
    cd acc{0.0, 0.0};
    for (const auto& [q, a] : farey_pairs(q_max)) {
        cd g = expsum::gauss_sum(q, a, 0, params.k).value;
        cd gd{1.0, 0.0};
        for (int j = 0; j < params.d; ++j) gd *= g;
        std::uint64_t la = (static_cast<std::uint64_t>(lambda % std::int64_t(q)) * a) % q;
        acc += std::conj(e_q(la, q)) * gd;
    }
    return {acc.real(), acc.imag()};
}

double decay_slope(std::span<const DecayRow> rows) {
    if (rows.size() < 2) return 0.0;
    bool all_equal = true;
    for (const auto& r : rows)
        if (r.max_error != rows[0].max_error) { all_equal = false; break; }
    if (all_equal) return 0.0;  // includes the identically-zero error field
    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        if (r.max_error <= 0.0) return 0.0;  // degenerate mixed case
        lx.push_back(std::log(double(r.block)));
        ly.push_back(std::log(r.max_error));
    }
    return expsum::fit_line(lx, ly).slope;
}

DecayResult dyadic_error_decay(std::span<const std::int64_t> lambda_blocks, int sample_count,
                               std::int64_t q_max, const FormParams& params, std::uint64_t seed,
                               const osc::QuadratureSpec& spec, const Parallelism& par) {
    for (std::size_t i = 1; i < lambda_blocks.size(); ++i)
        if (lambda_blocks[i] <= lambda_blocks[i - 1])
            throw precondition_error("dyadic_error_decay: lambda blocks must be increasing");
    DecayResult out;
    for (std::int64_t block : lambda_blocks) {
        SplitMix64 rng(seed ^ static_cast<std::uint64_t>(block));
        struct Draw {
            std::int64_t lambda;
            std::vector<double> xi;
        };
        std::vector<Draw> draws(static_cast<std::size_t>(sample_count));
        for (auto& dr : draws) {
            dr.lambda = static_cast<std::int64_t>(
                rng.uniform_u64(static_cast<std::uint64_t>(block / 2),
                                static_cast<std::uint64_t>(block - 1)));
            dr.xi.resize(static_cast<std::size_t>(params.d));
            for (auto& x : dr.xi) x = rng.uniform01();
        }
        std::vector<double> errs(draws.size(), 0.0);
        parallel_blocks(par, draws.size(), [&](std::size_t i) {
            std::int64_t qm = q_max > 0 ? q_max
                                        : std::max<std::int64_t>(1, lattice::floor_kth_root(
                                                                        draws[i].lambda, params.k));
            cd ah = a_hat(draws[i].lambda, draws[i].xi, params);
            cd mt = main_term(draws[i].lambda, draws[i].xi, qm, params, spec);
            errs[i] = std::abs(ah - mt);
        });
        DecayRow row;
        row.block = block;
        double sum = 0;
        for (double e : errs) {
            row.max_error = std::max(row.max_error, e);
            sum += e;
        }
        row.mean_error = errs.empty() ? 0.0 : sum / double(errs.size());
        out.rows.push_back(row);
    }
    out.slope = decay_slope(out.rows);
    return out;
}

namespace {

double kernel_sup_grid(std::span<const std::pair<double, double>> keep_hook,
                       const arcs::ArcDissection* dissection, std::int64_t N,
                       const FormParams& params, std::int64_t grid_resolution,
                       const Parallelism& par) {
    if (N == 0) {
        // S_0 == 1 identically: sup = 1, integral = measure of B
        double measure = 0;
        if (dissection) {
            auto parts = dissection->major_total_measure();
            measure = parts.second.to_double();
        } else {
            for (const auto& [a, b] : keep_hook) measure += b - a;
        }
        return measure;  // N^{k-d} treated as 1 at the degenerate level
    }
    BigInt scale = BigInt(4ll * params.k) * BigInt::pow(BigInt(N), static_cast<unsigned>(params.k - 1));
    if (BigInt(grid_resolution) < scale * BigInt(2))
        throw precondition_error("kernel_sup_bound: grid coarser than the arc scale");
    const std::size_t res = static_cast<std::size_t>(grid_resolution);
    const std::size_t blocks = 256;
    std::vector<double> partial(blocks, 0.0);
    parallel_blocks(par, blocks, [&](std::size_t b) {
        double acc = 0;
        for (std::size_t i = b; i < res; i += blocks) {
            double theta = (double(i) + 0.5) / double(res);
            if (dissection) {
                if (dissection->classify(theta).major) continue;
            } else {
                bool inside = false;
                for (const auto& [lo, hi] : keep_hook)
                    if (theta >= lo && theta <= hi) { inside = true; break; }
                if (!inside) continue;
            }
            acc += std::pow(expsum::sup_over_xi(theta, N, params.k), double(params.d));
        }
        partial[b] = acc;
    });
    double integral = 0;
    for (double p : partial) integral += p;
    integral /= double(res);
    return std::pow(double(N), double(params.k) - double(params.d)) * integral;
}

}  // namespace

double kernel_sup_bound(const arcs::ArcDissection& dissection, std::int64_t N,
                        const FormParams& params, std::int64_t grid_resolution,
                        const Parallelism& par) {
    return kernel_sup_grid({}, &dissection, N, params, grid_resolution, par);
}

double kernel_sup_bound(std::span<const std::pair<double, double>> intervals, std::int64_t N,
                        const FormParams& params, std::int64_t grid_resolution,
                        const Parallelism& par) {
    if (intervals.empty()) return 0.0;
    return kernel_sup_grid(intervals, nullptr, N, params, grid_resolution, par);
}

}
