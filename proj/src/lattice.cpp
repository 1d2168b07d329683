#include "circlelab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace circlelab::lattice {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::int64_t floor_kth_root(std::int64_t lambda, int k) {
    if (lambda < 0) throw precondition_error("floor_kth_root: negative argument");
    if (lambda == 0) return 0;
    std::int64_t m = static_cast<std::int64_t>(std::floor(std::pow(double(lambda), 1.0 / k)));
    while (ipow(m + 1, k) <= lambda) ++m;
    while (m > 0 && ipow(m, k) > lambda) --m;
    return m;
}

std::int64_t ceil_kth_root(std::int64_t lambda, int k) {
    std::int64_t m = floor_kth_root(lambda, k);
    return ipow(m, k) == lambda ? m : m + 1;
}

RepresentationTable count_representations(const FormParams& params, std::int64_t lambda_max,
                                          const Budget& budget, const Parallelism& par) {
    params.validate();
    if (lambda_max < 0) throw precondition_error("count_representations: lambda_max must be >= 0");
    const std::size_t len = static_cast<std::size_t>(lambda_max) + 1;
    // rough cap check: d tables of len BigInts (magnitude grows with d)
    if (len > budget.max_table_bytes / (sizeof(BigInt) + 8))
        throw budget_error("count_representations: table of " + std::to_string(len) +
                           " big integers exceeds the memory budget");

    // one-dimensional counts: c1[0] = 1, c1[j^k] = 2
    std::vector<std::int64_t> cubes;  // j^k <= lambda_max, j >= 1
    for (std::int64_t j = 1;; ++j) {
        std::int64_t p = 1;
        bool over = false;
        for (int i = 0; i < params.k; ++i) {
            p *= j;
            if (p > lambda_max) { over = true; break; }
        }
        if (over) break;
        cubes.push_back(p);
    }

    std::vector<BigInt> cur(len);
    cur[0] = BigInt(1);  // d = 0: only the empty sum
    std::vector<BigInt> next(len);
    for (int dim = 0; dim < params.d; ++dim) {
        // next[l] = cur[l] + 2 * sum_j cur[l - j^k]
        parallel_ranges(par, len, 4096, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t l = lo; l < hi; ++l) {
                BigInt acc = cur[l];
                for (std::int64_t c : cubes) {
                    if (c > static_cast<std::int64_t>(l)) break;
                    BigInt t = cur[l - static_cast<std::size_t>(c)];
                    acc += t + t;
                }
                next[l] = std::move(acc);
            }
        });
        cur.swap(next);
    }
    return {params, lambda_max, std::move(cur)};
}

namespace {

// enumerate all vectors x in [-M, M]^dims with sum |x_j|^k = remaining budget
// tracked incrementally; invokes sink(partial_sum, vec) for each vector with
// partial form value <= lambda
template <typename Sink>
void enumerate_half(int dims, int k, std::int64_t lambda, Sink&& sink) {
    std::vector<std::int32_t> vec(static_cast<std::size_t>(dims), 0);
    const std::int64_t M = floor_kth_root(lambda, k);
    // iterative odometer over [-M, M]^dims with pruning on the partial sum
    std::vector<std::int64_t> partial(static_cast<std::size_t>(dims) + 1, 0);
    int level = 0;
    vec.assign(static_cast<std::size_t>(dims), static_cast<std::int32_t>(-M - 1));
    while (level >= 0) {
        if (level == dims) {
            sink(partial[static_cast<std::size_t>(dims)], vec);
            --level;
            continue;
        }
        std::int32_t& x = vec[static_cast<std::size_t>(level)];
        if (x >= static_cast<std::int32_t>(M)) {
            x = static_cast<std::int32_t>(-M - 1);
            --level;
            continue;
        }
        ++x;
        std::int64_t v = partial[static_cast<std::size_t>(level)] + ipow(std::llabs(x), k);
        if (v > lambda) {
            // |x|^k grows away from 0; once past 0 no later value fits
            if (x >= 0) { x = static_cast<std::int32_t>(-M - 1); --level; }
            continue;
        }
        partial[static_cast<std::size_t>(level) + 1] = v;
        ++level;
    }
}

}  // namespace

SolutionSet enumerate_solutions(const FormParams& params, std::int64_t lambda, EnumMode mode,
                                const Budget& budget) {
    params.validate();
    if (lambda < 0) throw precondition_error("enumerate_solutions: lambda must be >= 0");
    SolutionSet out;
    out.params = params;
    out.lambda = lambda;

    const int d1 = (params.d + 1) / 2;
    const int d2 = params.d - d1;

    SolutionSet::HalfTable first, second;
    first.dims = d1;
    second.dims = d2;
    std::uint64_t stored = 0;
    auto fill = [&](SolutionSet::HalfTable& half) {
        enumerate_half(half.dims, params.k, lambda, [&](std::int64_t s, const std::vector<std::int32_t>& v) {
            half.bySum[s].push_back(v);
            if (++stored > budget.max_solutions)
                throw budget_error("enumerate_solutions: half-table size exceeds the cap");
        });
    };
    fill(first);
    if (d2 > 0) fill(second); else second.bySum[0].push_back({});

    if (mode == EnumMode::factored) {
        out.factored = std::make_pair(std::move(first), std::move(second));
        return out;
    }

    // hash join: first half enumerated into the table, second half probes
    std::uint64_t produced = 0;
    for (const auto& [s2, vecs2] : second.bySum) {
        auto it = first.bySum.find(lambda - s2);
        if (it == first.bySum.end()) continue;
        for (const auto& v2 : vecs2) {
            for (const auto& v1 : it->second) {
                if (++produced > budget.max_solutions) {
                    // name the true count in the error
                    auto table = count_representations(params, lambda, budget);
                    throw budget_error("enumerate_solutions: R(lambda) = " +
                                       table.counts.back().to_string() +
                                       " exceeds the materialization cap");
                }
                std::vector<std::int32_t> joined;
                joined.reserve(static_cast<std::size_t>(params.d));
                joined.insert(joined.end(), v1.begin(), v1.end());
                joined.insert(joined.end(), v2.begin(), v2.end());
                out.points.push_back(std::move(joined));
            }
        }
    }
    return out;
}

GridFunction GridFunction::zeros(int d, std::int64_t box) {
    GridFunction g;
    g.d = d;
    g.box = box;
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(2 * box + 1);
    g.values.assign(n, {0.0, 0.0});
    return g;
}

GridFunction GridFunction::delta(int d, std::int64_t box) {
    GridFunction g = zeros(d, box);
    std::vector<std::int64_t> origin(static_cast<std::size_t>(d), 0);
    g.at(origin) = {1.0, 0.0};
    return g;
}

GridFunction GridFunction::constant(int d, std::int64_t box, std::complex<double> c) {
    GridFunction g = zeros(d, box);
    for (auto& v : g.values) v = c;
    return g;
}

std::size_t GridFunction::index(std::span<const std::int64_t> x) const {
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j)
        idx = idx * side() + static_cast<std::size_t>(x[static_cast<std::size_t>(j)] + box);
    return idx;
}

bool GridFunction::contains(std::span<const std::int64_t> x) const {
    for (int j = 0; j < d; ++j) {
        std::int64_t v = x[static_cast<std::size_t>(j)];
        if (v < -box || v > box) return false;
    }
    return true;
}

std::complex<double>& GridFunction::at(std::span<const std::int64_t> x) { return values[index(x)]; }
std::complex<double> GridFunction::at(std::span<const std::int64_t> x) const { return values[index(x)]; }

namespace {

// iterate all grid points of the box {-B..B}^d
template <typename Fn>
void for_each_point(int d, std::int64_t B, Fn&& fn) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(d), -B);
    for (;;) {
        fn(x);
        int j = d - 1;
        while (j >= 0 && x[static_cast<std::size_t>(j)] == B) {
            x[static_cast<std::size_t>(j)] = -B;
            --j;
        }
        if (j < 0) break;
        ++x[static_cast<std::size_t>(j)];
    }
}

std::size_t count_nonzeros(const GridFunction& f) {
    std::size_t n = 0;
    for (const auto& v : f.values)
        if (v != std::complex<double>{0.0, 0.0}) ++n;
    return n;
}

}  // namespace

GridFunction apply_average(const GridFunction& f, std::int64_t lambda, const FormParams& params,
                           const Budget& budget) {
    params.validate();
    if (f.d != params.d) throw precondition_error("apply_average: dimension mismatch");
    if (lambda < 1) throw precondition_error("apply_average: lambda must be >= 1");
    SolutionSet sols = enumerate_solutions(params, lambda, EnumMode::full, budget);
    const std::int64_t B2 = f.box + ceil_kth_root(lambda, params.k);
    GridFunction out = GridFunction::zeros(f.d, B2);
    const double scale = std::pow(double(lambda), 1.0 - double(params.d) / params.k);

    const bool sparse = count_nonzeros(f) * 8 < f.size();
    std::vector<std::int64_t> t(static_cast<std::size_t>(f.d));
    if (sparse) {
        // out(z + y) += f(z) over nonzero z and solutions y
        for_each_point(f.d, f.box, [&](const std::vector<std::int64_t>& z) {
            std::complex<double> fv = f.at(z);
            if (fv == std::complex<double>{0.0, 0.0}) return;
            for (const auto& y : sols.points) {
                for (int j = 0; j < f.d; ++j)
                    t[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] + y[static_cast<std::size_t>(j)];
                out.at(t) += fv;
            }
        });
    } else {
        for_each_point(f.d, B2, [&](const std::vector<std::int64_t>& x) {
            std::complex<double> acc{0.0, 0.0};
            for (const auto& y : sols.points) {
                bool inside = true;
                for (int j = 0; j < f.d; ++j) {
                    std::int64_t v = x[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)];
                    if (v < -f.box || v > f.box) { inside = false; break; }
                    t[static_cast<std::size_t>(j)] = v;
                }
                if (inside) acc += f.at(t);
            }
            out.at(x) = acc;
        });
    }
    for (auto& v : out.values) v *= scale;
    return out;
}

GridFunction maximal_function(const GridFunction& f, std::span<const std::int64_t> lambda_set,
                              const FormParams& params, const Budget& budget) {
    if (lambda_set.empty()) throw precondition_error("maximal_function: empty lambda set");
    std::int64_t reach = 0;
    for (std::int64_t l : lambda_set) {
        if (l < 1) throw precondition_error("maximal_function: lambda must be >= 1");
        reach = std::max(reach, ceil_kth_root(l, params.k));
    }
    GridFunction out = GridFunction::zeros(f.d, f.box + reach);
    for (std::int64_t l : lambda_set) {
        SolutionSet probe = enumerate_solutions(params, l, EnumMode::factored, budget);
        // skip lambdas with no representations
        bool any = false;
        for (const auto& [s2, vecs2] : probe.factored->second.bySum) {
            if (probe.factored->first.bySum.count(l - s2)) { any = true; break; }
        }
        if (!any) continue;
        GridFunction a = apply_average(f, l, params, budget);
        // embed a (box f.box + reach_l) into out and take pointwise max of |.|
        for_each_point(a.d, a.box, [&](const std::vector<std::int64_t>& x) {
            double m = std::abs(a.at(x));
            auto& o = out.at(x);
            if (std::abs(o) < m) o = {m, 0.0};
        });
    }
    return out;
}

double lp_norm(const GridFunction& f, double p) {
    if (p == std::numeric_limits<double>::infinity()) {
        double m = 0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0;
    for (const auto& v : f.values) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

double empirical_lp_ratio(const GridFunction& f, double p,
                          std::span<const std::int64_t> lambda_set, const FormParams& params,
                          const Budget& budget) {
    if (!(p >= 1.0)) throw precondition_error("empirical_lp_ratio: requires p >= 1");
    double fn = lp_norm(f, p);
    if (fn == 0.0) throw precondition_error("empirical_lp_ratio: input function is identically zero");
    GridFunction m = maximal_function(f, lambda_set, params, budget);
    return lp_norm(m, p) / fn;
}

}
