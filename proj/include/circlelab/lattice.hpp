#ifndef CIRCLELAB_LATTICE_HPP
#define CIRCLELAB_LATTICE_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "circlelab/bigint.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/formparams.hpp"
#include "circlelab/parallel.hpp"

namespace circlelab::lattice {

// largest m >= 0 with m^k <= lambda
std::int64_t floor_kth_root(std::int64_t lambda, int k);
// smallest m >= 0 with m^k >= lambda
std::int64_t ceil_kth_root(std::int64_t lambda, int k);

// Exact counts R(lambda) for lambda = 0..lambda_max.
struct RepresentationTable {
    FormParams params;
    std::int64_t lambda_max = 0;
    std::vector<BigInt> counts;
};

// d-fold truncated convolution of the one-dimensional count sequence
// c1[0] = 1, c1[j^k] = 2. Exact big integers, schoolbook convolution.
RepresentationTable count_representations(const FormParams& params, std::int64_t lambda_max,
                                          const Budget& budget = {},
                                          const Parallelism& par = {});

enum class EnumMode { full, factored };

// All x in Z^d with sum |x_j|^k = lambda, by meet-in-the-middle over a
// ceil(d/2) / floor(d/2) coordinate split.
struct SolutionSet {
    FormParams params;
    std::int64_t lambda = 0;
    // full mode
    std::vector<std::vector<std::int32_t>> points;
    // factored mode: per half, partial form value -> list of half vectors
    struct HalfTable {
        int dims = 0;
        std::unordered_map<std::int64_t, std::vector<std::vector<std::int32_t>>> bySum;
    };
    std::optional<std::pair<HalfTable, HalfTable>> factored;
};

SolutionSet enumerate_solutions(const FormParams& params, std::int64_t lambda, EnumMode mode,
                                const Budget& budget = {});

// Dense finite-support stand-in for f: Z^d -> C on the box {-B..B}^d,
// row-major with the last coordinate fastest.
struct GridFunction {
    int d = 1;
    std::int64_t box = 0;
    std::vector<std::complex<double>> values;

    static GridFunction zeros(int d, std::int64_t box);
    static GridFunction delta(int d, std::int64_t box);  // 1 at the origin
    static GridFunction constant(int d, std::int64_t box, std::complex<double> c);

    std::size_t side() const { return static_cast<std::size_t>(2 * box + 1); }
    std::size_t size() const { return values.size(); }
    std::size_t index(std::span<const std::int64_t> x) const;  // x_j in [-box, box]
    bool contains(std::span<const std::int64_t> x) const;
    std::complex<double>& at(std::span<const std::int64_t> x);
    std::complex<double> at(std::span<const std::int64_t> x) const;
};

// A_lambda f(x) = lambda^{1-d/k} sum_{f(y)=lambda} f(x-y); the output box is
// f.box + ceil(lambda^{1/k}).
GridFunction apply_average(const GridFunction& f, std::int64_t lambda, const FormParams& params,
                           const Budget& budget = {});

// pointwise max over lambda_set of |A_lambda f|; lambdas with R = 0 are skipped
GridFunction maximal_function(const GridFunction& f, std::span<const std::int64_t> lambda_set,
                              const FormParams& params, const Budget& budget = {});

// ||A_* f||_p / ||f||_p; a lower bound on the operator norm, not an estimate
double empirical_lp_ratio(const GridFunction& f, double p,
                          std::span<const std::int64_t> lambda_set, const FormParams& params,
                          const Budget& budget = {});

double lp_norm(const GridFunction& f, double p);

}

#endif
