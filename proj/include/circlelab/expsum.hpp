#ifndef CIRCLELAB_EXPSUM_HPP
#define CIRCLELAB_EXPSUM_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "circlelab/arcs.hpp"
#include "circlelab/bigint.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/formparams.hpp"
#include "circlelab/parallel.hpp"

namespace circlelab::expsum {

// e(x) = exp(2 pi i x)
std::complex<double> unit_phase(double x);

// frac(x * n) with the integer part removed in exact integer arithmetic;
// avoids catastrophic phase loss when n^k is large
double frac_mul(double x, std::uint64_t n);

// S_N(theta, xi) = sum_{|n| <= N} e(theta |n|^k + xi n)
std::complex<double> s_n(double theta, double xi, std::int64_t N, int k);

// F_N(theta; xi) = prod_j S_N(theta, xi_j)
std::complex<double> f_n(double theta, std::span<const double> xi, std::int64_t N,
                         const FormParams& params);

// phase theta n^k + xi_l n^l + ... + xi_1 n; xi[j-1] multiplies n^j
struct PhaseVector {
    double theta = 0;
    std::vector<double> xi;
};

// one-sided sum over n in [1, N]
std::complex<double> weyl_sum(const PhaseVector& phase, std::int64_t N, int k);

// G(q; a, b) = q^{-1} sum_{x in Z_q} e_q(a x^k + b x), gcd(a, q) = 1,
// with x^k reduced mod q exactly before any float phase
struct GaussSum {
    std::uint64_t q = 1, a = 0, b = 0;
    int k = 0;
    std::complex<double> value;
};
GaussSum gauss_sum(std::uint64_t q, std::uint64_t a, std::uint64_t b, int k);

// prod_j G(q; a, b_j): the d-dimensional Gauss sum over representatives [0,q)^d
std::complex<double> gauss_sum_multi(std::uint64_t q, std::uint64_t a,
                                     std::span<const std::uint64_t> b, const FormParams& params);

// (sum_b e_q(-m b) G(q; a, b),  e_q(a m^k)); the two must agree
std::pair<std::complex<double>, std::complex<double>>
gauss_fourier_check(std::uint64_t q, std::uint64_t a, std::uint64_t m, int k);

// J_{s,k}(N): 2s-tuples with matching power sums of degrees 1..k, by hash-join
// on power-sum vectors (64-bit counts, promoted to BigInt on overflow)
BigInt vinogradov_count(int s, int k, std::int64_t N, const Budget& budget = {});

// LHS = sum_h |a_h(theta)|^2 grouped by the degree <= l power sums;
// RHS = independent pair enumeration. Both returned for comparison.
std::pair<std::complex<double>, std::complex<double>>
mean_value_identity_check(double theta, int s, int l, int k, std::int64_t N,
                          const Budget& budget = {});

// sup over xi of |S_N(theta, .)|: coarse uniform grid plus golden-section
// refinement around the top grid points; a lower bound on the true sup
double sup_over_xi(double theta, std::int64_t N, int k, int grid = 256, int top = 3);

struct MinorSupResult {
    double sup = 0;
    std::size_t kept = 0;  // theta samples that landed on minor arcs
};
MinorSupResult minor_arc_sup_scan(std::int64_t N, int k, std::span<const double> theta_samples,
                                  std::span<const double> xi_samples,
                                  const arcs::ArcDissection& dissection);

// sweep helper: per-N sampled sup over the minor arcs and the fitted exponent
struct SupSweepRow {
    std::int64_t n;
    double sup;
};
struct SupSweepResult {
    std::vector<SupSweepRow> rows;
    double fitted_exponent;
};
SupSweepResult minor_sup_sweep(std::span<const std::int64_t> Ns, int k, int theta_samples,
                               int xi_samples, std::uint64_t seed, const Parallelism& par = {});

// I_{r,k}(N) = int_m sup_xi |S_N|^r dtheta, Riemann estimate on a theta grid
// finer than the arc width (grid_resolution >= 8 k N^{k-1})
double mean_value_integral_estimate(double r, int k, std::int64_t N,
                                    const arcs::ArcDissection& dissection,
                                    std::int64_t grid_resolution, const Parallelism& par = {});

// quadrature calibration: (1/(res_t res_x)) sum |S_N|^2 over the full double
// grid; equals 2N+1 exactly once both resolutions exceed the frequency range
double mean_value_calibration(std::int64_t N, int k, std::int64_t theta_res, std::int64_t xi_res);

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
};
SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

}

#endif
