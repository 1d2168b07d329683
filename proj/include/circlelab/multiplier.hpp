#ifndef CIRCLELAB_MULTIPLIER_HPP
#define CIRCLELAB_MULTIPLIER_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "circlelab/arcs.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/formparams.hpp"
#include "circlelab/oscillatory.hpp"
#include "circlelab/parallel.hpp"

namespace circlelab::mult {

// fixed smooth bump: 1 on |t| <= 1/8, 0 for |t| >= 1/4, smooth in between
double psi_phi(double t);
double psi(std::span<const double> u);  // product over coordinates

// A_lambda^(xi) = lambda^{1-d/k} sum_{f(x)=lambda} e(x . xi)
std::complex<double> a_hat_direct(std::int64_t lambda, std::span<const double> xi,
                                  const FormParams& params, const Budget& budget = {});

// half-cube phase tables F_i(s; xi_half) joined over s1 + s2 = lambda;
// cost (2N+1)^{ceil(d/2)} per xi instead of R(lambda) enumeration
std::complex<double> a_hat_factored(std::int64_t lambda, std::span<const double> xi,
                                    const FormParams& params, const Parallelism& par = {});

std::complex<double> a_hat(std::int64_t lambda, std::span<const double> xi,
                           const FormParams& params, const Budget& budget = {},
                           const Parallelism& par = {});

// Truncated main term of the Approximation Formula. The w/b double sum is
// collapsed: the sign sum moves inside the theta integral where it factors
// into per-coordinate two-term factors (the G_N product of the major-arc
// approximation), so the cost is O(d) per (q, a) instead of O(2^d).
std::complex<double> main_term(std::int64_t lambda, std::span<const double> xi,
                               std::int64_t q_max, const FormParams& params,
                               const osc::QuadratureSpec& spec = {});

// literal 2^d sign-pattern sum; oracle for the collapsed path (small d only)
std::complex<double> main_term_literal(std::int64_t lambda, std::span<const double> xi,
                                       std::int64_t q_max, const FormParams& params,
                                       const osc::QuadratureSpec& spec = {});

struct MultiplierSample {
    std::int64_t lambda = 0;
    std::vector<double> xi;
    std::complex<double> a_hat;
    std::complex<double> main;
    std::complex<double> error;  // a_hat - main, exact by construction
    std::int64_t q_max = 0;
};

struct ErrorFieldSummary {
    std::vector<MultiplierSample> samples;
    double max_error = 0;
    double mean_error = 0;
};

ErrorFieldSummary error_field(std::int64_t lambda, std::span<const std::vector<double>> xi_samples,
                              std::int64_t q_max, const FormParams& params,
                              const osc::QuadratureSpec& spec = {}, const Parallelism& par = {});

// truncated singular series sum_{q <= q_max} sum_{a in Z_q^*} e_q(-lambda a)
// prod_j G(q; a, 0); the imaginary part is a cancellation diagnostic
struct SingularSeriesValue {
    double real = 0;
    double imag = 0;
};
SingularSeriesValue singular_series(std::int64_t lambda, std::int64_t q_max,
                                    const FormParams& params);

struct DecayRow {
    std::int64_t block = 0;   // dyadic Lambda
    double max_error = 0;
    double mean_error = 0;
};
struct DecayResult {
    std::vector<DecayRow> rows;
    double slope = 0;  // fitted log-log slope of max_error against Lambda
};

// slope convention: all-zero (or all-equal) rows fit to slope 0
double decay_slope(std::span<const DecayRow> rows);

// per dyadic Lambda: seeded (lambda, xi) samples from [Lambda/2, Lambda),
// q_max = 0 means the default q_max = floor(lambda^{1/k})
DecayResult dyadic_error_decay(std::span<const std::int64_t> lambda_blocks, int sample_count,
                               std::int64_t q_max, const FormParams& params, std::uint64_t seed,
                               const osc::QuadratureSpec& spec = {}, const Parallelism& par = {});

// N^{k-d} int_B sup_xi |F_N(theta; xi)| dtheta over the minor arcs of the
// dissection (Lemma-style operator-norm surrogate)
double kernel_sup_bound(const arcs::ArcDissection& dissection, std::int64_t N,
                        const FormParams& params, std::int64_t grid_resolution,
                        const Parallelism& par = {});
// same with an explicit theta-interval list (test hook; empty set gives 0)
double kernel_sup_bound(std::span<const std::pair<double, double>> intervals, std::int64_t N,
                        const FormParams& params, std::int64_t grid_resolution,
                        const Parallelism& par = {});

}

#endif
