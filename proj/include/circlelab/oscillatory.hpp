#ifndef CIRCLELAB_OSCILLATORY_HPP
#define CIRCLELAB_OSCILLATORY_HPP

#include <complex>
#include <span>
#include <vector>

#include "circlelab/errors.hpp"
#include "circlelab/formparams.hpp"

namespace circlelab::osc {

// Quadrature controls shared by the oscillatory integrals. Panels are sized
// by phase variation, not by error estimates, so cost and results are
// reproducible for a given spec.
struct QuadratureSpec {
    int panel_order = 12;           // Gauss-Legendre order per panel
    double phase_budget = 0.125;    // max phase change per panel, in turns
    double tail_tolerance = 1e-9;   // truncation tolerance for improper integrals

    void validate() const {
        if (panel_order < 4) throw precondition_error("QuadratureSpec: order must be >= 4");
        if (!(phase_budget > 0 && phase_budget <= 0.25))
            throw precondition_error("QuadratureSpec: phase budget must be in (0, 1/4]");
        if (!(tail_tolerance > 0)) throw precondition_error("QuadratureSpec: tolerance must be > 0");
    }
};

// v_N(theta, xi) = int_0^N e(theta t^k + xi t) dt, panel-adaptive
std::complex<double> v_n(double theta, double xi, double N, int k,
                         const QuadratureSpec& spec = {});

// |v_N| (1 + N |xi|)^{1/2} / N, the second-derivative-bound ratio
double check_vn_bound2(double theta, double xi, double N, int k,
                       const QuadratureSpec& spec = {});

// scaled unit-interval integral v1(u, z) = int_0^1 e(u t^k + z t) dt
std::complex<double> v1_direct(double u, double z, int k, const QuadratureSpec& spec = {});

// W(y) = int_0^infty e(s^k + y s) ds on the rotated ray s = e^{i pi/(2k)} r
std::complex<double> airy_w(std::complex<double> y, int k, const QuadratureSpec& spec = {});

// T(u, z) = int_1^infty e(u t^k + z t) dt by the endpoint asymptotic series;
// requires |k u + z| to be large (callers arrange Re u >= the split point)
std::complex<double> tail_t_series(std::complex<double> u, double z, int k);

// v1 on Re u >= split via v1 = u^{-1/k} W(z u^{-1/k}) - T(u, z)
std::complex<double> v1_asymptotic(std::complex<double> u, double z, int k,
                                   const QuadratureSpec& spec = {});

// One coordinate factor of the kernel integrand:
//   f_j(u) = plus * v1(u, z) + minus * v1(u, -z).
struct CoordFactor {
    std::complex<double> plus{1.0, 0.0};
    std::complex<double> minus{0.0, 0.0};
    double z = 0.0;
};

// kappa = int_R prod_j f_j(u) e(-u) du. This is J_lambda with N = lambda^{1/k}
// after the substitution u = lambda theta, with per-coordinate weights kept
// general so Gauss-sum-weighted main terms reuse the same integral.
std::complex<double> kernel_integral(std::span<const CoordFactor> factors, int k,
                                     const QuadratureSpec& spec = {});

// J_lambda(eta) = int_R prod_j v_N(theta, eta_j) e(-lambda theta) dtheta,
// N = lambda^{1/k}; requires d > k for an integrable tail
std::complex<double> j_lambda(std::span<const double> eta, double lambda,
                              const FormParams& params, const QuadratureSpec& spec = {});

// dsigma_lambda^~(eta) = lambda^{1-d/k} J_lambda(eta)
std::complex<double> sigma_hat(std::span<const double> eta, double lambda,
                               const FormParams& params, const QuadratureSpec& spec = {});

// independent oracle: lambda^{d/k-1} Gamma(1+1/k)^d / Gamma(d/k)
double j_lambda_zero_oracle(double lambda, const FormParams& params);

}

#endif
