#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "circlelab/arcs.hpp"
#include "circlelab/exponents.hpp"
#include "circlelab/expsum.hpp"
#include "circlelab/lattice.hpp"
#include "circlelab/multiplier.hpp"
#include "circlelab/oscillatory.hpp"
#include "circlelab/version.hpp"

namespace py = pybind11;
using namespace circlelab;

namespace {

py::object big_to_int(const BigInt& v) {
    // exact conversion through the decimal string
    return py::int_(py::str(v.to_string()));
}

FormParams params_of(int k, int d) { return FormParams{k, d}; }

}  // namespace

PYBIND11_MODULE(_circlelab, m) {
    m.doc() = "circle-method experiments for k-spherical counting problems";
    m.attr("__version__") = version_string;

    py::register_exception<precondition_error>(m, "PreconditionError", PyExc_ValueError);

    // exponents
    m.def("d0", [](int k) {
        auto r = exponents::d0(k);
        return py::make_tuple(r.value.to_string(), r.value.to_double(), r.maximizer);
    }, py::arg("k"), "d0(k) as (exact string, float, maximizing l0)");
    m.def("d0_star", &exponents::d0_star, py::arg("k"));
    m.def("tau", [](int k) { return exponents::tau(k).to_string(); }, py::arg("k"));
    m.def("delta0", [](int k, int d) {
        auto r = exponents::delta0(params_of(k, d));
        return py::make_tuple(r.value.to_string(), r.value.to_double(), r.below_threshold);
    }, py::arg("k"), py::arg("d"));
    m.def("p0", [](int k, int d) {
        auto v = exponents::p0(params_of(k, d));
        return py::make_tuple(v.to_string(), v.to_double());
    }, py::arg("k"), py::arg("d"));
    m.def("table1", [] {
        std::vector<std::pair<int, long long>> rows = exponents::table1();
        return rows;
    });

    // lattice
    m.def("representation_counts", [](int k, int d, std::int64_t lambda_max) {
        auto table = lattice::count_representations(params_of(k, d), lambda_max);
        py::list out;
        for (const auto& c : table.counts) out.append(big_to_int(c));
        return out;
    }, py::arg("k"), py::arg("d"), py::arg("lambda_max"));
    m.def("solutions", [](int k, int d, std::int64_t lambda) {
        auto s = lattice::enumerate_solutions(params_of(k, d), lambda, lattice::EnumMode::full);
        return s.points;
    }, py::arg("k"), py::arg("d"), py::arg("lambda"));

    // expsum
    m.def("s_n", &expsum::s_n, py::arg("theta"), py::arg("xi"), py::arg("n"), py::arg("k"));
    m.def("weyl_sum", [](double theta, std::vector<double> xi, std::int64_t n, int k) {
        return expsum::weyl_sum({theta, std::move(xi)}, n, k);
    }, py::arg("theta"), py::arg("xi"), py::arg("n"), py::arg("k"));
    m.def("gauss_sum", [](std::uint64_t q, std::uint64_t a, std::uint64_t b, int k) {
        return expsum::gauss_sum(q, a, b, k).value;
    }, py::arg("q"), py::arg("a"), py::arg("b"), py::arg("k"));
    m.def("gauss_fourier_check", [](std::uint64_t q, std::uint64_t a, std::uint64_t mm, int k) {
        return expsum::gauss_fourier_check(q, a, mm, k);
    }, py::arg("q"), py::arg("a"), py::arg("m"), py::arg("k"));
    m.def("vinogradov_count", [](int s, int k, std::int64_t n) {
        return big_to_int(expsum::vinogradov_count(s, k, n));
    }, py::arg("s"), py::arg("k"), py::arg("n"));

    // arcs
    m.def("arc_count", [](std::int64_t n, int k) {
        return arcs::ArcDissection::dissect(n, k).size();
    }, py::arg("n"), py::arg("k"));
    m.def("classify", [](double theta, std::int64_t n, int k) {
        auto c = arcs::ArcDissection::dissect(n, k).classify(theta);
        return py::make_tuple(c.major, c.a, c.q);
    }, py::arg("theta"), py::arg("n"), py::arg("k"),
       "(is_major, a, q) for theta against the level-n dissection");
    m.def("major_measure", [](std::int64_t n, int k) {
        auto [major, minor] = arcs::ArcDissection::dissect(n, k).major_total_measure();
        return py::make_tuple(major.to_string(), major.to_double());
    }, py::arg("n"), py::arg("k"));

    // oscillatory
    m.def("v_n", [](double theta, double xi, double n, int k) {
        return osc::v_n(theta, xi, n, k);
    }, py::arg("theta"), py::arg("xi"), py::arg("n"), py::arg("k"));
    m.def("j_lambda", [](std::vector<double> eta, double lambda, int k, int d) {
        return osc::j_lambda(eta, lambda, params_of(k, d));
    }, py::arg("eta"), py::arg("lambda"), py::arg("k"), py::arg("d"));
    m.def("sigma_hat", [](std::vector<double> eta, double lambda, int k, int d) {
        return osc::sigma_hat(eta, lambda, params_of(k, d));
    }, py::arg("eta"), py::arg("lambda"), py::arg("k"), py::arg("d"));

    // multiplier
    m.def("a_hat", [](std::int64_t lambda, std::vector<double> xi, int k, int d) {
        return mult::a_hat(lambda, xi, params_of(k, d));
    }, py::arg("lambda"), py::arg("xi"), py::arg("k"), py::arg("d"));
    m.def("main_term", [](std::int64_t lambda, std::vector<double> xi, std::int64_t q_max,
                          int k, int d) {
        return mult::main_term(lambda, xi, q_max, params_of(k, d));
    }, py::arg("lambda"), py::arg("xi"), py::arg("q_max"), py::arg("k"), py::arg("d"));
    m.def("singular_series", [](std::int64_t lambda, std::int64_t q_max, int k, int d) {
        auto v = mult::singular_series(lambda, q_max, params_of(k, d));
        return py::make_tuple(v.real, v.imag);
    }, py::arg("lambda"), py::arg("q_max"), py::arg("k"), py::arg("d"));
}
