"""Smoke tests for the python bindings; exercises one call per surface."""

import cmath
import math
import sys

import circlelab as cl


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    # exponent table row
    assert cl.table1() == [(3, 10), (4, 16), (5, 24), (6, 35), (7, 47), (8, 62), (9, 79), (10, 97)]
    exact, approx_d0, l0 = cl.d0(5)
    assert exact == "70/3" and l0 == 3 and approx(approx_d0, 70.0 / 3.0)
    assert cl.delta0(3, 12)[0] == "1/3"
    assert cl.p0(3, 10)[0] == "20/11"
    assert cl.tau(3) == "1/4"

    # representation counts and solutions
    assert cl.representation_counts(3, 2, 2) == [1, 4, 4]
    sols = cl.solutions(3, 2, 2)
    assert sorted(tuple(s) for s in sols) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    # exponential and Gauss sums
    assert approx(cl.s_n(0.0, 0.0, 10, 3), 21.0)
    assert approx(cl.s_n(0.0, 0.5, 1, 3), -1.0)
    assert abs(cl.gauss_sum(3, 1, 0, 3)) < 1e-12
    lhs, rhs = cl.gauss_fourier_check(5, 2, 3, 3)
    assert approx(lhs, rhs, 1e-10)
    assert cl.vinogradov_count(1, 3, 9) == 9
    assert cl.vinogradov_count(2, 3, 2) == 6

    # arcs
    assert cl.arc_count(3, 3) == 5
    is_major, a, q = cl.classify(1.0 / 3.0, 3, 3)
    assert is_major and (a, q) == (1, 3)
    assert cl.major_measure(1, 3)[0] == "1/6"

    # oscillatory
    assert approx(cl.v_n(0.0, 0.0, 10.0, 3), 10.0, 1e-11)
    closed = (cmath.exp(2j * cmath.pi * 0.3 * 10) - 1) / (2j * cmath.pi * 0.3)
    assert abs(cl.v_n(0.0, 0.3, 10.0, 3) - closed) < 1e-10
    sigma0 = cl.sigma_hat([0.0] * 5, 100.0, 3, 5)
    oracle = math.gamma(1 + 1.0 / 3.0) ** 5 / math.gamma(5.0 / 3.0)
    assert abs(sigma0 - oracle) < 1e-6 * oracle

    # multiplier ties back to the counts
    counts = cl.representation_counts(3, 6, 55)
    ahat0 = cl.a_hat(55, [0.0] * 6, 3, 6)
    assert abs(ahat0 - 55.0 ** (1 - 2.0) * counts[55]) < 1e-9
    assert approx(cl.singular_series(17, 1, 3, 8)[0], 1.0)

    # refusal surfaces as an exception
    try:
        cl.p0(3, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("expected PreconditionError")

    print("python smoke: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
