"""Circle-method experiments for k-spherical counting problems."""

from ._circlelab import (  # noqa: F401
    __version__,
    PreconditionError,
    a_hat,
    arc_count,
    classify,
    d0,
    d0_star,
    delta0,
    gauss_fourier_check,
    gauss_sum,
    j_lambda,
    main_term,
    major_measure,
    p0,
    representation_counts,
    s_n,
    sigma_hat,
    singular_series,
    solutions,
    table1,
    tau,
    v_n,
    vinogradov_count,
    weyl_sum,
)
