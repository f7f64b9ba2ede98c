"""Python access to the hybrid teleportation simulator core."""

from ._dvcv import (  # noqa: F401
    Error,
    InvalidArgumentError,
    SingularFactorError,
    TailMassError,
    am_probability,
    amp_factor_dual,
    amp_factor_single,
    brute_force,
    demod_displacement,
    demod_swap,
    direct_success_probability,
    displacement_demod_probability,
    initially_am_dual,
    initially_am_single,
    matrix_element,
    maximize_direct_success,
    negativity,
    overall_success,
    pair_sum_probability,
    solve_gamma,
    swap_probability,
    unit_factor_alpha,
)

__version__ = "0.1.0"
