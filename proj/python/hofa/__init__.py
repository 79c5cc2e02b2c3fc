"""Higher-order Fourier analysis on cyclic groups."""

from ._core import (
    BudgetError,
    DomainError,
    Error,
    Function,
    InternalError,
    approx_epsilon,
    bracket,
    bracket_linear,
    bracket_phase,
    bracket_quadratic,
    character_field,
    correlate,
    dft,
    exp_phase,
    gowers,
    gowers_report,
    mix,
    nilpolynomial_verify,
    nilsequence,
    nilsequence_check,
    noise,
    pipeline,
    poly_phase,
    poly_rational,
    poly_phase_search,
    u2_inverse,
    zr_transform,
)

__all__ = [name for name in dir() if not name.startswith("_")]
