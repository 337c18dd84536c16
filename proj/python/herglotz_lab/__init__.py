"""Herglotz functions, spectral measures, and Weyl m-functions."""

from _herglotz import (  # noqa: F401
    HerglotzError,
    LivsicInterval,
    Measure,
    VerificationFailure,
    __version__,
    herglotz_floor,
    naimark_dilate,
    periodic_donoghue_m,
    perturbed_mfunc,
    point_interaction_m,
    rotate_value,
    sharp_bounds,
    stieltjes_invert,
    weyl_m,
    weyl_to_donoghue,
)
