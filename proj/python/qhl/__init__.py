"""Exact experiments on volume distortion, fillings and twisted pairings."""

from ._qhl import (
    certificate_chains,
    distortion_profile,
    filling_volume,
    greedy_decompose,
    is_elliptic,
    laurent_snf,
    min_volume,
    pairing,
    simplex,
    splitting_test,
    validate_builtin,
    verify_tau,
)

__all__ = [
    "certificate_chains",
    "distortion_profile",
    "filling_volume",
    "greedy_decompose",
    "is_elliptic",
    "laurent_snf",
    "min_volume",
    "pairing",
    "simplex",
    "splitting_test",
    "validate_builtin",
    "verify_tau",
]
