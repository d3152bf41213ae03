"""Exact cyclotomic arithmetic, minimal inflation multiplier search, and
substitution tiling machinery for aperiodic tilings with dense tile
orientations."""

from .cyclotomic import (
    CycRat,
    RealCyc,
    SumOfRoots,
    canonicalize,
    has_rational_arg,
    is_root_of_unity,
    mu,
    real_cmp,
    real_sign,
    to_complex,
    zeta,
)

__version__ = "0.1.0"
