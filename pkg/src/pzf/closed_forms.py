"""Closed-form values for cycles and paths.

These are independent oracles for the exact engine.  Path formulas assume
the blue start vertex sits at position ceil(n/2) (1-based).  That vertex
minimizes ept, but not the ℓ-round probability for every ℓ: an endpoint
zero forces the whole path in n - 1 rounds, so the best single start
reaches probability 1 there.  The ``*_best`` variants account for this.
"""

from __future__ import annotations

import math
from fractions import Fraction

QUARTER = Fraction(1, 4)


def _check_n(n: int) -> None:
    if n <= 2:
        raise ValueError(f"closed forms need n > 2, got {n}")


def ept_cycle(n: int) -> Fraction:
    _check_n(n)
    return Fraction(n, 2) + (Fraction(1, 3) if n % 2 == 0 else Fraction(1, 2))


def ept_path(n: int) -> Fraction:
    _check_n(n)
    return Fraction(n, 2) + (Fraction(2, 3) if n % 2 == 0 else Fraction(1, 2))


def lround_cycle(n: int, rounds: int) -> Fraction:
    """Probability a cycle is all blue after ``rounds`` rounds from one vertex."""
    _check_n(n)
    if rounds < n // 2:
        return Fraction(0)
    if n % 2 == 0:
        return 1 - QUARTER ** (rounds - n // 2 + 1)
    return 1 - Fraction(3, 4) * QUARTER ** (rounds - (n - 1) // 2)


def lround_path(n: int, rounds: int) -> Fraction:
    """Probability a path is all blue after ``rounds`` rounds from its best vertex."""
    _check_n(n)
    if rounds < n // 2:
        return Fraction(0)
    if n % 2 == 0:
        return 1 - Fraction(1, 2) * QUARTER ** (rounds - n // 2)
    return 1 - Fraction(3, 4) * QUARTER ** (rounds - (n - 1) // 2)


def _invert(curve, n: int, alpha) -> int:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")
    alpha = Fraction(alpha)
    t = n // 2
    while curve(n, t) < alpha:
        t += 1
    return t


def confidence_cycle(n: int, alpha) -> int:
    """Least number of rounds with all-blue probability at least ``alpha``."""
    return _invert(lround_cycle, n, alpha)


def confidence_path(n: int, alpha) -> int:
    return _invert(lround_path, n, alpha)


def lround_path_best(n: int, rounds: int) -> Fraction:
    """Maximum over single start vertices of the path's ℓ-round probability."""
    if rounds >= n - 1:
        _check_n(n)
        return Fraction(1)
    return lround_path(n, rounds)


def confidence_path_best(n: int, alpha) -> int:
    """Minimum over single start vertices of the α-confidence time."""
    return min(confidence_path(n, alpha), n - 1)


def psd_throttle_path_cycle(n: int, family: str = "path") -> int:
    """PSD throttling number ceil(sqrt(2n) - 1/2) of P_n or C_n, in integers.

    The ceiling is the least t with (2t + 1)^2 >= 8n.
    """
    if family == "path":
        if n < 2:
            raise ValueError("path formula needs n >= 2")
    elif family == "cycle":
        if n < 4:
            raise ValueError("cycle formula needs n >= 4")
    else:
        raise ValueError(f"family must be 'path' or 'cycle', not {family!r}")
    t = max(0, (math.isqrt(8 * n) - 1) // 2)
    while (2 * t + 1) ** 2 < 8 * n:
        t += 1
    return t
