"""Modified Bessel functions of the first kind, integer orders 0..3.

Evaluated by the ascending power series

    I_r(x) = sum_j (x/2)^(2j+r) / (j! (j+r)!)

with a term-ratio stopping rule.  Every distribution that needs I_r
multiplies it by exp(-lam*t), so the scaled product exp(-x)*I_r(x) is the
primitive; above the series switch point it is computed from the large-x
asymptotic expansion, which avoids overflow of exp(x).
"""

from __future__ import annotations

import math

SUPPORTED_ORDERS = (0, 1, 2, 3)
_SERIES_CUTOFF = 30.0


def _check_args(r: int, x: float) -> None:
    if r not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported Bessel order {r}; supported: {SUPPORTED_ORDERS}")
    if x < 0:
        raise ValueError(f"argument must be >= 0, got {x}")


def _series(r: int, x: float) -> float:
    if x == 0.0:
        return 1.0 if r == 0 else 0.0
    half = x / 2.0
    term = half**r / math.factorial(r)
    total = term
    j = 0
    while True:
        j += 1
        term *= half * half / (j * (j + r))
        total += term
        if term < 1e-16 * total:
            return total


def _asymptotic_scaled(r: int, x: float) -> float:
    # exp(-x) I_r(x) ~ (2 pi x)^(-1/2) * sum_k (-1)^k a_k(r) / x^k
    mu = 4 * r * r
    term = 1.0
    total = 1.0
    for k in range(1, 30):
        term *= -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(term) < 1e-17:
            break
        total += term
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_i(r: int, x: float) -> float:
    """I_r(x) for r in {0, 1, 2, 3} and x >= 0."""
    _check_args(r, x)
    if x <= _SERIES_CUTOFF:
        return _series(r, x)
    return _asymptotic_scaled(r, x) * math.exp(x)


def bessel_i_scaled(r: int, x: float) -> float:
    """exp(-x) * I_r(x); safe for large x."""
    _check_args(r, x)
    if x <= _SERIES_CUTOFF:
        return _series(r, x) * math.exp(-x)
    return _asymptotic_scaled(r, x)
