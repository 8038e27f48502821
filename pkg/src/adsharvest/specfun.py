"""Scalar special-function kernels used by the AdS4 mode functions.

All routines work in double precision with upward three-term recurrences.
The degrees met at desk scale stay within a few thousand, where forward
recurrence on [-1, 1] is stable.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

LOG_FACTORIAL_MAX = 4096


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


def _check_unit_interval(x: float) -> None:
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"argument {x!r} outside [-1, 1]")


def gegenbauer(degree: int, alpha: float, x: float) -> float:
    """Gegenbauer polynomial C_degree^(alpha)(x) by three-term recurrence."""
    _check_unit_interval(x)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if degree < 0:
        raise DomainError(f"degree must be nonnegative, got {degree!r}")
    if degree == 0:
        return 1.0
    c_prev, c = 1.0, 2.0 * alpha * x
    for n in range(2, degree + 1):
        c_prev, c = c, (2.0 * x * (n + alpha - 1) * c - (n + 2 * alpha - 2) * c_prev) / n
    return c


def gegenbauer_sequence(max_degree: int, alpha: float, x: float) -> np.ndarray:
    """All of C_0^(alpha)(x) ... C_max_degree^(alpha)(x) in one pass."""
    _check_unit_interval(x)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    out = np.empty(max_degree + 1)
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = 2.0 * alpha * x
    for n in range(2, max_degree + 1):
        out[n] = (2.0 * x * (n + alpha - 1) * out[n - 1] - (n + 2 * alpha - 2) * out[n - 2]) / n
    return out


def normalized_gegenbauer_table(max_degree: int, ls: np.ndarray, x: float) -> np.ndarray:
    """Table g[d, j] = C_d^(l_j+1)(x) / C_d^(l_j+1)(1).

    The ratio obeys a bounded recurrence (|g| <= 1 on [-1, 1]), so it can be
    combined with log-space prefactors for large l without overflow.
    """
    _check_unit_interval(x)
    alpha = np.asarray(ls, dtype=float) + 1.0
    two_alpha = 2.0 * alpha
    g = np.empty((max_degree + 1, alpha.size))
    g[0] = 1.0
    if max_degree >= 1:
        g[1] = x
    for n in range(2, max_degree + 1):
        g[n] = (2.0 * x * (n + alpha - 1) * g[n - 1] - (n - 1) * g[n - 2]) / (n + two_alpha - 1)
    return g


def legendre_p(l: int, x: float) -> float:
    """Legendre polynomial P_l(x) by Bonnet's recurrence."""
    _check_unit_interval(x)
    if l < 0:
        raise DomainError(f"l must be nonnegative, got {l!r}")
    if l == 0:
        return 1.0
    p_prev, p = 1.0, x
    for k in range(2, l + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    return p


def y_l0(l: int, cos_theta: float) -> float:
    """Axisymmetric spherical harmonic Y_l^0 as a function of cos(theta)."""
    return math.sqrt((2 * l + 1) / (4.0 * math.pi)) * legendre_p(l, cos_theta)


@lru_cache(maxsize=None)
def _log_factorial_table(n_max: int) -> np.ndarray:
    table = np.zeros(n_max + 1)
    table[1:] = np.cumsum(np.log(np.arange(1, n_max + 1, dtype=float)))
    table.setflags(write=False)
    return table


def log_factorial(n, n_max: int = LOG_FACTORIAL_MAX):
    """ln(n!) from a cached cumulative table.

    Accepts an int or an integer array. Arguments above ``n_max`` raise
    instead of silently losing precision.
    """
    arr = np.asarray(n)
    if arr.size and (arr.min() < 0):
        raise DomainError("log_factorial needs n >= 0")
    if arr.size and arr.max() > n_max:
        raise OverflowError(
            f"log_factorial argument {int(arr.max())} exceeds table size {n_max}; "
            "raise n_max explicitly"
        )
    out = _log_factorial_table(n_max)[arr]
    return float(out) if out.ndim == 0 else out
