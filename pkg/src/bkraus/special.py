"""Integer-order Bessel functions by ascending power series.

    I_d(x) = sum_j (x/2)^(2j+d) / (j! (j+d)!)
    J_d(x) = sum_j (-1)^j (x/2)^(2j+d) / (j! (j+d)!)

Terms are generated in log space so large orders do not overflow. The J series
alternates and cancels badly once ``x`` exceeds a few units, so for ``x >= 1``
``J_d`` comes from Miller's downward recurrence
``J_{k-1} = (2k/x) J_k - J_{k+1}``, normalized with ``J_0 + 2 sum J_2k = 1``.
"""

from __future__ import annotations

import math

from .errors import ConvergenceError

MAX_ARG = 700.0
_REL_TOL = 1e-16
_MAX_TERMS = 4096
_LN2 = math.log(2.0)
_RESCALE = 1e250


def _ascending(d: int, x: float, alternating: bool, rel_term_tol: float, max_terms: int) -> float:
    if d < 0:
        raise ValueError(f"order must be >= 0, got {d}")
    if x < 0:
        raise ValueError(f"argument must be >= 0, got {x}")
    if x > MAX_ARG:
        raise OverflowError(f"Bessel argument {x} exceeds {MAX_ARG}")
    if x == 0:
        return 1.0 if d == 0 else 0.0
    log_half = math.log(x) - _LN2
    total = 0.0
    for j in range(max_terms):
        term = math.exp((2 * j + d) * log_half - math.lgamma(j + 1) - math.lgamma(j + d + 1))
        if alternating and j % 2:
            term = -term
        total += term
        # past the largest term the magnitudes decrease monotonically
        if j + 1 > x / 2 and abs(term) <= rel_term_tol * abs(total):
            return total
        if term == 0.0 and j > x:
            return total
    raise ConvergenceError(f"Bessel series did not converge in {max_terms} terms (d={d}, x={x})")


def bessel_i(d: int, x: float, rel_term_tol: float = _REL_TOL, max_terms: int = _MAX_TERMS) -> float:
    """Modified Bessel function of the first kind, ``I_d(x)``."""
    return _ascending(d, x, False, rel_term_tol, max_terms)


def bessel_j(d: int, x: float, rel_term_tol: float = _REL_TOL, max_terms: int = _MAX_TERMS) -> float:
    """Bessel function of the first kind, ``J_d(x)``."""
    if x < 1.0 or d < 0:
        return _ascending(d, x, True, rel_term_tol, max_terms)
    if x > MAX_ARG:
        raise OverflowError(f"Bessel argument {x} exceeds {MAX_ARG}")
    return _miller_j(d, x)


def _miller_j(d: int, x: float) -> float:
    # start well above both the order and the turning point x
    start = max(d, int(x)) + 20 + int(math.sqrt(40 * max(d, x)))
    start += start % 2
    j_next, j_cur = 0.0, 1e-300
    norm = 0.0
    value = 0.0
    for k in range(start, 0, -1):
        j_prev = 2 * k / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the unnormalized J_{k-1}
        if k - 1 == d:
            value = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2 * j_cur
        if abs(j_cur) > _RESCALE:
            j_cur /= _RESCALE
            j_next /= _RESCALE
            norm /= _RESCALE
            value /= _RESCALE
    norm += j_cur
    return value / norm
