"""Closed-form fidelities for Fock and cat qubits under amplitude and phase damping.

Notation: ``x = |alpha|^2`` is the cat intensity, ``eta = exp(-gamma t)`` the
amplitude survival probability, ``p = 1 - eta``, and ``tau`` the rescaled
phase-damping time. Hyperbolic functions are evaluated through their
logarithms so that large intensities do not overflow and small ones do not
cancel.

Amplitude damping
    f_amp_cat     no-loss fidelity of a single logical cat state
    F1_amp        Bell-cat pair, environment reports <= 1 lost quantum per mode
    F2_amp        Bell-cat pair, unconditioned damping
    F1_fock       Fock Bell pair (equal to eta)

Phase damping
    f_phase_cat          single logical cat, double sum over Fock pairs
    f_phase_cat_bessel   the same reduced to one sum over Bessel I and J
    F_phase_cat          Bell-cat pair, single-sum Bessel form
    F_phase_fock         Fock Bell pair, ``(1 + exp(-tau^2)) / 2``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConvergenceError
from .special import bessel_i, bessel_j

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SeriesControl:
    rel_term_tol: float = 1e-16
    max_terms: int = 4096

    def __post_init__(self):
        if not 0 < self.rel_term_tol <= 1e-6:
            raise ValueError(f"rel_term_tol must lie in (0, 1e-6], got {self.rel_term_tol}")
        if self.max_terms < 64:
            raise ValueError(f"max_terms must be >= 64, got {self.max_terms}")


DEFAULT_SERIES = SeriesControl()


def log_cosh(z: float) -> float:
    z = abs(z)
    return z + math.log1p(math.exp(-2 * z)) - LN2


def log_sinh(z: float) -> float:
    """``log(sinh z)`` for ``z > 0``."""
    if z <= 0:
        raise ValueError(f"log_sinh needs z > 0, got {z}")
    return z + math.log(-math.expm1(-2 * z)) - LN2


def coth(z: float) -> float:
    if z <= 0:
        raise ValueError(f"coth needs z > 0, got {z}")
    return 1.0 / math.tanh(z)


def _check_eta(eta: float) -> None:
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")


def _check_alpha_sq(alpha_sq: float) -> None:
    if not alpha_sq > 0:
        raise ValueError(f"alpha_sq must be > 0, got {alpha_sq}")


# ---------------------------------------------------------------- amplitude


def f_amp_cat(i: int, alpha_sq: float, eta: float) -> float:
    """Fidelity of logical cat ``|i>_L`` with its no-loss evolved state."""
    _check_eta(eta)
    if i not in (0, 1):
        raise ValueError("i must be 0 or 1")
    if alpha_sq < 0:
        raise ValueError("alpha_sq must be >= 0")
    if i == 0:
        if alpha_sq == 0:
            return 1.0
        lf = log_cosh
    else:
        _check_alpha_sq(alpha_sq)
        lf = log_sinh
    if eta == 1.0:
        return 1.0
    x = alpha_sq
    return math.exp(2 * lf(math.sqrt(eta) * x) - lf(x) - lf(eta * x))


def F1_amp(alpha_sq: float, eta: float) -> float:
    """Bell-cat fidelity when each mode loses at most one quantum."""
    _check_alpha_sq(alpha_sq)
    _check_eta(eta)
    if eta == 1.0:
        return 1.0
    x, p = alpha_sq, 1.0 - eta
    c = 1.0 + (x * p) ** 2
    ratio = math.exp(2 * log_sinh(2 * math.sqrt(eta) * x) - log_sinh(2 * x) - log_cosh(2 * eta * x))
    return c * ratio / (2 * x * p + c * math.tanh(2 * eta * x))


def F2_amp(alpha_sq: float, eta: float) -> float:
    """Bell-cat fidelity under full (unconditioned) amplitude damping."""
    _check_alpha_sq(alpha_sq)
    _check_eta(eta)
    if eta == 1.0:
        return 1.0
    x, p = alpha_sq, 1.0 - eta
    return math.exp(log_cosh(2 * x * p) + 2 * log_sinh(2 * math.sqrt(eta) * x) - 2 * log_sinh(2 * x))


def F1_fock(eta: float) -> float:
    _check_eta(eta)
    return float(eta)


def weak_field_coefficients(eta: float) -> tuple[float, float]:
    """Coefficients of ``|alpha|^4`` in ``F1 - eta`` and ``F2 - eta`` as ``alpha -> 0``."""
    c1 = eta * (1 - 5 * eta + 3 * eta**2 + eta**3) / 3
    c2 = 2 * eta * (1 - 4 * eta + 3 * eta**2) / 3
    return c1, c2


def long_time_bracket(alpha_sq: float) -> float:
    """``1 + x^2 - 2 x coth(2x)``; its sign decides the long-time order of F1 and F2."""
    x = alpha_sq
    return 1 + x * x - 2 * x * coth(2 * x)


def amp_diff_expansions(
    alpha_sq: float, eta_or_gt: float, regime: Literal["low_intensity", "short_time", "long_time"]
) -> float:
    """Leading-order value of ``F1 - F2``.

    ``eta_or_gt`` is ``eta`` for the low-intensity and long-time regimes and
    the scaled time ``gamma t`` for the short-time regime.
    """
    _check_alpha_sq(alpha_sq)
    x = alpha_sq
    if regime == "low_intensity":
        eta = eta_or_gt
        return -eta * (1 - eta) ** 3 * x * x / 3
    if regime == "short_time":
        gt = eta_or_gt
        return -2.0 / 3.0 * x**3 * coth(2 * x) * gt**3
    if regime == "long_time":
        eta = eta_or_gt
        return 2 * x * math.exp(-log_sinh(2 * x)) * long_time_bracket(x) * eta
    raise ValueError(f"unknown regime {regime!r}")


def threshold_intensity(lo: float = 0.5, hi: float = 2.0, tol: float = 1e-10) -> float:
    """Root of :func:`long_time_bracket` by bisection."""
    f_lo, f_hi = long_time_bracket(lo), long_time_bracket(hi)
    if f_lo * f_hi > 0:
        raise ValueError("bracket does not straddle a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = long_time_bracket(mid)
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -------------------------------------------------------------------- phase


def parity_weights(alpha_sq: float, k: int, ctrl: SeriesControl = DEFAULT_SERIES) -> np.ndarray:
    """Photon-number distribution of the logical cat ``|k>_L`` on Fock levels ``2n + k``.

    ``w[n] = x^(2n+k) / ((2n+k)! * (cosh x if k == 0 else sinh x))``.
    """
    if k not in (0, 1):
        raise ValueError("k must be 0 or 1")
    x = alpha_sq
    if x == 0:
        if k == 1:
            raise ValueError("odd cat is undefined at alpha_sq = 0")
        return np.array([1.0])
    if x < 0:
        raise ValueError("alpha_sq must be >= 0")
    log_norm = log_cosh(x) if k == 0 else log_sinh(x)
    log_x = math.log(x)
    weights = []
    total = 0.0
    for n in range(ctrl.max_terms):
        level = 2 * n + k
        w = math.exp(level * log_x - math.lgamma(level + 1) - log_norm)
        weights.append(w)
        total += w
        if level > x and w <= ctrl.rel_term_tol * total:
            return np.array(weights)
    raise ConvergenceError(f"parity weights did not converge in {ctrl.max_terms} terms (alpha_sq={x})")


def _gauss_kernel(n: int, m: int, fn) -> np.ndarray:
    d = np.subtract.outer(np.arange(n), np.arange(m))
    return np.exp(fn(d))


def f_phase_cat(k: int, alpha_sq: float, tau: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Dephased logical cat fidelity as the double sum over even (k=0) or odd (k=1) levels."""
    if not tau >= 0:
        raise ValueError("tau must be >= 0")
    w = parity_weights(alpha_sq, k, ctrl)
    kernel = _gauss_kernel(len(w), len(w), lambda d: -2.0 * d**2 * tau**2)
    return float(w @ kernel @ w)


def _bessel_sum(z: float, terms, ctrl: SeriesControl) -> float:
    """Sum ``terms(d)`` for d = 1, 2, ... until a term is negligible."""
    total = 0.0
    for d in range(1, ctrl.max_terms):
        t = terms(d)
        total += t
        if abs(t) <= ctrl.rel_term_tol * abs(total) or t == 0.0:
            return total
    raise ConvergenceError(f"Bessel sum did not converge in {ctrl.max_terms} terms (z={z})")


def f_phase_cat_bessel(k: int, alpha_sq: float, tau: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Dephased logical cat fidelity as a single sum over ``I_2d`` and ``J_2d`` at ``2|alpha|^2``."""
    if k not in (0, 1):
        raise ValueError("k must be 0 or 1")
    if not tau >= 0:
        raise ValueError("tau must be >= 0")
    if k == 1 or alpha_sq != 0:
        _check_alpha_sq(alpha_sq)
    else:
        return 1.0
    x, z, s = alpha_sq, 2 * alpha_sq, (-1) ** k
    tol = ctrl.rel_term_tol

    def term(d):
        return 2 * math.exp(-2 * d * d * tau * tau) * (bessel_i(2 * d, z, tol) + s * bessel_j(2 * d, z, tol))

    head = bessel_i(0, z, tol) + s * bessel_j(0, z, tol)
    total = head + _bessel_sum(z, term, ctrl)
    log_norm = 2 * (log_cosh(x) if k == 0 else log_sinh(x))
    return total * math.exp(-LN2 - log_norm)


def f_phase_high_intensity(alpha_sq: float, tau: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Common value of ``f_0`` and ``f_1`` when ``|alpha|^2 >> 1`` (J terms dropped)."""
    _check_alpha_sq(alpha_sq)
    z, tol = 2 * alpha_sq, ctrl.rel_term_tol

    def term(d):
        return 2 * math.exp(-2 * d * d * tau * tau) * bessel_i(2 * d, z, tol)

    return 2 * math.exp(-z) * (bessel_i(0, z, tol) + _bessel_sum(z, term, ctrl))


def f_phase_long_time(alpha_sq: float, tau: float, compact: bool = False) -> float:
    """High-intensity, long-time approximation of ``f_0 ~ f_1``.

    ``compact=False`` keeps the Bessel form ``2 e^{-2x} [I_0(2x) + 2 e^{-2 tau^2} I_1(2x)]``;
    ``compact=True`` replaces the Bessel functions by their large-argument
    limit, giving ``(1 + 2 e^{-2 tau^2}) / (sqrt(pi) |alpha|)``.
    """
    _check_alpha_sq(alpha_sq)
    decay = math.exp(-2 * tau * tau)
    if compact:
        return (1 + 2 * decay) / (math.sqrt(math.pi) * math.sqrt(alpha_sq))
    z = 2 * alpha_sq
    return 2 * math.exp(-z) * (bessel_i(0, z) + 2 * decay * bessel_i(1, z))


def _odd_coherence_sum(alpha_sq: float, tau: float, ctrl: SeriesControl) -> float:
    """``sum_{d>=0} exp(-2 d (d+1) tau^2) I_{2d+1}(2x) / sinh(2x)``."""
    z, tol = 2 * alpha_sq, ctrl.rel_term_tol

    def term(d):
        return math.exp(-2 * d * (d + 1) * tau * tau) * bessel_i(2 * d + 1, z, tol)

    total = bessel_i(1, z, tol) + _bessel_sum(z, term, ctrl)
    return total * math.exp(-log_sinh(z))


def F_phase_cat(alpha_sq: float, tau: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Bell-cat fidelity under equal phase damping of both modes (single-sum form)."""
    _check_alpha_sq(alpha_sq)
    if not tau >= 0:
        raise ValueError("tau must be >= 0")
    f0 = f_phase_cat_bessel(0, alpha_sq, tau, ctrl)
    f1 = f_phase_cat_bessel(1, alpha_sq, tau, ctrl)
    g = _odd_coherence_sum(alpha_sq, tau, ctrl)
    return 0.5 * f0 * f1 + 2 * math.exp(-tau * tau) * g * g


def F_phase_cat_double(alpha_sq: float, tau: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Bell-cat fidelity under phase damping as explicit double sums over Fock pairs."""
    _check_alpha_sq(alpha_sq)
    if not tau >= 0:
        raise ValueError("tau must be >= 0")
    even = parity_weights(alpha_sq, 0, ctrl)
    odd = parity_weights(alpha_sq, 1, ctrl)
    f0 = float(even @ _gauss_kernel(len(even), len(even), lambda d: -2.0 * d**2 * tau**2) @ even)
    f1 = float(odd @ _gauss_kernel(len(odd), len(odd), lambda d: -2.0 * d**2 * tau**2) @ odd)
    # rows: odd level 2n+1, columns: even level 2m
    cross = float(odd @ _gauss_kernel(len(odd), len(even), lambda d: -2.0 * d * (d + 1) * tau**2) @ even)
    return 0.5 * f0 * f1 + 0.5 * math.exp(-tau * tau) * cross * cross


def F_phase_cat_reduced(alpha_sq: float, tau: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Long-time or low-intensity approximation: only the ``I_1`` coherence term survives."""
    _check_alpha_sq(alpha_sq)
    z = 2 * alpha_sq
    f0 = f_phase_cat_bessel(0, alpha_sq, tau, ctrl)
    f1 = f_phase_cat_bessel(1, alpha_sq, tau, ctrl)
    g = bessel_i(1, z, ctrl.rel_term_tol) * math.exp(-log_sinh(z))
    return 0.5 * f0 * f1 + 2 * math.exp(-tau * tau) * g * g


def F_phase_cat_high_long(alpha_sq: float, tau: float) -> float:
    """High-intensity, long-time approximation ``(1 + 4 e^{-tau^2}) / (2 pi |alpha|^2)``."""
    _check_alpha_sq(alpha_sq)
    return (1 + 4 * math.exp(-tau * tau)) / (2 * math.pi * alpha_sq)


def F_phase_fock(tau: float) -> float:
    if not tau >= 0:
        raise ValueError("tau must be >= 0")
    return 0.5 * (1 + math.exp(-tau * tau))
