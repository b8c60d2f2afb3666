"""Logical qubit states: Fock encoding ``{|0>, |1>}`` and even/odd cat encoding.

Cat basis states are ``|0>_L = N_+ (|a> + |-a>)`` and ``|1>_L = N_- (|a> - |-a>)``
with ``N_pm = (2 +- 2 exp(-2|a|^2))^(-1/2)``. They are built directly from the
coherent amplitudes of the matching parity so the wrong-parity entries are
exact zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DegenerateEncodingError
from .fock import (
    FockVector,
    Tolerances,
    coherent_amplitudes,
    coherent_state,
    default_n_max,
    number_state,
    tensor,
)

Parity = Literal["even", "odd"]


def parity_of(bit: int | str) -> Parity:
    """Map a logical bit (0/1) or parity name to a parity name."""
    if bit in ("even", 0):
        return "even"
    if bit in ("odd", 1):
        return "odd"
    raise ValueError(f"expected 0, 1, 'even' or 'odd', got {bit!r}")


@dataclass(frozen=True)
class Encoding:
    kind: Literal["fock", "cat"]
    alpha: complex = 0.0
    n_max: int | None = None

    def __post_init__(self):
        if self.kind not in ("fock", "cat"):
            raise ValueError(f"unknown encoding kind {self.kind!r}")
        if self.kind == "cat" and self.alpha == 0:
            raise DegenerateEncodingError("cat encoding needs |alpha| > 0 for the logical one state")

    @property
    def resolved_n_max(self) -> int:
        if self.n_max is not None:
            return self.n_max
        return 1 if self.kind == "fock" else default_n_max(abs(self.alpha) ** 2)

    def logical(self, bit: int) -> FockVector:
        if self.kind == "fock":
            if bit not in (0, 1):
                raise ValueError("logical bit must be 0 or 1")
            return number_state(bit, self.resolved_n_max)
        return cat_state(self.alpha, parity_of(bit), self.resolved_n_max)


@dataclass(frozen=True)
class CatNorms:
    n_plus: float
    n_minus: float
    n_plus_decayed: float
    n_minus_decayed: float


def cat_norm(alpha_sq: float, parity: Parity) -> float:
    if alpha_sq < 0:
        raise ValueError("alpha_sq must be >= 0")
    parity = parity_of(parity)
    if parity == "even":
        return (2 + 2 * math.exp(-2 * alpha_sq)) ** -0.5
    if alpha_sq == 0:
        raise DegenerateEncodingError("odd cat normalization diverges at alpha = 0")
    return (-2 * math.expm1(-2 * alpha_sq)) ** -0.5


def cat_norms(alpha_sq: float, eta: float = 1.0) -> CatNorms:
    return CatNorms(
        cat_norm(alpha_sq, "even"),
        cat_norm(alpha_sq, "odd"),
        cat_norm(eta * alpha_sq, "even"),
        cat_norm(eta * alpha_sq, "odd"),
    )


def cat_state(alpha: complex, parity: Parity, n_max: int | None = None, tol: Tolerances | None = None) -> FockVector:
    parity = parity_of(parity)
    alpha = complex(alpha)
    if parity == "odd" and alpha == 0:
        raise DegenerateEncodingError("odd cat state does not exist at alpha = 0")
    # validates the truncation tail
    coherent_state(alpha, n_max, tol)
    if n_max is None:
        n_max = default_n_max(abs(alpha) ** 2)
    amps = coherent_amplitudes(alpha, n_max)
    amps[(1 if parity == "even" else 0) :: 2] = 0.0
    return FockVector(amps / np.linalg.norm(amps), n_max)


def decayed_cat(
    alpha: complex, parity: Parity, eta: float, n_max: int | None = None, tol: Tolerances | None = None
) -> FockVector:
    """Cat state after the no-loss branch: amplitude shrunk to ``sqrt(eta) alpha``."""
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if n_max is None:
        n_max = default_n_max(abs(complex(alpha)) ** 2)
    return cat_state(math.sqrt(eta) * complex(alpha), parity, n_max, tol)


def bell_state(encoding: Encoding) -> FockVector:
    """``(|0_L 1_L> + |1_L 0_L>) / sqrt(2)`` on two modes, renormalized numerically."""
    zero = encoding.logical(0)
    one = encoding.logical(1)
    amps = tensor(zero, one).amps + tensor(one, zero).amps
    return FockVector(amps / np.linalg.norm(amps), zero.n_max, 2)


def fock_bell_state(n_max: int = 1) -> FockVector:
    return bell_state(Encoding("fock", n_max=n_max))


def cat_bell_state(alpha: complex, n_max: int | None = None) -> FockVector:
    return bell_state(Encoding("cat", alpha=alpha, n_max=n_max))

