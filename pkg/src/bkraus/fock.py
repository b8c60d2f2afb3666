"""Dense linear algebra on truncated one- and two-mode Fock spaces.

States and operators are thin immutable wrappers around complex numpy arrays
that remember the truncation ``n_max`` and the number of modes. Two-mode
objects use row-major flat indexing with mode 1 as the most significant index,
``flat = n1 * (n_max + 1) + n2``, i.e. the ``np.kron`` convention.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields
from typing import Mapping

import numpy as np

from .errors import DimensionError, TruncationError

TOL_ENV_VAR = "BKRAUS_SEED_TOL"


@dataclass(frozen=True)
class Tolerances:
    norm_tol: float = 1e-10
    herm_tol: float = 1e-10
    trace_tol: float = 1e-10
    psd_tol: float = 1e-9
    tail_tol: float = 1e-12

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{f.name} must be finite and > 0, got {value!r}")

    @classmethod
    def parse(cls, text: str) -> "Tolerances":
        """Build tolerances from ``"1e-9"`` (all fields) or ``"psd_tol=1e-8,tail_tol=1e-13"``."""
        text = text.strip()
        if "=" not in text:
            value = float(text)
            return cls(**{f.name: value for f in fields(cls)})
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for item in text.split(","):
            if not item.strip():
                continue
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"unknown tolerance {key!r}; expected one of {sorted(known)}")
            kwargs[key] = float(value)
        return cls(**kwargs)

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "Tolerances":
        environ = os.environ if environ is None else environ
        text = environ.get(TOL_ENV_VAR, "").strip()
        return cls.parse(text) if text else cls()

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOL = Tolerances()


def dim_of(n_max: int, modes: int = 1) -> int:
    return (n_max + 1) ** modes


def _frozen(array, shape_check) -> np.ndarray:
    arr = np.array(array, dtype=np.complex128)
    shape_check(arr)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite amplitude")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FockVector:
    """Pure state (ket) on one or two truncated modes."""

    amps: np.ndarray
    n_max: int
    modes: int = 1

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise DimensionError(f"modes must be 1 or 2, got {self.modes}")
        if self.n_max < 0:
            raise TruncationError(f"n_max must be >= 0, got {self.n_max}")
        dim = dim_of(self.n_max, self.modes)

        def check(arr):
            if arr.shape != (dim,):
                raise DimensionError(f"expected amplitude vector of length {dim}, got {arr.shape}")

        object.__setattr__(self, "amps", _frozen(self.amps, check))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense operator on one or two truncated modes."""

    mat: np.ndarray
    n_max: int
    modes: int = 1

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise DimensionError(f"modes must be 1 or 2, got {self.modes}")
        if self.n_max < 0:
            raise TruncationError(f"n_max must be >= 0, got {self.n_max}")
        dim = dim_of(self.n_max, self.modes)

        def check(arr):
            if arr.shape != (dim, dim):
                raise DimensionError(f"expected ({dim}, {dim}) matrix, got {arr.shape}")

        object.__setattr__(self, "mat", _frozen(self.mat, check))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


class DensityOperator(Operator):
    """Operator intended to be Hermitian, positive and of unit trace.

    Construction does not enforce these properties because channel outputs
    carry rounding noise; use :func:`check_density` where they matter.
    """


def _same_space(a, b) -> None:
    if a.n_max != b.n_max or a.modes != b.modes:
        raise DimensionError(
            f"space mismatch: (n_max={a.n_max}, modes={a.modes}) vs (n_max={b.n_max}, modes={b.modes})"
        )


def number_state(n: int, n_max: int) -> FockVector:
    if n_max < 0:
        raise TruncationError(f"n_max must be >= 0, got {n_max}")
    if not 0 <= n <= n_max:
        raise TruncationError(f"number state |{n}> outside truncated range 0..{n_max}")
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[n] = 1.0
    return FockVector(amps, n_max)


_STIRLING = (1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _stirlerr(n: int) -> float:
    """``log(n!) - log(sqrt(2 pi n) (n/e)^n)`` for ``n >= 1``."""
    if n <= 15:
        return math.lgamma(n + 1) - (n + 0.5) * math.log(n) + n - _HALF_LOG_2PI
    nn = float(n) * n
    s0, s1, s2, s3, s4 = _STIRLING
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n


def _bd0(x: float, mean: float) -> float:
    """Deviance ``x log(x/mean) + mean - x`` without cancellation near ``x = mean``."""
    if abs(x - mean) < 0.1 * (x + mean):
        v = (x - mean) / (x + mean)
        s = (x - mean) * v
        ej = 2 * x * v
        v *= v
        j = 1
        while True:
            ej *= v
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * math.log(x / mean) + mean - x


def log_poisson_pmf(k: int, mean: float) -> float:
    """``log(exp(-mean) mean^k / k!)`` accurate to a few ulps even for large ``k`` and ``mean``."""
    if mean == 0:
        return 0.0 if k == 0 else -math.inf
    if k == 0:
        return -mean
    return -_stirlerr(k) - _bd0(k, mean) - _HALF_LOG_2PI - 0.5 * math.log(k)


def poisson_tail(mean: float, cutoff: int) -> float:
    """Return ``sum_{j > cutoff} exp(-mean) mean**j / j!`` by direct summation."""
    if mean < 0:
        raise ValueError("mean must be >= 0")
    if mean == 0:
        return 0.0 if cutoff >= 0 else 1.0
    total = 0.0
    j = max(cutoff + 1, 0)
    while True:
        term = math.exp(log_poisson_pmf(j, mean))
        total += term
        if j > mean and (term == 0.0 or term < 1e-18 * total):
            return total
        j += 1


def default_n_max(alpha_sq: float) -> int:
    """Truncation that keeps the Poisson tail of ``|alpha|^2`` below 1e-12 for ``|alpha| <= 4``."""
    a = math.sqrt(alpha_sq)
    return math.ceil(alpha_sq + 8 * a + 10)


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Untruncated-normalization amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n <= n_max``."""
    alpha = complex(alpha)
    amps = np.empty(n_max + 1, dtype=np.complex128)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, n_max + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps


def coherent_state(alpha: complex, n_max: int | None = None, tol: Tolerances | None = None) -> FockVector:
    """Coherent state ``|alpha>`` truncated at ``n_max`` and renormalized.

    Raises :class:`TruncationError` when the discarded Poisson mass exceeds
    ``tol.tail_tol``.
    """
    tol = tol or DEFAULT_TOL
    alpha_sq = abs(complex(alpha)) ** 2
    if n_max is None:
        n_max = default_n_max(alpha_sq)
    if n_max < 0:
        raise TruncationError(f"n_max must be >= 0, got {n_max}")
    tail = poisson_tail(alpha_sq, n_max)
    if tail > tol.tail_tol:
        raise TruncationError(
            f"coherent state with |alpha|^2={alpha_sq:g} loses mass {tail:.3e} > tail_tol={tol.tail_tol:g} "
            f"at n_max={n_max}"
        )
    amps = coherent_amplitudes(alpha, n_max)
    return FockVector(amps / np.linalg.norm(amps), n_max)


def normalize(psi: FockVector) -> FockVector:
    norm = psi.norm()
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return FockVector(psi.amps / norm, psi.n_max, psi.modes)


def inner(a: FockVector, b: FockVector) -> complex:
    """``<a|b>``."""
    _same_space(a, b)
    return complex(np.vdot(a.amps, b.amps))


def outer(psi: FockVector, phi: FockVector | None = None):
    """``|psi><phi|``; with ``phi`` omitted returns the density operator of ``psi``."""
    if phi is None:
        return DensityOperator(np.outer(psi.amps, psi.amps.conj()), psi.n_max, psi.modes)
    _same_space(psi, phi)
    return Operator(np.outer(psi.amps, phi.amps.conj()), psi.n_max, psi.modes)


def identity(n_max: int, modes: int = 1) -> Operator:
    return Operator(np.eye(dim_of(n_max, modes)), n_max, modes)


def adjoint(op: Operator) -> Operator:
    return type(op)(op.mat.conj().T, op.n_max, op.modes)


def matmul(a: Operator, b: Operator) -> Operator:
    _same_space(a, b)
    return Operator(a.mat @ b.mat, a.n_max, a.modes)


def apply_op(op: Operator, psi: FockVector) -> FockVector:
    _same_space(op, psi)
    return FockVector(op.mat @ psi.amps, psi.n_max, psi.modes)


def trace(op: Operator) -> complex:
    return complex(np.trace(op.mat))


def tensor(a, b):
    """Kronecker product of two single-mode vectors or two single-mode operators."""
    if a.modes != 1 or b.modes != 1:
        raise DimensionError("tensor expects two single-mode factors")
    if a.n_max != b.n_max:
        raise DimensionError(f"tensor factors must share n_max ({a.n_max} != {b.n_max})")
    if isinstance(a, FockVector) and isinstance(b, FockVector):
        return FockVector(np.kron(a.amps, b.amps), a.n_max, 2)
    if isinstance(a, Operator) and isinstance(b, Operator):
        cls = DensityOperator if isinstance(a, DensityOperator) and isinstance(b, DensityOperator) else Operator
        return cls(np.kron(a.mat, b.mat), a.n_max, 2)
    raise TypeError("tensor factors must both be FockVector or both be Operator")


def fidelity_pure(psi: FockVector, rho: Operator, tol: Tolerances | None = None) -> float:
    """``Re <psi|rho|psi>`` for Hermitian ``rho``."""
    tol = tol or DEFAULT_TOL
    _same_space(psi, rho)
    if not is_hermitian(rho, tol.herm_tol):
        raise ValueError("fidelity_pure requires a Hermitian operator")
    return float(np.real(np.vdot(psi.amps, rho.mat @ psi.amps)))


def is_hermitian(op: Operator, herm_tol: float = DEFAULT_TOL.herm_tol) -> bool:
    return bool(np.max(np.abs(op.mat - op.mat.conj().T), initial=0.0) <= herm_tol)


def min_eigenvalue(op: Operator) -> float:
    herm = 0.5 * (op.mat + op.mat.conj().T)
    return float(np.linalg.eigvalsh(herm)[0])


def is_psd(op: Operator, psd_tol: float = DEFAULT_TOL.psd_tol) -> bool:
    return min_eigenvalue(op) >= -psd_tol


def check_density(rho: Operator, tol: Tolerances | None = None) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, PSD and of unit trace."""
    tol = tol or DEFAULT_TOL
    if not is_hermitian(rho, tol.herm_tol):
        raise ValueError("density operator is not Hermitian")
    tr = trace(rho)
    if abs(tr - 1) > tol.trace_tol:
        raise ValueError(f"density operator trace {tr:.12g} differs from 1")
    if not is_psd(rho, tol.psd_tol):
        raise ValueError("density operator has a negative eigenvalue")


def swap_modes(obj):
    """Exchange the two modes of a two-mode vector or operator."""
    if obj.modes != 2:
        raise DimensionError("swap_modes expects a two-mode object")
    d = obj.n_max + 1
    if isinstance(obj, FockVector):
        return FockVector(obj.amps.reshape(d, d).T.reshape(-1), obj.n_max, 2)
    swapped = obj.mat.reshape(d, d, d, d).transpose(1, 0, 3, 2).reshape(d * d, d * d)
    return type(obj)(swapped, obj.n_max, 2)


def partial_trace(rho: Operator, keep: int) -> DensityOperator:
    """Reduced single-mode state of mode ``keep`` (0 or 1) of a two-mode operator."""
    if rho.modes != 2:
        raise DimensionError("partial_trace expects a two-mode operator")
    d = rho.n_max + 1
    t = rho.mat.reshape(d, d, d, d)
    if keep == 0:
        red = np.einsum("ajbj->ab", t)
    elif keep == 1:
        red = np.einsum("iaib->ab", t)
    else:
        raise ValueError("keep must be 0 or 1")
    return DensityOperator(red, rho.n_max, 1)
