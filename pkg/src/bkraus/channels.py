"""Amplitude- and phase-damping Kraus families of a single bosonic mode.

Amplitude damping with survival probability ``eta = exp(-gamma t)`` has

    A_k = sum_{n >= k} sqrt(C(n, k)) eta^((n-k)/2) (1-eta)^(k/2) |n-k><n|

and phase damping at rescaled time ``tau`` has diagonal operators

    P_k = sum_n exp(-n^2 tau^2 / 2) sqrt((n^2 tau^2)^k / k!) |n><n|.

The free rotation ``exp(i omega t)`` is dropped (interaction picture), so a
coherent amplitude simply shrinks, ``alpha -> sqrt(eta) alpha``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, UndefinedConditionalStateError
from .fock import DEFAULT_TOL, DensityOperator, Operator, Tolerances, dim_of, log_poisson_pmf

Kind = Literal["amplitude", "phase", "phase-regrouped"]


@dataclass(frozen=True)
class ChannelParams:
    eta: float = 1.0
    tau: float = 0.0
    n_max: int = 1
    k_max: int = 0

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if not self.tau >= 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.n_max < 0 or self.k_max < 0:
            raise ValueError("n_max and k_max must be >= 0")


@dataclass(frozen=True, eq=False)
class KrausFamily:
    ops: tuple[Operator, ...]
    kind: Kind
    params: ChannelParams
    completeness_deficit: float

    def __post_init__(self):
        if not self.ops:
            raise ValueError("a Kraus family needs at least one operator")
        dims = {op.dim for op in self.ops}
        if len(dims) != 1:
            raise DimensionError(f"Kraus operators disagree on dimension: {sorted(dims)}")

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    @property
    def n_max(self) -> int:
        return self.ops[0].n_max

    @property
    def stacked(self) -> np.ndarray:
        """Operators as one ``(len, dim, dim)`` array."""
        return np.stack([op.mat for op in self.ops])


def completeness_deficit(ops: Sequence[Operator]) -> float:
    """Spectral-norm distance of ``sum_k K_k^dag K_k`` from the identity."""
    mats = np.stack([op.mat for op in ops])
    total = np.einsum("kji,kjl->il", mats.conj(), mats)
    return float(np.linalg.norm(total - np.eye(total.shape[0]), ord=2))


def _check_eta(eta: float) -> None:
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")


def amp_kraus(k: int, eta: float, n_max: int) -> Operator:
    """Kraus operator for losing exactly ``k`` quanta."""
    _check_eta(eta)
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    mat = np.zeros((n_max + 1, n_max + 1))
    if k > n_max:
        warnings.warn(f"amp_kraus: k={k} exceeds n_max={n_max}; returning the zero operator", stacklevel=2)
        return Operator(mat, n_max)
    loss = (1 - eta) ** (k / 2)
    for n in range(k, n_max + 1):
        mat[n - k, n] = math.sqrt(math.comb(n, k)) * eta ** ((n - k) / 2) * loss
    return Operator(mat, n_max)


def amp_family(eta: float, n_max: int) -> KrausFamily:
    ops = tuple(amp_kraus(k, eta, n_max) for k in range(n_max + 1))
    params = ChannelParams(eta=eta, n_max=n_max, k_max=n_max)
    return KrausFamily(ops, "amplitude", params, completeness_deficit(ops))


def amp_family_one_photon(eta: float, n_max: int) -> KrausFamily:
    """The ``{A_0, A_1}`` pair: no loss and exactly one lost quantum."""
    ops = tuple(amp_kraus(k, eta, n_max) for k in range(min(1, n_max) + 1))
    params = ChannelParams(eta=eta, n_max=n_max, k_max=len(ops) - 1)
    return KrausFamily(ops, "amplitude", params, completeness_deficit(ops))


def _phase_diag(k: int, tau: float, n_max: int) -> np.ndarray:
    diag = np.zeros(n_max + 1)
    for n in range(n_max + 1):
        mean = (n * tau) ** 2
        if mean == 0:
            diag[n] = 1.0 if k == 0 else 0.0
        else:
            diag[n] = math.exp(0.5 * log_poisson_pmf(k, mean))
    return diag


def phase_kraus(k: int, tau: float, n_max: int) -> Operator:
    """Diagonal Kraus operator for ``k`` scattering events."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if not tau >= 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    return Operator(np.diag(_phase_diag(k, tau, n_max)), n_max)


def phase_cutoff(tau: float, n_max: int, deficit_bound: float, hard_cap: int | None = None) -> int:
    """Smallest ``k_max`` whose Poisson tail at mean ``(n_max tau)^2`` is within ``deficit_bound``."""
    if hard_cap is None:
        hard_cap = int(10 * n_max**2 * max(tau**2, 1.0)) + 64
    mean = (n_max * tau) ** 2
    if mean == 0:
        return 0
    # pmf up to a point where the remaining mass is far below any double
    hi = int(mean + 40 * math.sqrt(mean) + 60)
    j = np.arange(hi + 1)
    pmf = np.exp([log_poisson_pmf(int(x), mean) for x in j])
    # tails[K] = sum_{j > K} pmf[j]
    suffix = np.cumsum(pmf[::-1])[::-1]
    tails = np.append(suffix[1:], 0.0)
    k_max = int(np.argmax(tails <= deficit_bound))
    if k_max > hard_cap:
        raise ConvergenceError(
            f"phase family needs k_max={k_max} > hard cap {hard_cap} (tau={tau}, n_max={n_max})"
        )
    return k_max


def phase_family(tau: float, n_max: int, deficit_bound: float = 1e-12, hard_cap: int | None = None) -> KrausFamily:
    """Phase-damping operators ``P_0 .. P_kmax`` truncated at a Poisson tail of ``deficit_bound``."""
    if not tau >= 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if not deficit_bound > 0:
        raise ValueError("deficit_bound must be > 0")
    k_max = phase_cutoff(tau, n_max, deficit_bound, hard_cap)
    ops = tuple(phase_kraus(k, tau, n_max) for k in range(k_max + 1))
    params = ChannelParams(tau=tau, n_max=n_max, k_max=k_max)
    return KrausFamily(ops, "phase", params, completeness_deficit(ops))


def regroup_phase_qubit(tau: float) -> KrausFamily:
    """Two-operator phase damping on the ``{|0>, |1>}`` qubit."""
    if not tau >= 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    e0 = Operator(np.diag([1.0, math.exp(-(tau**2) / 2)]), 1)
    e1 = Operator(np.diag([0.0, math.sqrt(-math.expm1(-(tau**2)))]), 1)
    ops = (e0, e1)
    params = ChannelParams(tau=tau, n_max=1, k_max=1)
    return KrausFamily(ops, "phase-regrouped", params, completeness_deficit(ops))


def _check_single(family: KrausFamily, rho: Operator) -> None:
    if rho.modes != 1:
        raise DimensionError("expected a single-mode state")
    if family.ops[0].dim != rho.dim:
        raise DimensionError(f"family dimension {family.ops[0].dim} != state dimension {rho.dim}")


def apply(family: KrausFamily, rho: Operator) -> DensityOperator:
    """``sum_k K_k rho K_k^dag`` on a single mode."""
    _check_single(family, rho)
    out = np.zeros_like(rho.mat)
    for op in family.ops:
        k = op.mat
        out += k @ rho.mat @ k.conj().T
    return DensityOperator(out, rho.n_max)


def superoperator(family: KrausFamily) -> np.ndarray:
    """Matrix ``S[(a, b), (n, m)] = sum_k K[a, n] conj(K[b, m])`` acting on row-major ``vec(rho)``."""
    mats = family.stacked
    d = mats.shape[1]
    return np.einsum("kan,kbm->abnm", mats, mats.conj()).reshape(d * d, d * d)


def apply_two_mode(fam_a: KrausFamily, fam_b: KrausFamily, rho: Operator) -> DensityOperator:
    """``sum_{j,k} (K_j x K_k) rho (K_j x K_k)^dag`` with ``fam_a`` on mode 1, ``fam_b`` on mode 2.

    The double sum factorizes into the two single-mode superoperators, so it is
    evaluated as ``S_a R S_b^T`` with ``R`` the state regrouped as
    ``(n1 m1), (n2 m2)``.
    """
    if rho.modes != 2:
        raise DimensionError("apply_two_mode expects a two-mode state")
    d = rho.n_max + 1
    for fam in (fam_a, fam_b):
        if fam.ops[0].modes != 1 or fam.ops[0].dim != d:
            raise DimensionError(f"family dimension {fam.ops[0].dim} does not match mode dimension {d}")
    # (n1, n2, m1, m2) -> (n1, m1, n2, m2)
    r = rho.mat.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    r = superoperator(fam_a) @ r @ superoperator(fam_b).T
    out = r.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    return DensityOperator(out, rho.n_max, 2)


def conditional_one_photon(eta: float, rho: Operator, tol: Tolerances | None = None) -> DensityOperator:
    """State after the environment reports at most one lost quantum per mode, renormalized."""
    tol = tol or DEFAULT_TOL
    _check_eta(eta)
    fam = amp_family_one_photon(eta, rho.n_max)
    out = apply_two_mode(fam, fam, rho)
    tr = float(np.real(np.trace(out.mat)))
    if tr <= tol.psd_tol:
        raise UndefinedConditionalStateError(f"conditional trace {tr:.3e} is not positive")
    return DensityOperator(out.mat / tr, rho.n_max, 2)


def dephasing_factors(tau: float, n_max: int, modes: int = 1) -> np.ndarray:
    """Matrix of ``exp(-tau^2 (n - m)^2 / 2)`` factors, per mode for two modes."""
    n = np.arange(n_max + 1)
    single = np.exp(-0.5 * tau**2 * np.subtract.outer(n, n) ** 2)
    if modes == 1:
        return single
    d = n_max + 1
    # (n1, n2, m1, m2) -> factor(n1, m1) * factor(n2, m2)
    t = np.einsum("ac,bd->abcd", single, single)
    return t.reshape(d * d, d * d)


def dephase(tau: float, rho: Operator) -> DensityOperator:
    """Closed form of the full phase-damping sum: Gaussian damping of coherences."""
    if not tau >= 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if dim_of(rho.n_max, rho.modes) != rho.dim:
        raise DimensionError("inconsistent operator")
    return DensityOperator(rho.mat * dephasing_factors(tau, rho.n_max, rho.modes), rho.n_max, rho.modes)
