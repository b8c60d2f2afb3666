"""Brute-force cross-checks that do not share code with :mod:`bkraus.channels`.

* :func:`lindblad_amp_evolve` integrates the zero-temperature damping master
  equation ``drho/ds = b rho b^dag - {b^dag b, rho}/2`` (``s = gamma t``) with
  fixed-step RK4 on the truncated space. The truncated generator is exact
  there because no process raises the photon number.
* :func:`dephase_partial_sum` sums the first ``k_terms`` phase-damping Kraus
  terms, building each diagonal by a log-space recurrence in ``k``.
* :func:`certify` sweeps a parameter grid and collects worst-case errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytics, channels, encodings
from .errors import IntegrationError
from .fock import DensityOperator, Operator, coherent_state, default_n_max, fidelity_pure, outer


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not 0 < self.dt <= 1e-2:
            raise ValueError(f"dt must lie in (0, 1e-2], got {self.dt}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)


def _lindblad_rhs(rho: np.ndarray, b: np.ndarray, bd: np.ndarray, num: np.ndarray) -> np.ndarray:
    return b @ rho @ bd - 0.5 * (num @ rho + rho @ num)


def lindblad_amp_evolve(rho0: Operator, gamma_t: float, cfg: IntegratorConfig = IntegratorConfig()) -> DensityOperator:
    """Integrate amplitude damping up to scaled time ``gamma_t``.

    The step is shrunk slightly so an integer number of steps lands exactly on
    ``gamma_t``. No renormalization is applied; trace drift is left visible.
    """
    if rho0.modes != 1:
        raise ValueError("lindblad_amp_evolve expects a single-mode state")
    if gamma_t < 0:
        raise ValueError("gamma_t must be >= 0")
    steps = math.ceil(gamma_t / cfg.dt - 1e-12) if gamma_t > 0 else 0
    if steps > cfg.max_steps:
        raise IntegrationError(f"{steps} steps needed, max_steps={cfg.max_steps}")
    b = annihilation(rho0.n_max).astype(np.complex128)
    bd = b.conj().T
    num = bd @ b
    rho = np.array(rho0.mat)
    if steps:
        h = gamma_t / steps
        for _ in range(steps):
            k1 = _lindblad_rhs(rho, b, bd, num)
            k2 = _lindblad_rhs(rho + 0.5 * h * k1, b, bd, num)
            k3 = _lindblad_rhs(rho + 0.5 * h * k2, b, bd, num)
            k4 = _lindblad_rhs(rho + h * k3, b, bd, num)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return DensityOperator(rho, rho0.n_max)


def _phase_diagonals(tau: float, n_max: int, k_terms: int) -> np.ndarray:
    """Rows k = 0..k_terms-1 of the phase Kraus diagonals, by ``d_k = d_{k-1} n tau / sqrt(k)``."""
    n = np.arange(n_max + 1, dtype=float)
    out = np.zeros((k_terms, n_max + 1))
    out[0] = np.exp(-0.5 * (n * tau) ** 2)
    if tau == 0:
        return out
    with np.errstate(divide="ignore"):
        log_step = np.log(n * tau)
    log_d = -0.5 * (n * tau) ** 2
    for k in range(1, k_terms):
        log_d = log_d + log_step - 0.5 * math.log(k)
        out[k] = np.exp(log_d)
    return out


def dephase_partial_sum(tau: float, rho: Operator, k_terms: int) -> DensityOperator:
    """``sum_{k < k_terms} P_k rho P_k^dag`` for a single-mode ``rho``."""
    if k_terms < 1:
        raise ValueError("k_terms must be >= 1")
    if rho.modes != 1:
        raise ValueError("dephase_partial_sum expects a single-mode state")
    diags = _phase_diagonals(tau, rho.n_max, k_terms)
    # P_k rho P_k = rho * outer(d_k, d_k) for diagonal real P_k
    weights = diags.T @ diags
    return DensityOperator(rho.mat * weights, rho.n_max)


def random_density(n_max: int, seed: int, rank: int | None = None) -> DensityOperator:
    """Random full-rank (or given rank) density matrix from a Ginibre draw."""
    rng = np.random.default_rng(seed)
    d = n_max + 1
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return DensityOperator(rho / np.trace(rho), n_max)


# ----------------------------------------------------------- certification


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float
    points: int

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)


@dataclass(frozen=True)
class CertificationReport:
    checks: tuple[CheckResult, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __len__(self):
        return len(self.checks)

    def to_text(self) -> str:
        lines = [f"certification: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks)"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status}  {c.name:<28} max_error={c.max_error:.3e}  tol={c.tolerance:.1e}  points={c.points}")
        return "\n".join(lines) + "\n"

    def to_keyvalue(self) -> str:
        lines = [f"passed={str(self.passed).lower()}", f"checks={len(self.checks)}"]
        for c in self.checks:
            lines.append(f"{c.name}.passed={str(c.passed).lower()}")
            lines.append(f"{c.name}.max_error={c.max_error:.12e}")
            lines.append(f"{c.name}.tolerance={c.tolerance:.12e}")
            lines.append(f"{c.name}.points={c.points}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CertificationRequest:
    """Parameter grid for :func:`certify`. Empty tuples skip the dependent checks.

    ``eta_error`` perturbs the survival probability fed to the numeric side of
    the amplitude dualities; it exists only as a negative control.
    """

    etas: tuple[float, ...] = (0.1, 0.5, 0.9)
    n_maxes: tuple[int, ...] = (5, 20, 50)
    alpha_sqs: tuple[float, ...] = (0.25, 1.0, 2.0)
    taus: tuple[float, ...] = (0.3, 1.0, 2.0)
    gamma_ts: tuple[float, ...] = (0.5, 2.0)
    seeds: tuple[int, ...] = (0, 1)
    eta_error: float = 0.0

    @classmethod
    def empty(cls) -> "CertificationRequest":
        return cls(etas=(), n_maxes=(), alpha_sqs=(), taus=(), gamma_ts=(), seeds=())


def _perturbed(eta: float, error: float) -> float:
    return min(max(eta + error, 1e-12), 1.0)


def _max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def certify(request: CertificationRequest | None = None) -> CertificationReport:
    req = CertificationRequest() if request is None else request
    checks: list[CheckResult] = []

    def add(name, errors, tol):
        if errors:
            checks.append(CheckResult(name, float(max(errors)), tol, len(errors)))

    add(
        "amplitude_completeness",
        [channels.amp_family(eta, n).completeness_deficit for eta in req.etas for n in req.n_maxes],
        1e-12,
    )
    phase_n = [n for n in req.n_maxes if n <= 20]
    add(
        "phase_completeness",
        [channels.phase_family(t, n, 1e-12).completeness_deficit for t in req.taus for n in phase_n],
        1e-12,
    )

    errs = []
    for i, tau in enumerate(req.taus):
        rho = random_density(12, 1000 + i)
        closed = channels.dephase(tau, rho).mat
        errs.append(_max_abs(channels.apply(channels.phase_family(tau, 12, 1e-12), rho).mat, closed))
        mean = (12 * tau) ** 2
        k_terms = int(mean + 12 * math.sqrt(mean) + 60)
        errs.append(_max_abs(dephase_partial_sum(tau, rho, k_terms).mat, closed))
    add("phase_oracle_equivalence", errs, 1e-10)

    errs = []
    for x in req.alpha_sqs:
        for eta in req.etas:
            alpha = math.sqrt(x)
            n_max = default_n_max(x)
            out = channels.apply(channels.amp_family(_perturbed(eta, req.eta_error), n_max), outer(coherent_state(alpha, n_max)))
            errs.append(1 - fidelity_pure(coherent_state(math.sqrt(eta) * alpha, n_max), out))
    add("coherent_covariance", errs, 1e-9)

    errs = []
    for seed in req.seeds:
        rho = random_density(20, seed)
        for gt in req.gamma_ts:
            kraus = channels.apply(channels.amp_family(_perturbed(math.exp(-gt), req.eta_error), 20), rho).mat
            errs.append(_max_abs(lindblad_amp_evolve(rho, gt).mat, kraus))
    add("kraus_lindblad", errs, 1e-6)

    errs = []
    fock = encodings.fock_bell_state()
    for eta in req.etas:
        fam = channels.amp_family(_perturbed(eta, req.eta_error), 1)
        out = channels.apply_two_mode(fam, fam, outer(fock))
        errs.append(abs(fidelity_pure(fock, out) - analytics.F1_fock(eta)))
    add("duality_fock_bell", errs, 1e-10)

    f1_errs, f2_errs = [], []
    for x in (a for a in req.alpha_sqs if a <= 4):
        psi = encodings.cat_bell_state(math.sqrt(x))
        rho = outer(psi)
        for eta in req.etas:
            eta_num = _perturbed(eta, req.eta_error)
            cond = channels.conditional_one_photon(eta_num, rho)
            f1_errs.append(abs(fidelity_pure(psi, cond) - analytics.F1_amp(x, eta)))
            fam = channels.amp_family(eta_num, psi.n_max)
            full = channels.apply_two_mode(fam, fam, rho)
            f2_errs.append(abs(fidelity_pure(psi, full) - analytics.F2_amp(x, eta)))
    add("duality_F1_amp", f1_errs, 1e-8)
    add("duality_F2_amp", f2_errs, 1e-8)

    cat_errs, bell_errs, form_errs = [], [], []
    for x in req.alpha_sqs:
        alpha = math.sqrt(x)
        for tau in req.taus:
            for k, parity in ((0, "even"), (1, "odd")):
                cat = encodings.cat_state(alpha, parity)
                num = fidelity_pure(cat, channels.dephase(tau, outer(cat)))
                cat_errs.append(abs(num - analytics.f_phase_cat(k, x, tau)))
                form_errs.append(abs(analytics.f_phase_cat(k, x, tau) - analytics.f_phase_cat_bessel(k, x, tau)))
            form_errs.append(abs(analytics.F_phase_cat(x, tau) - analytics.F_phase_cat_double(x, tau)))
            if x <= 4:
                psi = encodings.cat_bell_state(alpha)
                num = fidelity_pure(psi, channels.dephase(tau, outer(psi)))
                bell_errs.append(abs(num - analytics.F_phase_cat(x, tau)))
    add("duality_f_phase_cat", cat_errs, 1e-8)
    add("duality_F_phase_cat", bell_errs, 1e-8)
    add("phase_form_consistency", form_errs, 1e-9)

    errs = []
    fock = encodings.fock_bell_state()
    for tau in req.taus:
        fam = channels.regroup_phase_qubit(tau)
        out = channels.apply_two_mode(fam, fam, outer(fock))
        errs.append(abs(fidelity_pure(fock, out) - analytics.F_phase_fock(tau)))
    add("duality_F_phase_fock", errs, 1e-10)

    return CertificationReport(tuple(checks))
