"""Command-line frontend: figure tables plus per-state evolutions, and the certification sweep.

Every CSV starts with one ``# key=value ...`` comment line holding the run
parameters, followed by a header row. Numbers are written with 12 significant
digits in scientific notation and LF line endings, so identical configurations
give byte-identical files. Files are written to a temporary sibling and then
renamed into place.

Exit codes: 0 success, 1 invariant failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import analytics, channels, encodings, oracle
from .errors import BKrausError
from .fock import DensityOperator, FockVector, Tolerances, fidelity_pure, outer

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2

FIG_ALPHA_SQ = {
    "fig1": (0.25, 1.0, 4.0, 16.0),
    "fig2": (0.25, 1.0, 4.0, 16.0),
    "fig3": (0.01, 0.25, 1.0, 4.0, 16.0),
}
DEFAULT_T_MAX = {"amplitude": 4.0, "phase": 3.0}
DEFAULT_STEPS = 200
STATES = ("fock-qubit", "cat", "bell-fock", "bell-cat")
TWO_MODE_ALPHA_SQ_CAP = 4.0


class UsageError(ValueError):
    pass


class InvariantFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    alpha_sq_list: tuple[float, ...] = ()
    time_grid: tuple[float, float, int] = (0.0, 4.0, DEFAULT_STEPS)
    n_max_override: int | None = None
    out_path: Path = Path("out.csv")
    emit_plot: bool = False
    channel: str = "amplitude"
    state: str = "bell-fock"
    bit: int = 0
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.command not in ("fig1", "fig2", "fig3", "evolve", "validate"):
            raise UsageError(f"unknown command {self.command!r}")
        start, stop, steps = self.time_grid
        if steps < 2:
            raise UsageError(f"steps must be >= 2, got {steps}")
        if not (0 <= start < stop and math.isfinite(stop)):
            raise UsageError(f"time grid needs 0 <= start < stop, got ({start}, {stop})")
        for x in self.alpha_sq_list:
            if not (x > 0 and math.isfinite(x)):
                raise UsageError(f"alpha_sq values must be finite and > 0, got {x}")
        if self.n_max_override is not None and self.n_max_override < 1:
            raise UsageError("--n-max must be >= 1")
        if self.channel not in DEFAULT_T_MAX:
            raise UsageError(f"unknown channel {self.channel!r}")
        if self.state not in STATES:
            raise UsageError(f"unknown state {self.state!r}")
        if self.bit not in (0, 1):
            raise UsageError("--bit must be 0 or 1")

    @property
    def grid(self) -> np.ndarray:
        start, stop, steps = self.time_grid
        return np.linspace(start, stop, int(steps))


@dataclass(frozen=True)
class FidelityCurve:
    abscissa_name: str
    points: tuple[tuple[float, float], ...]
    label: str

    def __post_init__(self):
        if self.abscissa_name not in ("gamma_t", "tau"):
            raise ValueError(f"abscissa must be gamma_t or tau, got {self.abscissa_name!r}")
        xs = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("curve abscissae must be strictly increasing")
        if not all(math.isfinite(p[1]) for p in self.points):
            raise ValueError(f"curve {self.label!r} has non-finite values")


@dataclass
class Table:
    meta: dict[str, str]
    header: tuple[str, ...]
    rows: list[tuple[float, ...]]
    curves: list[FidelityCurve]


# ------------------------------------------------------------------ output


def fmt(value: float) -> str:
    value = float(value)
    if math.isnan(value):
        return "nan"
    if value == 0.0:
        value = 0.0  # fold -0.0
    return f"{value:.11e}"


def _meta_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, (tuple, list)):
        return ";".join(_meta_value(x) for x in v)
    return str(v)


def render_csv(table: Table) -> str:
    meta = " ".join(f"{k}={_meta_value(v)}" for k, v in table.meta.items())
    lines = [f"# {meta}", ",".join(table.header)]
    lines += [",".join(fmt(v) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def plot_curves(curves: Sequence[FidelityCurve], path: Path, ylabel: str) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for c in curves:
        xs, ys = zip(*c.points)
        ax.plot(xs, ys, label=c.label)
    if curves:
        ax.set_xlabel(curves[0].abscissa_name)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize="small")
    fig.tight_layout()
    png = Path(path).with_suffix(".png")
    fig.savefig(png, dpi=120)
    plt.close(fig)
    return png


# ------------------------------------------------------------------ tables


def _base_meta(cfg: RunConfig, abscissa: str, n_max: str) -> dict[str, object]:
    start, stop, steps = cfg.time_grid
    meta: dict[str, object] = {
        "command": cfg.command,
        "abscissa": abscissa,
        "start": float(start),
        "stop": float(stop),
        "steps": int(steps),
        "alpha_sq": tuple(float(x) for x in cfg.alpha_sq_list),
        "n_max": n_max,
    }
    meta.update(cfg.tol.as_dict())
    return meta


def _analytic_table(
    cfg: RunConfig,
    abscissa: str,
    columns: tuple[str, ...],
    values: Callable[[float, float], tuple[float, ...]],
    labels: Callable[[float], tuple[str, ...]],
) -> Table:
    grid = cfg.grid
    rows, curves = [], []
    for x in cfg.alpha_sq_list:
        series = [values(x, float(t)) for t in grid]
        rows += [(float(t), x, *vals) for t, vals in zip(grid, series)]
        for j, label in enumerate(labels(x)):
            curves.append(FidelityCurve(abscissa, tuple((float(t), s[j]) for t, s in zip(grid, series)), label))
    return Table(_base_meta(cfg, abscissa, "analytic"), (abscissa, "alpha_sq", *columns), rows, curves)


def fig1_values(alpha_sq: float, gamma_t: float) -> tuple[float, float]:
    eta = math.exp(-gamma_t)
    return analytics.F1_amp(alpha_sq, eta) - eta, analytics.F2_amp(alpha_sq, eta) - eta


def fig2_values(alpha_sq: float, tau: float) -> tuple[float, float]:
    return analytics.f_phase_cat(0, alpha_sq, tau), analytics.f_phase_cat(1, alpha_sq, tau)


def fig3_values(alpha_sq: float, tau: float) -> tuple[float, float]:
    return analytics.F_phase_cat(alpha_sq, tau), analytics.F_phase_fock(tau)


def fig1_table(cfg: RunConfig) -> Table:
    return _analytic_table(
        cfg, "gamma_t", ("F1_minus_eta", "F2_minus_eta"), fig1_values,
        lambda x: (f"F1-eta, alpha_sq={x:g}", f"F2-eta, alpha_sq={x:g}"),
    )


def fig2_table(cfg: RunConfig) -> Table:
    return _analytic_table(
        cfg, "tau", ("f0", "f1"), fig2_values,
        lambda x: (f"f0, alpha_sq={x:g}", f"f1, alpha_sq={x:g}"),
    )


def fig3_table(cfg: RunConfig) -> Table:
    return _analytic_table(
        cfg, "tau", ("F_cat", "F_fock"), fig3_values,
        lambda x: (f"F_cat, alpha_sq={x:g}", f"F_fock, alpha_sq={x:g}"),
    )


# ------------------------------------------------------------------ evolve


def _initial_state(cfg: RunConfig) -> tuple[FockVector, float | None]:
    if cfg.state in ("fock-qubit", "bell-fock"):
        n_max = cfg.n_max_override or 1
        if cfg.state == "fock-qubit":
            return encodings.Encoding("fock", n_max=n_max).logical(cfg.bit), None
        return encodings.fock_bell_state(n_max), None
    if len(cfg.alpha_sq_list) != 1:
        raise UsageError(f"state {cfg.state} needs exactly one --alpha-sq value")
    x = cfg.alpha_sq_list[0]
    if cfg.state == "bell-cat" and x > TWO_MODE_ALPHA_SQ_CAP:
        raise UsageError(f"bell-cat is limited to alpha_sq <= {TWO_MODE_ALPHA_SQ_CAP:g} (two-mode dimension)")
    enc = encodings.Encoding("cat", alpha=math.sqrt(x), n_max=cfg.n_max_override)
    if cfg.state == "cat":
        return enc.logical(cfg.bit), x
    return encodings.bell_state(enc), x


def _analytic_fidelity(cfg: RunConfig, x: float | None, t: float) -> float:
    amp = cfg.channel == "amplitude"
    eta = math.exp(-t)
    if cfg.state == "fock-qubit":
        return (eta if cfg.bit == 1 else 1.0) if amp else 1.0
    if cfg.state == "bell-fock":
        return analytics.F1_fock(eta) if amp else analytics.F_phase_fock(t)
    if cfg.state == "bell-cat":
        return analytics.F2_amp(x, eta) if amp else analytics.F_phase_cat(x, t)
    # single cat: only the dephasing fidelity has a closed form
    return math.nan if amp else analytics.f_phase_cat(cfg.bit, x, t)


def _evolved(cfg: RunConfig, psi: FockVector, rho0: DensityOperator, t: float) -> DensityOperator:
    if cfg.channel == "amplitude":
        fam = channels.amp_family(math.exp(-t), psi.n_max)
        return channels.apply(fam, rho0) if psi.modes == 1 else channels.apply_two_mode(fam, fam, rho0)
    if psi.n_max == 1:
        fam = channels.regroup_phase_qubit(t)
        return channels.apply(fam, rho0) if psi.modes == 1 else channels.apply_two_mode(fam, fam, rho0)
    return channels.dephase(t, rho0)


def _light_check(rho: DensityOperator, tol: Tolerances, t: float) -> None:
    m = rho.mat
    tr = float(np.real(np.trace(m)))
    if abs(tr - 1) > tol.trace_tol:
        raise InvariantFailure(f"trace drifted to {tr!r} at t={t}")
    if np.max(np.abs(m - m.conj().T)) > tol.herm_tol:
        raise InvariantFailure(f"evolved state lost Hermiticity at t={t}")


def evolve_table(cfg: RunConfig) -> Table:
    psi, x = _initial_state(cfg)
    rho0 = outer(psi)
    abscissa = "gamma_t" if cfg.channel == "amplitude" else "tau"
    rows, pts = [], []
    for t in cfg.grid:
        t = float(t)
        rho = _evolved(cfg, psi, rho0, t)
        _light_check(rho, cfg.tol, t)
        num = fidelity_pure(psi, rho, cfg.tol)
        ana = _analytic_fidelity(cfg, x, t)
        rows.append((t, num, ana, abs(num - ana)))
        pts.append((t, num))
    meta = _base_meta(cfg, abscissa, str(psi.n_max))
    meta.update({"state": cfg.state, "channel": cfg.channel, "bit": cfg.bit})
    label = f"{cfg.state} {cfg.channel}" + (f", alpha_sq={x:g}" if x is not None else "")
    return Table(meta, ("time", "fidelity_numeric", "fidelity_analytic", "abs_gap"), rows,
                 [FidelityCurve(abscissa, tuple(pts), label)])


TABLES = {"fig1": fig1_table, "fig2": fig2_table, "fig3": fig3_table, "evolve": evolve_table}
YLABELS = {"fig1": "F - eta", "fig2": "f_k(tau)", "fig3": "F'(tau)", "evolve": "fidelity"}


def run_table(cfg: RunConfig) -> Table:
    table = TABLES[cfg.command](cfg)
    write_atomic(cfg.out_path, render_csv(table))
    if cfg.emit_plot:
        plot_curves(table.curves, cfg.out_path, YLABELS[cfg.command])
    return table


def run_validate(cfg: RunConfig, empty: bool = False, eta_error: float = 0.0) -> oracle.CertificationReport:
    request = oracle.CertificationRequest.empty() if empty else oracle.CertificationRequest(eta_error=eta_error)
    report = oracle.certify(request)
    out = Path(cfg.out_path)
    out.mkdir(parents=True, exist_ok=True)
    write_atomic(out / "certification.txt", report.to_text())
    write_atomic(out / "certification.kv", report.to_keyvalue())
    return report


# ------------------------------------------------------------------ argv


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bkraus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_out):
        p.add_argument("--out", type=Path, default=Path(default_out), help="output path")
        p.add_argument("--n-max", type=int, default=None, help="Fock truncation override")

    for name in ("fig1", "fig2", "fig3", "evolve"):
        p = sub.add_parser(name)
        common(p, f"{name}.csv")
        p.add_argument("--alpha-sq", type=_float_list, default=None, help="comma-separated intensities |alpha|^2")
        p.add_argument("--t-min", type=float, default=0.0)
        p.add_argument("--t-max", type=float, default=None)
        p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
        p.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV")
        if name == "evolve":
            p.add_argument("--channel", choices=sorted(DEFAULT_T_MAX), default="amplitude")
            p.add_argument("--state", choices=STATES, default="bell-fock")
            p.add_argument("--bit", type=int, choices=(0, 1), default=0, help="logical bit for single-mode states")

    p = sub.add_parser("validate")
    common(p, "validation")
    p.add_argument("--empty-grid", action="store_true", help="run with an empty parameter grid")
    p.add_argument("--inject-eta-error", type=float, default=0.0, metavar="DELTA",
                   help="negative control: perturb eta on the numeric side")
    return parser


def config_from_args(args: argparse.Namespace, tol: Tolerances) -> RunConfig:
    if args.command == "validate":
        return RunConfig("validate", out_path=args.out, n_max_override=args.n_max, tol=tol)
    channel = getattr(args, "channel", "amplitude" if args.command == "fig1" else "phase")
    t_max = args.t_max if args.t_max is not None else DEFAULT_T_MAX[channel]
    if args.alpha_sq is not None:
        alpha = args.alpha_sq
    else:
        alpha = FIG_ALPHA_SQ.get(args.command, (1.0,))
    if args.command == "evolve" and args.state in ("fock-qubit", "bell-fock"):
        alpha = ()
    return RunConfig(
        command=args.command,
        alpha_sq_list=tuple(alpha),
        time_grid=(args.t_min, t_max, args.steps),
        n_max_override=args.n_max,
        out_path=args.out,
        emit_plot=args.plot,
        channel=channel,
        state=getattr(args, "state", "bell-fock"),
        bit=getattr(args, "bit", 0),
        tol=tol,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = Tolerances.from_env()
        cfg = config_from_args(args, tol)
        if cfg.command == "validate":
            report = run_validate(cfg, args.empty_grid, args.inject_eta_error)
            sys.stdout.write(report.to_text())
            return EXIT_OK if report.passed else EXIT_INVARIANT
        table = run_table(cfg)
        print(f"wrote {len(table.rows)} rows to {cfg.out_path}")
        return EXIT_OK
    except InvariantFailure as exc:
        print(f"bkraus: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, BKrausError, ValueError, OSError) as exc:
        print(f"bkraus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
