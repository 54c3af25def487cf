"""Command-line driver: parameter sweeps emitting CSV or JSON tables.

Commands map one-to-one onto the library surface:

* ``eigen``      eigenvalue/energy tables per (n, B0, spin)
* ``qsl-sweep``  displacement, minimum time, and velocity over a field grid
* ``sqsl``       saturated-QSL plateaus per (n, spin)
* ``bb``         both sides of the Bremermann-Bekenstein bound over a grid
* ``critical``   spin-crossing critical field per n
* ``ansatz``     analytic SQSL law next to the computed value at a probe field
* ``design``     pole-piece design mapped to a power-law field plus its QSL

Field scales (``--b0-min``/``--b0-max``/``--b0``) are B0 in G pm^-n.  Output
is CSV with '#'-prefixed metadata lines or a JSON {meta, rows} envelope; rows
are sorted deterministically, so results are identical for any --jobs value
and for cold versus warm cache runs.

Exit codes: 0 success, 2 config error, 3 numerical non-convergence (every
point failed), 4 partial failure (see the per-row status column).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field, fields as dataclass_fields
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .bounds import bb_point, critical_field
from .cache import ENV_CACHE_DIR, EigenCache
from .constants import CONSTANTS, to_dimensionless_field
from .eigensolver import EigenRequest, solve
from .errors import ConvergenceError
from .field import PolePieceDesign, PowerLawField, design_to_powerlaw, field_at
from .qsl import qsl_velocity, saturated_qsl
from .spectrum import analytic_sqsl_up, energies

_SPIN_ORDER = {"up": 0, "down": 1}

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_NONCONVERGENCE = 3
_EXIT_PARTIAL = 4


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    command: str = ""
    n: list[float] = dataclass_field(default_factory=list)
    b0_min: float | None = None   # B0 in G pm^-n
    b0_max: float | None = None
    b0: float | None = None       # single-point shortcut
    points_per_decade: int = 1
    spins: list[str] = dataclass_field(default_factory=lambda: ["up", "down"])
    levels: int = 2
    m: int = 0
    nu: int = 0
    tol: float = 1.0e-6
    out: str = "-"
    format: str = "csv"
    cache_dir: str | None = None
    jobs: int = 1
    subtract_rest_energy: bool = False
    probe_b0: float = 1.0e30
    # pole-piece design knobs (defaults realize a linearly growing 10 G field
    # at the 0.5 um probe radius and ~1e4 G at the 0.5 mm core edge)
    turns_per_cm: float = 100.0
    current_a: float = 1.0
    mu_rel: float = 2000.0
    core_length_cm: float = 10.0
    z0: float = math.pi * 1.0e-3
    r0: float = 1.0e-7
    p_surf: float = -1.0
    r_probe_pm: float = 5.0e5

    def validate(self) -> None:
        if self.command != "design":
            if not self.n:
                raise ConfigError("no field exponents given (--n)")
            if any(x <= -1.0 for x in self.n):
                raise ConfigError("field exponents must satisfy n > -1")
        for spin in self.spins:
            if spin not in _SPIN_ORDER:
                raise ConfigError(f"unknown spin {spin!r}")
        if not self.spins:
            raise ConfigError("no spin channels given")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.levels < 2:
            raise ConfigError("levels must be >= 2 (a superposition needs two levels)")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.points_per_decade < 1:
            raise ConfigError("points-per-decade must be >= 1")
        for value, name in ((self.b0_min, "b0-min"), (self.b0_max, "b0-max"), (self.b0, "b0")):
            if value is not None and value <= 0.0:
                raise ConfigError(f"--{name} must be positive")

    def b0_grid(self, default_min: float, default_max: float) -> list[float]:
        if self.b0 is not None:
            return [self.b0]
        lo = self.b0_min if self.b0_min is not None else default_min
        hi = self.b0_max if self.b0_max is not None else default_max
        if hi < lo:
            raise ConfigError(f"empty field range [{lo!r}, {hi!r}]")
        decades = math.log10(hi / lo)
        count = max(int(round(decades * self.points_per_decade)) + 1, 1)
        if count == 1:
            return [lo]
        step = decades / (count - 1)
        return [lo * 10.0 ** (step * i) for i in range(count)]


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return _EXIT_CONFIG
    try:
        cfg = _config_from_args(args)
        cfg.validate()
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    runner = _COMMANDS[cfg.command]
    try:
        columns, rows, failures = runner(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    _emit(cfg, columns, rows)
    if failures == 0:
        return _EXIT_OK
    if failures == len(rows) and rows:
        return _EXIT_NONCONVERGENCE
    return _EXIT_PARTIAL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qslfield",
        description="Quantum-speed-limit sweeps for an electron in a power-law magnetic field",
    )
    sub = parser.add_subparsers(dest="command")
    for name, help_text in (
        ("eigen", "eigenvalue and energy tables"),
        ("qsl-sweep", "QSL velocities over a field grid"),
        ("sqsl", "saturated QSL per (n, spin)"),
        ("bb", "Bremermann-Bekenstein bound sides over a field grid"),
        ("critical", "spin-crossing critical field per n"),
        ("ansatz", "analytic SQSL law vs computed value at a probe field"),
        ("design", "pole-piece design mapped to a power-law field plus QSL"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--n", type=str, default=None, help="comma-separated field exponents")
        p.add_argument("--b0-min", type=float, default=None, help="B0 range start, G pm^-n")
        p.add_argument("--b0-max", type=float, default=None, help="B0 range end, G pm^-n")
        p.add_argument("--b0", type=float, default=None, help="single B0 value, G pm^-n")
        p.add_argument("--points-per-decade", type=int, default=None)
        p.add_argument("--spin", type=str, default=None, help="up, down, or both")
        p.add_argument("--levels", type=int, default=None)
        p.add_argument("--m", type=int, default=None, help="angular momentum quantum number")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--format", type=str, default=None, choices=("csv", "json"))
        p.add_argument("--out", type=str, default=None, help="output path, '-' for stdout")
        p.add_argument("--cache-dir", type=str, default=None)
        p.add_argument("--jobs", type=int, default=None)
        if name == "bb":
            p.add_argument("--subtract-rest-energy", action="store_true", default=None)
        if name == "ansatz":
            p.add_argument("--probe-b0", type=float, default=None,
                           help="B0 for the computed column, G pm^-n")
        if name == "design":
            p.add_argument("--turns-per-cm", type=float, default=None)
            p.add_argument("--current-a", type=float, default=None)
            p.add_argument("--mu-rel", type=float, default=None)
            p.add_argument("--core-length-cm", type=float, default=None)
            p.add_argument("--z0", type=float, default=None, help="surface scale, cm^(1-p)")
            p.add_argument("--r0", type=float, default=None, help="surface offset, cm")
            p.add_argument("--p-surf", type=float, default=None, help="surface exponent")
            p.add_argument("--r-probe-pm", type=float, default=None)
    return parser


_DEFAULT_N = {
    "eigen": [-0.5, 0.0, 0.5],
    "qsl-sweep": [0.0],
    "sqsl": [0.0],
    "bb": [0.0],
    "critical": [2.0],
    "ansatz": [-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 10.0, 12.0,
               14.0, 15.0, 16.0, 18.0, 22.0, 26.0, 30.0],
    "design": [],
}


def _config_from_args(args: argparse.Namespace) -> SweepConfig:
    cfg = SweepConfig(command=args.command)
    n_given = args.n is not None
    if args.config:
        raw = json.loads(Path(args.config).read_text())
        known = {f.name for f in dataclass_fields(SweepConfig)}
        for key, value in raw.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
        n_given = n_given or "n" in raw

    overrides = {
        "n": None if args.n is None else [float(tok) for tok in args.n.split(",") if tok],
        "b0_min": args.b0_min,
        "b0_max": args.b0_max,
        "b0": args.b0,
        "points_per_decade": args.points_per_decade,
        "spins": None if args.spin is None else (
            ["up", "down"] if args.spin == "both" else [args.spin]
        ),
        "levels": args.levels,
        "m": args.m,
        "tol": args.tol,
        "format": args.format,
        "out": args.out,
        "cache_dir": args.cache_dir,
        "jobs": args.jobs,
    }
    for opt in ("subtract_rest_energy", "probe_b0", "turns_per_cm", "current_a", "mu_rel",
                "core_length_cm", "z0", "r0", "p_surf", "r_probe_pm"):
        if hasattr(args, opt):
            overrides[opt] = getattr(args, opt)
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)

    if not cfg.n and not n_given:
        cfg.n = list(_DEFAULT_N[args.command])
    if cfg.cache_dir is None:
        cfg.cache_dir = os.environ.get(ENV_CACHE_DIR)
    return cfg


def _solver(cfg: SweepConfig) -> Callable[[EigenRequest], Any]:
    if cfg.cache_dir:
        return EigenCache(cfg.cache_dir).get_or_solve
    return solve


def _map_points(cfg: SweepConfig, points: list, work: Callable) -> tuple[list[dict], int]:
    """Evaluate work(point) -> list of rows, preserving determinism under --jobs."""
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(work, points))
    else:
        chunks = [work(p) for p in points]
    rows = [row for chunk in chunks for row in chunk]
    failures = sum(1 for row in rows if row.get("status") != "ok")
    return rows, failures


def _sort_rows(rows: list[dict]) -> list[dict]:
    def key(row: dict):
        return (
            row.get("n", 0.0),
            row.get("B0_G_pm_n", 0.0),
            _SPIN_ORDER.get(row.get("spin", "up"), 0),
            row.get("nu", 0),
            str(row.get("scenario", "")),
        )

    return sorted(rows, key=key)


def _fail_row(base: dict, exc: Exception) -> dict:
    row = dict(base)
    row["status"] = f"error: {type(exc).__name__}: {exc}"
    return row


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def _cmd_eigen(cfg: SweepConfig):
    solver = _solver(cfg)
    b0_grid = cfg.b0_grid(CONSTANTS.critical_field_g, CONSTANTS.critical_field_g)
    points = [(n, B0, spin) for n in cfg.n for B0 in b0_grid for spin in cfg.spins]

    def work(point):
        n, B0, spin = point
        base = {"n": n, "B0_G_pm_n": B0, "spin": spin}
        try:
            field = PowerLawField(B0=B0, n=n)
            sol = solver(EigenRequest(field=field, spin=spin, m=cfg.m,
                                      levels=cfg.levels, tol=cfg.tol))
            rows = []
            for level in energies(sol):
                rows.append({**base, "nu": level.nu, "b0_dimensionless": field.b0,
                             "alpha": level.alpha, "epsilon": level.energy, "status": "ok"})
            return rows
        except (ConvergenceError, ValueError) as exc:
            return [_fail_row({**base, "nu": -1, "b0_dimensionless": float("nan"),
                               "alpha": float("nan"), "epsilon": float("nan")}, exc)]

    rows, failures = _map_points(cfg, points, work)
    columns = ["n", "B0_G_pm_n", "spin", "nu", "b0_dimensionless", "alpha", "epsilon", "status"]
    return columns, _sort_rows(rows), failures


def _cmd_qsl_sweep(cfg: SweepConfig):
    solver = _solver(cfg)
    b0_grid = cfg.b0_grid(1.0e10, 1.0e16)
    points = [(n, B0, spin) for n in cfg.n for B0 in b0_grid for spin in cfg.spins]

    def work(point):
        n, B0, spin = point
        base = {"n": n, "B0_G_pm_n": B0, "spin": spin}
        try:
            field = PowerLawField(B0=B0, n=n)
            sol = solver(EigenRequest(field=field, spin=spin, m=cfg.m,
                                      levels=cfg.levels, tol=cfg.tol))
            rows = []
            for nu in range(cfg.levels - 1):
                r = qsl_velocity(field, spin=spin, nu=nu, solution=sol)
                rows.append({**base, "nu": nu,
                             "rho_disp_compton": r.rho_disp_compton,
                             "rho_disp_pm": r.rho_disp_pm,
                             "tau_qsl_compton": r.tau_qsl_compton,
                             "tau_qsl_s": r.tau_qsl_s,
                             "v_over_c": r.v_over_c, "status": "ok"})
            return rows
        except (ConvergenceError, ValueError) as exc:
            return [_fail_row({**base, "nu": -1, "rho_disp_compton": float("nan"),
                               "rho_disp_pm": float("nan"), "tau_qsl_compton": float("nan"),
                               "tau_qsl_s": float("nan"), "v_over_c": float("nan")}, exc)]

    rows, failures = _map_points(cfg, points, work)
    columns = ["n", "B0_G_pm_n", "spin", "nu", "rho_disp_compton", "rho_disp_pm",
               "tau_qsl_compton", "tau_qsl_s", "v_over_c", "status"]
    return columns, _sort_rows(rows), failures


def _cmd_sqsl(cfg: SweepConfig):
    points = [(n, spin) for n in cfg.n for spin in cfg.spins]

    def work(point):
        n, spin = point
        base = {"n": n, "spin": spin, "nu": cfg.nu}
        try:
            res = saturated_qsl(n, spin=spin, nu=cfg.nu)
            return [{**base, "sqsl_v_over_c": res.sqsl_v_over_c,
                     "b0_at_saturation": res.b0_at_saturation,
                     "saturated": res.converged, "status": "ok"}]
        except (ConvergenceError, ValueError) as exc:
            return [_fail_row({**base, "sqsl_v_over_c": float("nan"),
                               "b0_at_saturation": float("nan"), "saturated": False}, exc)]

    rows, failures = _map_points(cfg, points, work)
    columns = ["n", "spin", "nu", "sqsl_v_over_c", "b0_at_saturation", "saturated", "status"]
    return columns, _sort_rows(rows), failures


def _cmd_bb(cfg: SweepConfig):
    b0_grid = cfg.b0_grid(1.0e10, 1.0e16)
    points = [(n, B0, spin) for n in cfg.n for B0 in b0_grid for spin in cfg.spins]

    def work(point):
        n, B0, spin = point
        base = {"n": n, "B0_G_pm_n": B0, "spin": spin, "nu": cfg.nu}
        try:
            b0 = to_dimensionless_field(B0, n)
            pt = bb_point(n, b0, spin=spin, nu=cfg.nu,
                          include_rest_energy=not cfg.subtract_rest_energy)
            return [{**base, "b0_dimensionless": b0,
                     "lhs_energy_per_bit": pt.lhs_energy_per_bit, "rhs": pt.rhs,
                     "region": pt.region, "bound_holds": pt.bound_holds, "status": "ok"}]
        except (ConvergenceError, ValueError) as exc:
            return [_fail_row({**base, "b0_dimensionless": float("nan"),
                               "lhs_energy_per_bit": float("nan"), "rhs": float("nan"),
                               "region": "", "bound_holds": False}, exc)]

    rows, failures = _map_points(cfg, points, work)
    columns = ["n", "B0_G_pm_n", "spin", "nu", "b0_dimensionless", "lhs_energy_per_bit",
               "rhs", "region", "bound_holds", "status"]
    return columns, _sort_rows(rows), failures


def _cmd_critical(cfg: SweepConfig):
    def work(n):
        base = {"n": n}
        try:
            res = critical_field(n)
            return [{**base, "found": res.found,
                     "b0_critical": res.b0_critical if res.found else float("nan"),
                     "B0_critical_G_pm_n": res.B0_critical if res.found else float("nan"),
                     "bracket_lo": res.bracket[0], "bracket_hi": res.bracket[1],
                     "status": "ok"}]
        except (ConvergenceError, ValueError) as exc:
            return [_fail_row({**base, "found": False, "b0_critical": float("nan"),
                               "B0_critical_G_pm_n": float("nan"),
                               "bracket_lo": float("nan"), "bracket_hi": float("nan")}, exc)]

    rows, failures = _map_points(cfg, list(cfg.n), work)
    columns = ["n", "found", "b0_critical", "B0_critical_G_pm_n",
               "bracket_lo", "bracket_hi", "status"]
    return columns, _sort_rows(rows), failures


def _cmd_ansatz(cfg: SweepConfig):
    def work(n):
        base = {"n": n, "B0_probe_G_pm_n": cfg.probe_b0}
        try:
            analytic = analytic_sqsl_up(n)
            field = PowerLawField(B0=cfg.probe_b0, n=n)
            computed = qsl_velocity(field, spin="up", nu=0, tol=cfg.tol).v_over_c
            return [{**base, "v_analytic": analytic, "v_computed": computed, "status": "ok"}]
        except (ConvergenceError, ValueError) as exc:
            return [_fail_row({**base, "v_analytic": float("nan"),
                               "v_computed": float("nan")}, exc)]

    rows, failures = _map_points(cfg, list(cfg.n), work)
    columns = ["n", "B0_probe_G_pm_n", "v_analytic", "v_computed", "status"]
    return columns, _sort_rows(rows), failures


def _cmd_design(cfg: SweepConfig):
    design = PolePieceDesign(
        turns_per_cm=cfg.turns_per_cm,
        current_a=cfg.current_a,
        mu_rel=cfg.mu_rel,
        core_length_cm=cfg.core_length_cm,
        z0=cfg.z0,
        r0=cfg.r0,
        p_surf=cfg.p_surf,
    )
    powerlaw = design_to_powerlaw(design, cfg.r_probe_pm)
    uniform = PowerLawField(B0=field_at(powerlaw, cfg.r_probe_pm), n=0.0)
    points = [("power-law", powerlaw, spin) for spin in cfg.spins]
    points += [("uniform-reference", uniform, spin) for spin in cfg.spins]

    def work(point):
        scenario, field, spin = point
        base = {"scenario": scenario, "n": field.n, "B0_G_pm_n": field.B0, "spin": spin,
                "nu": cfg.nu, "r_probe_pm": cfg.r_probe_pm,
                "B_at_probe_G": field_at(field, cfg.r_probe_pm)}
        try:
            r = qsl_velocity(field, spin=spin, nu=cfg.nu, tol=cfg.tol)
            return [{**base, "rho_disp_pm": r.rho_disp_pm, "tau_qsl_s": r.tau_qsl_s,
                     "v_over_c": r.v_over_c, "status": "ok"}]
        except (ConvergenceError, ValueError) as exc:
            return [_fail_row({**base, "rho_disp_pm": float("nan"),
                               "tau_qsl_s": float("nan"), "v_over_c": float("nan")}, exc)]

    rows, failures = _map_points(cfg, points, work)
    columns = ["scenario", "n", "B0_G_pm_n", "spin", "nu", "r_probe_pm", "B_at_probe_G",
               "rho_disp_pm", "tau_qsl_s", "v_over_c", "status"]
    return columns, _sort_rows(rows), failures


_COMMANDS = {
    "eigen": _cmd_eigen,
    "qsl-sweep": _cmd_qsl_sweep,
    "sqsl": _cmd_sqsl,
    "bb": _cmd_bb,
    "critical": _cmd_critical,
    "ansatz": _cmd_ansatz,
    "design": _cmd_design,
}

_UNITS_NOTE = (
    "B0 in G pm^-n; rho_disp in Compton wavelengths (0.38616 pm) and pm; "
    "tau in Compton times (1.28809e-21 s) and s; v in units of c; "
    "alpha and epsilon dimensionless (epsilon in rest energies)"
)


def _meta(cfg: SweepConfig) -> dict:
    return {
        "tool": "qslfield",
        "version": __version__,
        "command": cfg.command,
        "units": _UNITS_NOTE,
        "params": {
            "n": cfg.n,
            "b0_min": cfg.b0_min,
            "b0_max": cfg.b0_max,
            "b0": cfg.b0,
            "points_per_decade": cfg.points_per_decade,
            "spins": cfg.spins,
            "levels": cfg.levels,
            "m": cfg.m,
            "tol": cfg.tol,
        },
    }


def _format_cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    return value


def _emit(cfg: SweepConfig, columns: list[str], rows: list[dict]) -> None:
    if cfg.format == "json":
        text = json.dumps({"meta": _meta(cfg), "rows": rows}, indent=2, sort_keys=True)
    else:
        buf = io.StringIO()
        meta = _meta(cfg)
        buf.write(f"# {meta['tool']} v{meta['version']}\n")
        buf.write(f"# command: {meta['command']}\n")
        buf.write(f"# params: {json.dumps(meta['params'], sort_keys=True)}\n")
        buf.write(f"# units: {meta['units']}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row.get(col, "")) for col in columns])
        text = buf.getvalue()

    if cfg.out in ("-", "", None):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(cfg.out).write_text(text if text.endswith("\n") else text + "\n")


if __name__ == "__main__":
    sys.exit(main())
