"""Command-line front end.

    python -m bec_qpt {spectrum,critical-points,diagram,census,evolve}
        [--config FILE] [--set key=value ...] [--out PATH] [--format csv|json]

Config files hold ``key = value`` lines; ``#`` starts a comment. ``--set``
overrides the file. Exit codes: 0 ok, 1 census shortfall, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .continuation import (
    DIAGRAM_COLUMNS,
    bifurcation_diagram,
    continue_branch,
    modes_needed,
    nodal_count,
    state_census,
)
from .core import Domain, PhysicalParams, l2_inner, particle_number, hamiltonian_energy
from .dynamics import EvolutionSettings, conservation_report, evolve
from .errors import InvalidInputError, NumericalError
from .reduced import critical_beta, parse_sign
from .solver import NewtonSettings
from .spectral import analytic_modes, mode, numeric_modes

EXIT_OK, EXIT_SHORTFALL, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(InvalidInputError):
    def __init__(self, key: str, message: str):
        super().__init__(f"invalid config key '{key}': {message}")
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    hbar: float = 1.0
    mass: float = 0.25
    g: float = 1.0
    lam: float = 0.0
    length: float = math.pi
    n_interior: int = 1000
    K: int = 3
    beta: float = -1.5
    beta_min: float = -10.0
    beta_max: float = 0.0
    beta_step: float = 0.05
    tol_residual: float = 1e-10
    max_iter: int = 50
    damping: float = 0.5
    min_step: float = 1e-12
    tol_step: float = 1e-8
    dt: float = 1e-3
    n_steps: int = 1000
    initial: str = "stationary"
    mode_k: int = 1
    sign: str = "+"
    amplitude: float = 1.0
    out: str = "-"
    format: str = "csv"

    @classmethod
    def from_mapping(cls, raw: dict[str, str]) -> "RunConfig":
        fields = {f.name: f for f in dataclasses.fields(cls)}
        values = {}
        for key, text in raw.items():
            name = "lam" if key == "lambda" else key
            if name not in fields:
                raise ConfigError(key, "unknown key")
            kind = type(fields[name].default)
            try:
                if kind is int:
                    num = float(text)
                    if num != int(num):
                        raise ValueError
                    values[name] = int(num)
                elif kind is float:
                    values[name] = float(text)
                else:
                    values[name] = str(text).strip()
            except ValueError:
                raise ConfigError(key, f"expected {kind.__name__}, got {text!r}") from None
        cfg = cls(**values)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        finite = [f.name for f in dataclasses.fields(self) if isinstance(getattr(self, f.name), float)]
        for name in finite:
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(name, "must be finite")
        checks = [
            ("hbar", self.hbar > 0, "must be positive"),
            ("mass", self.mass > 0, "must be positive"),
            ("length", self.length > 0, "must be positive"),
            ("n_interior", self.n_interior >= 3, "must be >= 3"),
            ("K", self.K >= 0, "must be >= 0"),
            ("beta_max", self.beta_min < self.beta_max, "must exceed beta_min"),
            ("beta_step", self.beta_step > 0, "must be positive"),
            ("tol_residual", self.tol_residual > 0, "must be positive"),
            ("max_iter", self.max_iter >= 0, "must be >= 0"),
            ("damping", 0 < self.damping < 1, "must lie in (0, 1)"),
            ("min_step", self.min_step > 0, "must be positive"),
            ("tol_step", self.tol_step > 0, "must be positive"),
            ("dt", self.dt > 0, "must be positive"),
            ("n_steps", self.n_steps >= 0, "must be >= 0"),
            ("initial", self.initial in ("stationary", "mode", "zero"), "must be stationary, mode or zero"),
            ("mode_k", self.mode_k >= 1, "must be >= 1"),
            ("sign", self.sign in ("+", "-"), "must be '+' or '-'"),
            ("format", self.format in ("csv", "json"), "must be csv or json"),
        ]
        for key, ok, msg in checks:
            if not ok:
                raise ConfigError(key, msg)

    @property
    def params(self) -> PhysicalParams:
        return PhysicalParams(self.hbar, self.mass, self.g, self.lam)

    @property
    def domain(self) -> Domain:
        return Domain(self.length, self.n_interior)

    @property
    def newton(self) -> NewtonSettings:
        return NewtonSettings(self.tol_residual, self.max_iter, self.damping, self.min_step, self.tol_step)

    @property
    def evolution(self) -> EvolutionSettings:
        return EvolutionSettings(self.dt, self.n_steps)


def parse_config_text(text: str) -> dict[str, str]:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        raw[key] = value
    return raw


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, (float, np.floating)) and not math.isfinite(v):
        return "null"
    if isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool):
        return _fmt(v)
    return json.dumps(v)


def write_table(
    cfg: RunConfig,
    command: str,
    columns: tuple[str, ...],
    rows: list[tuple],
    summary: dict | None = None,
) -> str:
    buf = io.StringIO()
    buf.write(f"# bec_qpt {__version__} {command}\n")
    for f in dataclasses.fields(cfg):
        if f.name == "out":  # the destination does not affect the content
            continue
        buf.write(f"# {f.name} = {_fmt(getattr(cfg, f.name))}\n")
    for key, value in (summary or {}).items():
        buf.write(f"# {key} = {_fmt(value)}\n")
    if cfg.format == "csv":
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        for row in rows:
            buf.write("{" + ", ".join(f"{json.dumps(c)}: {_json_value(v)}" for c, v in zip(columns, row)) + "}\n")
    text = buf.getvalue()
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text)
    return text


def cmd_spectrum(cfg: RunConfig) -> int:
    d = cfg.domain
    if cfg.K > d.n_interior:
        raise ConfigError("K", f"K exceeds grid resolution (n_interior={d.n_interior})")
    rows = [
        (a.k, a.xi, nm.xi, nm.alpha)
        for a, nm in zip(analytic_modes(d, cfg.K), numeric_modes(d, cfg.K))
    ]
    write_table(cfg, "spectrum", ("k", "xi_analytic", "xi_numeric", "alpha"), rows)
    return EXIT_OK


def cmd_critical_points(cfg: RunConfig) -> int:
    p, d = cfg.params, cfg.domain
    if cfg.K > d.n_interior:
        raise ConfigError("K", f"K exceeds grid resolution (n_interior={d.n_interior})")
    rows = [
        (a.k, a.xi, critical_beta(a, p).beta_k, critical_beta(nm, p).beta_k)
        for a, nm in zip(analytic_modes(d, cfg.K), numeric_modes(d, cfg.K))
    ]
    write_table(cfg, "critical-points", ("k", "xi", "beta_k", "beta_k_discrete"), rows)
    return EXIT_OK


def cmd_diagram(cfg: RunConfig) -> int:
    p, d = cfg.params, cfg.domain
    if cfg.K > d.n_interior:
        raise ConfigError("K", f"K exceeds grid resolution (n_interior={d.n_interior})")
    diagram = bifurcation_diagram(cfg.beta_min, cfg.beta_max, cfg.K, p, d, cfg.newton, cfg.beta_step)
    summary = {f"branch_error_{label}": msg.replace("\n", " ") for label, msg in sorted(diagram.errors.items())}
    write_table(cfg, "diagram", DIAGRAM_COLUMNS, diagram.rows(), summary)
    return EXIT_NUMERIC if diagram.errors else EXIT_OK


def cmd_census(cfg: RunConfig) -> int:
    p, d = cfg.params, cfg.domain
    if cfg.K > d.n_interior:
        raise ConfigError("K", f"K exceeds grid resolution (n_interior={d.n_interior})")
    K = max(cfg.K, modes_needed(cfg.beta, p, d))
    if K > d.n_interior:
        raise ConfigError("beta", f"needs {K} modes, more than the grid resolves")
    report = state_census(cfg.beta, K, p, d, cfg.newton)
    modes = numeric_modes(d, K)
    rows = []
    for sol in report.solutions:
        k, sg = sol.label
        phi = sol.phi
        rows.append((
            k, sg, sol.beta, l2_inner(phi, modes[k - 1].shape, d), particle_number(phi, d),
            hamiltonian_energy(phi, sol.beta, p, d), nodal_count(phi), sol.residual_norm,
        ))
    summary = {
        "K_used": K,
        "j": report.j,
        "expected_min": report.expected_min,
        "found_count": report.found_count,
        "status": "proven (g > 0)" if report.proven else "conjectured by symmetry (g < 0)",
        "result": "pass" if report.ok else "census-shortfall",
    }
    write_table(cfg, "census", DIAGRAM_COLUMNS, rows, summary)
    return EXIT_OK if report.ok else EXIT_SHORTFALL


def initial_state(cfg: RunConfig) -> np.ndarray:
    p, d = cfg.params, cfg.domain
    if cfg.initial == "zero":
        return d.zeros()
    if cfg.mode_k > d.n_interior:
        raise ConfigError("mode_k", "exceeds grid resolution")
    m = mode(d, cfg.mode_k)
    if cfg.initial == "mode":
        return cfg.amplitude * m.shape
    try:
        branch = continue_branch(m, parse_sign(cfg.sign), cfg.beta, cfg.beta_step, p, d, cfg.newton)
    except InvalidInputError as exc:
        raise ConfigError("beta", str(exc)) from None
    return branch.points[-1].solution.phi


def cmd_evolve(cfg: RunConfig) -> int:
    p, d = cfg.params, cfg.domain
    psi0 = initial_state(cfg)
    traj = evolve(psi0, cfg.beta, p, d, cfg.evolution, store_every=0)
    drift_N, drift_H = conservation_report(traj)
    write_table(cfg, "evolve", ("t", "N", "H", "sup_abs_psi"), traj.rows(),
                {"drift_N": drift_N, "drift_H": drift_H})
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "critical-points": cmd_critical_points,
    "diagram": cmd_diagram,
    "census": cmd_census,
    "evolve": cmd_evolve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bec_qpt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="file of key = value lines")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one key")
    parser.add_argument("--out", help="output path ('-' for stdout)")
    parser.add_argument("--format", choices=("csv", "json"))
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    raw: dict[str, str] = {}
    if args.config is not None:
        try:
            raw.update(parse_config_text(args.config.read_text()))
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc.strerror}") from None
    for item in args.set:
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, value = item.split("=", 1)
        raw[key.strip()] = value.strip()
    if args.out is not None:
        raw["out"] = args.out
    if args.format is not None:
        raw["format"] = args.format
    return RunConfig.from_mapping(raw)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
