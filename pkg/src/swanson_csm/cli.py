"""Command-line front end.

Precedence: built-in defaults, then ``--config FILE`` (flat ``key = value``),
then explicit flags.  Exit codes: 0 success, 2 invalid region or parameters,
3 tolerance failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import figures
from .conformance import run_conformance
from .eigen import EigenstateId, eigenfunction, eigenvalue
from .errors import (DegenerateParameters, IoError, RegionError, SwansonError,
                     ToleranceNotReached, TruncationInsufficient)
from .io import dumps, format_csv, metadata, read_config, write_csv, write_json
from .model import Branch, ModelParams, Side, derive_quantities, parse_theta
from .packets import (PacketKind, density_x, moments, packet_evolved_closed, persistence_Q,
                      survival_general, survival_probability)
from .propagator import ComplexField, default_grid, evolve_quadrature
from .rhs import csm_rhs_equivalence_report
from .special import QuadraturePolicy, QuadratureRule
from .wigner import default_axes, wigner_grid

EXIT_REGION, EXIT_TOLERANCE, EXIT_IO = 2, 3, 4
FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")
DEFAULTS = {
    "omega": "1", "alpha": "-1", "beta": "-0.5", "theta": "pi/4", "hbar": "1", "b0": "1",
    "t": "1", "L": "200", "n": "0", "m": None, "branch": "-", "kind": "g", "grid": None,
    "span": "6", "method": "closed", "format": "csv", "out": None, "omega_list": None,
    "t_list": None, "quad_rule": "gl", "quad_panels": "16", "quad_order": "64",
    "quad_abs_tol": "1e-13", "quad_rel_tol": "1e-11", "quad_half_width": None,
}


@dataclass
class RunConfig:
    """Validated settings for one command."""

    params: ModelParams
    quad: QuadraturePolicy
    grid: int | None = None
    span: float = 6.0
    output: str | None = None
    format: str = "csv"
    options: dict = field(default_factory=dict)

    @property
    def derived(self):
        return derive_quantities(self.params)


def _floats(text):
    return None if text is None else [float(v) for v in str(text).split(",") if v.strip()]


def build_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if args.config:
        values.update(read_config(args.config))
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    params = ModelParams(float(values["omega"]), float(values["alpha"]), float(values["beta"]),
                         float(values["hbar"]), float(values["b0"]),
                         parse_theta(values["theta"]))
    rule = {"gl": QuadratureRule.GAUSS_LEGENDRE_PANELS,
            "trapezoid": QuadratureRule.TRAPEZOID_REFINED}[str(values["quad_rule"])]
    half = values["quad_half_width"]
    quad = QuadraturePolicy(rule=rule, half_width=None if half is None else float(half),
                            panels=int(values["quad_panels"]), order=int(values["quad_order"]),
                            abs_tol=float(values["quad_abs_tol"]),
                            rel_tol=float(values["quad_rel_tol"]))
    fmt = str(values["format"]).lower()
    if fmt not in ("csv", "json"):
        raise ValueError("format must be csv or json")
    return RunConfig(params, quad, None if values["grid"] is None else int(values["grid"]),
                     float(values["span"]), values["out"], fmt, values)


def _times(cfg: RunConfig, omega_abs: float):
    listed = _floats(cfg.options["t_list"])
    if listed is not None:
        return np.array(listed)
    return np.linspace(0.0, 5.0 / omega_abs, cfg.grid or 101)


def _emit(cfg: RunConfig, meta: dict, columns, rows) -> None:
    rows = list(rows)
    if cfg.format == "json":
        text = dumps({"meta": meta, "columns": list(columns), "rows": rows}) + "\n"
    else:
        text = format_csv(meta, columns, rows)
    if cfg.output:
        path = Path(cfg.output)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, meta: dict, payload) -> None:
    if cfg.output:
        write_json(cfg.output, meta, payload)
    else:
        sys.stdout.write(dumps({"meta": meta, "data": payload}) + "\n")


def _meta(cfg: RunConfig, command: str, **extra) -> dict:
    return metadata(cfg.params, cfg.params.theta, command=command, **extra)


def cmd_spectrum(cfg: RunConfig) -> int:
    d = cfg.derived
    d.require_inverted()
    top = int(cfg.options["n"]) or 5
    rows = []
    for branch in (Branch.MINUS, Branch.PLUS):
        for n in range(top + 1):
            e = eigenvalue(EigenstateId(n, branch, Side.TILDE), d, cfg.params.theta).value
            rows.append((n, branch.symbol, e.real, e.imag))
    _emit(cfg, _meta(cfg, "spectrum"), ["n", "branch", "re_E", "im_E"], rows)
    return 0


def cmd_evolve(cfg: RunConfig) -> int:
    d = cfg.derived
    d.require_inverted()
    theta, t = cfg.params.theta, float(cfg.options["t"])
    x = default_grid(d, t, cfg.grid or 401)
    kind = cfg.options["kind"]
    if kind in ("eigen", "n"):
        n = int(cfg.options["n"])
        eid = EigenstateId(n, cfg.options["branch"], Side.TILDE)
        base = lambda y: eigenfunction(eid, d, theta, y)
        label = {"eigenstate": n, "branch": Branch.parse(cfg.options["branch"]).symbol}
    else:
        kind = PacketKind.parse(kind)
        base = lambda y: packet_evolved_closed(kind, Side.TILDE, d, theta, y, 0.0)
        label = {"kind": kind.value}
    if cfg.options["method"] == "quadrature" or "eigenstate" in label:
        values = base(x) if t == 0 else evolve_quadrature(
            ComplexField.from_function(base, x, theta), d, theta, t, cfg.quad).values
        method = "quadrature"
    else:
        values = packet_evolved_closed(kind, Side.TILDE, d, theta, x, t)
        method = "closed"
    _emit(cfg, _meta(cfg, "evolve", t=t, method=method, **label), ["x", "re_f", "im_f"],
          zip(x, np.real(values), np.imag(values)))
    return 0


def cmd_wigner(cfg: RunConfig) -> int:
    d = cfg.derived
    n = int(cfg.options["n"])
    m = n if cfg.options["m"] is None else int(cfg.options["m"])
    t = float(cfg.options["t"]) if cfg.options["t"] is not None else 0.0
    xs, ps = default_axes(d, cfg.grid or 201, cfg.span)
    grid = wigner_grid(d, cfg.params.theta, xs, ps, m, n, cfg.options["branch"], t)
    xx, pp = np.meshgrid(xs, ps, indexing="ij")
    meta = _meta(cfg, "wigner", t=t, n=n, m=m,
                 branch=Branch.parse(cfg.options["branch"]).symbol)
    _emit(cfg, meta, ["x", "p", "re_W", "im_W"],
          zip(xx.ravel(), pp.ravel(), grid.values.real.ravel(), grid.values.imag.ravel()))
    return 0


def _family(cfg: RunConfig):
    omegas = _floats(cfg.options["omega_list"])
    if omegas is None:
        return [(cfg.derived, cfg.params)]
    out = []
    for w in omegas:
        p = ModelParams.from_omega_abs(w, alpha=cfg.params.alpha, omega=cfg.params.omega,
                                       hbar=cfg.params.hbar, b0=cfg.params.b0,
                                       theta=cfg.params.theta)
        out.append((derive_quantities(p), p))
    return out


def cmd_survival(cfg: RunConfig) -> int:
    kind = PacketKind.parse(cfg.options["kind"])
    rows = []
    for d, p in _family(cfg):
        d.require_inverted()
        for t in _times(cfg, d.omega_abs):
            if cfg.options["method"] == "quadrature":
                value = survival_general(kind, d, p.theta, float(t), cfg.quad)
            else:
                value = float(survival_probability(kind, t, d.omega_abs))
            rows.append((d.omega_abs, float(t), value))
    _emit(cfg, _meta(cfg, "survival", kind=kind.value, method=cfg.options["method"]),
          ["omega_abs", "t", "P"], rows)
    return 0


def cmd_density(cfg: RunConfig) -> int:
    d = cfg.derived
    d.require_inverted()
    kind = PacketKind.parse(cfg.options["kind"])
    t = float(cfg.options["t"])
    x = default_grid(d, t, cfg.grid or 401)
    rho = density_x(kind, d, cfg.params.theta, x, t)
    _emit(cfg, _meta(cfg, "density", kind=kind.value, t=t), ["x", "re_rho", "im_rho"],
          zip(x, np.real(rho), np.imag(rho)))
    return 0


def cmd_persistence(cfg: RunConfig) -> int:
    kind = PacketKind.parse(cfg.options["kind"])
    L = float(cfg.options["L"])
    rows = []
    for d, p in _family(cfg):
        d.require_inverted()
        for t in _times(cfg, d.omega_abs):
            q = complex(persistence_Q(kind, d, p.theta, L, float(t)))
            rows.append((d.omega_abs, float(t), q.real, q.imag))
    _emit(cfg, _meta(cfg, "persistence", kind=kind.value, L=L),
          ["omega_abs", "t", "re_Q", "im_Q"], rows)
    return 0


def cmd_moments(cfg: RunConfig) -> int:
    d = cfg.derived
    d.require_inverted()
    kind = PacketKind.parse(cfg.options["kind"])
    rows = []
    for t in _times(cfg, d.omega_abs):
        mo = moments(kind, float(t), d.omega_abs)
        rows.append((float(t), mo.mean_X, mo.mean_X2, mo.var_X))
    _emit(cfg, _meta(cfg, "moments", kind=kind.value, variable="X"),
          ["t", "mean_X", "mean_X2", "var_X"], rows)
    return 0


def cmd_rhs_compare(cfg: RunConfig) -> int:
    d = cfg.derived
    times = _floats(cfg.options["t_list"]) or [0.0, 1.0 / d.omega_abs, 2.0 / d.omega_abs]
    report = csm_rhs_equivalence_report(d, times, [float(cfg.options["L"])])
    _emit_json(cfg, _meta(cfg, "rhs-compare", theta_compare=math.pi / 4), report)
    return 0


def cmd_conformance(cfg: RunConfig) -> int:
    report = run_conformance(cfg.params, quick=bool(cfg.options.get("quick")))
    _emit_json(cfg, _meta(cfg, "conformance"), report)
    return 0 if report["passed"] else EXIT_TOLERANCE


def cmd_figure(cfg: RunConfig, preset: str) -> int:
    paths = figures.write_figure(preset, cfg.output or ".", cfg.grid)
    for path in paths:
        sys.stdout.write(f"{path}\n")
    return 0


COMMANDS = {
    "spectrum": (cmd_spectrum, "discrete resonance energies"),
    "evolve": (cmd_evolve, "evolved packet or eigenstate on a grid"),
    "wigner": (cmd_wigner, "W_mn on an (x, p) grid"),
    "survival": (cmd_survival, "survival probability versus time"),
    "density": (cmd_density, "packet density versus x"),
    "persistence": (cmd_persistence, "probability of remaining in [-L, L]"),
    "moments": (cmd_moments, "first and second moments of X"),
    "rhs-compare": (cmd_rhs_compare, "series versus complex-scaled comparison report"),
    "conformance": (cmd_conformance, "run the invariant suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file")
    for name in ("omega", "alpha", "beta", "hbar", "b0"):
        common.add_argument(f"--{name}")
    common.add_argument("--theta", help="radians, or pi/4, pi/2")
    common.add_argument("--t", help="time")
    common.add_argument("--t-list", dest="t_list", help="comma-separated times")
    common.add_argument("--L", help="half width of the persistence window")
    common.add_argument("--n")
    common.add_argument("--m")
    common.add_argument("--branch", help="+ or -")
    common.add_argument("--kind", help="c, s, g, or eigen")
    common.add_argument("--omega-list", dest="omega_list", help="comma-separated |Omega| sweep")
    common.add_argument("--grid", help="points per axis")
    common.add_argument("--span")
    common.add_argument("--method", help="closed or quadrature")
    common.add_argument("--quad-rule", dest="quad_rule", choices=["gl", "trapezoid"])
    for name in ("panels", "order", "abs-tol", "rel-tol", "half-width"):
        common.add_argument(f"--quad-{name}", dest=f"quad_{name.replace('-', '_')}")
    common.add_argument("--out", help="output file (directory for figures)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--quick", action="store_true", help="smaller conformance grids")

    parser = argparse.ArgumentParser(prog="swanson-csm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    for name in FIGURES:
        sub.add_parser(name, parents=[common], help=f"data for the {name} preset")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        cfg.options["quick"] = args.quick
        if args.command in FIGURES:
            return cmd_figure(cfg, args.command)
        return COMMANDS[args.command][0](cfg)
    except (RegionError, DegenerateParameters) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_REGION
    except (ToleranceNotReached, TruncationInsufficient) as exc:
        sys.stderr.write(f"tolerance failure: {exc}\n")
        return EXIT_TOLERANCE
    except (IoError, OSError) as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_IO
    except (SwansonError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_REGION


if __name__ == "__main__":
    sys.exit(main())
