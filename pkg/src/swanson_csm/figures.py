"""Data behind the five published figure presets (data only, no plotting)."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .io import metadata, write_csv
from .model import Branch, ModelParams, derive_quantities
from .packets import PacketKind, density_closed, peak_centres, persistence_scaled, \
    survival_probability
from .wigner import PhaseSpaceGrid, default_axes, wigner_grid

THETA = math.pi / 4
ROOT_HALF = math.sqrt(0.5)
ROOT_101 = math.sqrt(101.0) / 20.0
# panel -> (alpha, beta) at omega = 1; (a)-(c) have |Omega| = 1, (d)-(f) |Omega| = 0.1
WIGNER_SETS = {
    "a": (-2.0, -0.25),
    "b": (-1.0, -0.5),
    "c": (-ROOT_HALF, -ROOT_HALF),
    "d": (-2.0, -101.0 / 800.0),
    "e": (-1.0, -101.0 / 400.0),
    "f": (-ROOT_101, -ROOT_101),
}
SURVIVAL_FAMILY = (0.5, 0.4, 0.3, 0.2, 0.1, 0.01)
DENSITY_TIMES = (0.0, 3.0, 4.0)
PERSISTENCE_L = 200.0
KINDS = (PacketKind.COSH, PacketKind.SINH, PacketKind.GAUSSIAN)
KIND_PANEL = {PacketKind.COSH: "a", PacketKind.SINH: "b", PacketKind.GAUSSIAN: "c"}


def wigner_panels(n: int, points: int = 201, span: float = 6.0) -> dict[str, PhaseSpaceGrid]:
    """Diagonal ``W_nn`` (minus branch, ``theta = pi/4``) for the six coupling sets."""
    out = {}
    for panel, (alpha, beta) in WIGNER_SETS.items():
        params = ModelParams(omega=1.0, alpha=alpha, beta=beta, theta=THETA)
        d = derive_quantities(params)
        xs, ps = default_axes(d, points, span)
        grid = wigner_grid(d, THETA, xs, ps, n, n, Branch.MINUS)
        grid.meta.update(params=params, omega_abs=d.omega_abs, panel=panel)
        out[panel] = grid
    return out


def survival_curves(points: int = 101, t_max: float | None = None):
    """``{kind: [(|Omega|, t, log P)]}`` for the six-member family.

    ``t`` runs over ``[0, 5/|Omega|]`` per curve unless ``t_max`` is given.
    """
    out = {}
    for kind in KINDS:
        curves = []
        for w in SURVIVAL_FAMILY:
            t = np.linspace(0.0, t_max if t_max is not None else 5.0 / w, points)
            curves.append((w, t, np.log(survival_probability(kind, t, w))))
        out[kind] = curves
    return out


def density_profiles(points: int = 1201, span: float = 60.0, times=DENSITY_TIMES):
    """``{kind: (X, [rho_X at each tau])}`` with ``tau = |Omega| t``."""
    X = np.linspace(-span, span, points)
    return {kind: (X, [np.real(density_closed(kind, X, tau)) for tau in times])
            for kind in KINDS}


def centre_traces(points: int = 101, tau_max: float = 5.0):
    """``{kind: [(tau, centre), ...]}`` for every local maximum of ``rho_X``."""
    out = {}
    for kind in KINDS:
        rows = []
        for tau in np.linspace(0.0, tau_max, points):
            for c in peak_centres(kind, tau):
                rows.append((float(tau), float(c)))
        out[kind] = rows
    return out


def persistence_map(omega_points: int = 51, t_points: int = 101, t_max: float = 50.0,
                    L: float = PERSISTENCE_L):
    """``{kind: (|Omega| axis, t axis, Q[|Omega|, t])}`` with ``L`` in the scaled variable."""
    omegas = np.linspace(0.01, 0.5, omega_points)
    times = np.linspace(0.0, t_max, t_points)
    tau = omegas[:, None] * times[None, :]
    return {kind: (omegas, times, np.real(persistence_scaled(kind, L, tau)))
            for kind in KINDS}


def write_figure(preset: str, out_dir, points: int | None = None) -> list[Path]:
    """Write one CSV per panel of ``preset`` into ``out_dir``; return the paths."""
    out_dir = Path(out_dir)
    paths = []
    if preset in ("fig1", "fig2"):
        n = 0 if preset == "fig1" else 2
        for panel, grid in wigner_panels(n, points or 201).items():
            meta = metadata(grid.meta["params"], THETA, figure=preset, panel=panel, n=n, m=n,
                            branch="-", t=0.0, omega_abs=grid.meta["omega_abs"])
            xx, pp = np.meshgrid(grid.x_axis, grid.p_axis, indexing="ij")
            rows = zip(xx.ravel(), pp.ravel(), grid.values.real.ravel(),
                       grid.values.imag.ravel())
            paths.append(write_csv(out_dir / f"{preset}_{panel}.csv", meta,
                                   ["x", "p", "re_W", "im_W"], rows))
    elif preset == "fig3":
        for kind, curves in survival_curves(points or 101).items():
            rows = [(w, ti, lp) for w, t, lp in curves for ti, lp in zip(t, lp)]
            meta = metadata(None, THETA, figure=preset, panel=KIND_PANEL[kind], kind=kind.value,
                            family="alpha=-1, beta=-(1+|Omega|^2)/4, omega=1")
            paths.append(write_csv(out_dir / f"fig3_{KIND_PANEL[kind]}.csv", meta,
                                   ["omega_abs", "t", "log_P"], rows))
    elif preset == "fig4":
        profiles = density_profiles(points or 1201)
        traces = centre_traces()
        for kind in KINDS:
            X, rhos = profiles[kind]
            rows = [(x, *vals) for x, *vals in zip(X, *rhos)]
            meta = metadata(None, THETA, figure=preset, panel=KIND_PANEL[kind], kind=kind.value,
                            tau=list(DENSITY_TIMES), variable="X = |sigma| x / b0")
            paths.append(write_csv(out_dir / f"fig4_{KIND_PANEL[kind]}.csv", meta,
                                   ["X"] + [f"rho_tau{tau:g}" for tau in DENSITY_TIMES], rows))
            panel = chr(ord(KIND_PANEL[kind]) + 3)
            meta = metadata(None, THETA, figure=preset, panel=panel, kind=kind.value)
            paths.append(write_csv(out_dir / f"fig4_{panel}.csv", meta, ["tau", "centre_X"],
                                   traces[kind]))
    elif preset == "fig5":
        for kind, (omegas, times, Q) in persistence_map().items():
            rows = [(w, t, Q[i, j]) for i, w in enumerate(omegas) for j, t in enumerate(times)]
            meta = metadata(None, THETA, figure=preset, panel=KIND_PANEL[kind], kind=kind.value,
                            L=PERSISTENCE_L, L_variable="scaled, ell = |sigma| L / b0")
            paths.append(write_csv(out_dir / f"fig5_{KIND_PANEL[kind]}.csv", meta,
                                   ["omega_abs", "t", "Q"], rows))
    else:
        raise ValueError(f"unknown figure preset {preset!r}")
    return paths
