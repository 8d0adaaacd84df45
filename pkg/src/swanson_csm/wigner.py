"""Wigner functions of bi-orthogonal pairs.

The raw phase-space function of a pair ``(fbar, ftilde)`` is

    W(x, p) = int conj(fbar(x + y/2)) ftilde(x - y/2) exp(i p y / hbar) dy

so that ``int W dp / (2 pi hbar) = conj(fbar(x)) ftilde(x)``.  The closed
forms are written in the scaled coordinates

    X = s x,   P = (p/hbar + i gamma e^{2 i theta} x / b0^2) / s

with ``s`` the Hermite argument scale of the branch (``s = e^{i(theta-pi/4)}|sigma|/b0``
on the minus branch) and ``u = P - i X``, ``v = P + i X``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .eigen import reduced_scale
from .errors import RegionError
from .model import Branch, DerivedQuantities
from .packets import PacketKind
from .propagator import ComplexField
from .special import (DEFAULT_POLICY, N_MAX, QuadraturePolicy, _check_degree, assoc_laguerre,
                      integrate_line)


@dataclass
class PhaseSpaceGrid:
    """Wigner samples on an ``(x, p)`` lattice.

    Attributes
    ----------
    x_axis, p_axis : ndarray
        Strictly increasing axes.
    values : ndarray
        Complex samples of shape ``(len(x_axis), len(p_axis))``.
    theta, time : float
        Scaling angle and physical time.
    func : callable or None
        ``func(x, p)`` evaluating the same function off the lattice.
    meta : dict
        Provenance.
    """

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    theta: float
    time: float = 0.0
    func: Callable | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_axis = np.asarray(self.x_axis, dtype=float)
        self.p_axis = np.asarray(self.p_axis, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        for name in ("x_axis", "p_axis"):
            axis = getattr(self, name)
            if axis.ndim != 1 or (axis.size > 1 and not np.all(np.diff(axis) > 0)):
                raise ValueError(f"{name} must be 1-D and strictly increasing")
        if self.values.shape != (self.x_axis.size, self.p_axis.size):
            raise ValueError("values must have shape (len(x_axis), len(p_axis))")

    @classmethod
    def from_function(cls, func: Callable, x_axis, p_axis, theta: float, time: float = 0.0,
                      **meta) -> "PhaseSpaceGrid":
        xx, pp = np.meshgrid(np.asarray(x_axis, float), np.asarray(p_axis, float),
                             indexing="ij")
        return cls(x_axis, p_axis, func(xx, pp), theta, time, func, dict(meta))


@dataclass(frozen=True)
class UVCoords:
    u: complex
    v: complex


def _scale(d: DerivedQuantities, theta: float, branch) -> complex:
    d.require_inverted()
    return reduced_scale(d, theta, branch)


def ps_coords(d: DerivedQuantities, theta: float, x, p, branch=Branch.MINUS):
    """Scaled phase-space coordinates ``(P, X)`` of the given branch."""
    s = _scale(d, theta, branch)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    kick = 1j * d.gamma * cmath.exp(2j * theta) * x / d.b0 ** 2
    return ((p / d.hbar + kick) / s)[()], (s * x)[()]


def uv_coords(d: DerivedQuantities, theta: float, x, p, branch=Branch.MINUS) -> UVCoords:
    """``u = P - i X`` and ``v = P + i X``."""
    P, X = ps_coords(d, theta, x, p, branch)
    return UVCoords(P - 1j * X, P + 1j * X)


def _wmn_uv(m: int, n: int, u, v):
    """Raw Wigner function of ``h_m`` against ``h_n`` (unit scale) in ``u, v``."""
    uv = u * v
    if m <= n:
        k = n - m
        pref = 2.0 * (-1) ** m * math.sqrt(math.factorial(m) / math.factorial(n))
        return pref * np.exp(-uv) * (-1j * math.sqrt(2.0) * v) ** k * assoc_laguerre(m, k, 2 * uv)
    k = m - n
    pref = 2.0 * (-1) ** n * math.sqrt(math.factorial(n) / math.factorial(m))
    return pref * np.exp(-uv) * (1j * math.sqrt(2.0) * u) ** k * assoc_laguerre(n, k, 2 * uv)


def wigner_mn(d: DerivedQuantities, theta: float, m: int, n: int, branch, x, p,
              t: float = 0.0, n_max: int = N_MAX):
    """Closed-form raw Wigner function of ``(psibar_m(t), phitilde_n(t))``.

    The time dependence is ``exp(-+ (n - m) |Omega| t)`` for the ``-+`` branch,
    so the diagonal ``m = n`` is time independent.

    Raises
    ------
    DegreeTooLarge
        If ``max(m, n) > n_max``.
    RegionError
        Outside the inverted-oscillator region.
    """
    _check_degree(max(m, n), n_max)
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    branch = Branch.parse(branch)
    uv = uv_coords(d, theta, x, p, branch)
    w = _wmn_uv(m, n, uv.u, uv.v)
    if m != n:
        w = w * math.exp(branch * (n - m) * d.omega_abs * t)
    return w[()] if isinstance(w, np.ndarray) else w


def wigner_packet_closed(kind, P, X, t: float, omega_abs: float = 1.0):
    """Packet Wigner function on the minus branch, normalized to unit ``dX dP`` integral.

    Equals the raw function divided by ``2 pi`` (``hbar`` and the Jacobian of
    ``(x, p) -> (X, P)`` drop out at ``theta = pi/4``).
    """
    kind = PacketKind.parse(kind)
    P = np.asarray(P, dtype=complex)
    X = np.asarray(X, dtype=complex)
    tau = omega_abs * t
    ch, sh = math.cosh(tau), math.sinh(tau)
    if kind is PacketKind.GAUSSIAN:
        out = np.exp(-(P - 2j * sh) ** 2 - (X - 2 * ch) ** 2) / math.pi
    else:
        base = np.exp(-P * P - X * X) / (2 * math.pi)
        near = math.e ** 2 * np.cosh(4 * X * sh + 4j * P * ch)
        far = math.e ** -2 * np.cosh(4 * X * ch + 4j * P * sh)
        if kind is PacketKind.COSH:
            out = base * (near + far) / math.cosh(2)
        else:
            out = base * (far - near) / math.sinh(2)
    return out[()]


def wigner_packet_raw(kind, d: DerivedQuantities, theta: float, x, p, t: float):
    """Raw packet Wigner function at physical ``(x, p)``; ``theta = pi/4`` only."""
    if not math.isclose(theta, math.pi / 4, abs_tol=1e-14):
        raise RegionError("packet Wigner closed forms hold at theta = pi/4")
    P, X = ps_coords(d, theta, x, p)
    return 2 * math.pi * wigner_packet_closed(kind, P, X, t, d.omega_abs)


def _as_callable(f) -> Callable:
    if isinstance(f, ComplexField):
        if f.func is not None:
            return f.func
        xs, vs = f.x, f.values
        return lambda y: (np.interp(y, xs, vs.real, left=0.0, right=0.0)
                          + 1j * np.interp(y, xs, vs.imag, left=0.0, right=0.0))
    return f


def y_half_width(d: DerivedQuantities, t: float = 0.0, theta: float = math.pi / 4,
                 x: float = 0.0) -> float:
    """Relative-coordinate half width.

    At least ``12 b0/|sigma| e^{|Omega| t}``.  Away from ``theta = pi/4`` the
    dressing adds a factor ``exp(-gamma cos(2 theta) x y / b0^2)``, so the width
    is widened until the Gaussian decay ``|sin(2 theta)| |sigma|^2 y^2 / (4 b0^2)``
    beats it by ``e^{-40}``.
    """
    base = 12.0 * d.b0 / d.sigma_abs
    a = max(abs(math.sin(2 * theta)), 1e-3) * d.sigma_abs ** 2 / (4 * d.b0 ** 2)
    c = abs(d.gamma * math.cos(2 * theta) * x) / d.b0 ** 2
    width = max(base, (c + math.sqrt(c * c + 160.0 * a)) / (2 * a))
    return width * math.exp(d.omega_abs * max(t, 0.0))


def wigner_numeric(fbar, ftilde, d: DerivedQuantities, theta: float, x, p,
                   policy: QuadraturePolicy = DEFAULT_POLICY, t: float | None = None):
    """Raw Wigner function by quadrature over the relative coordinate.

    Parameters
    ----------
    fbar, ftilde : ComplexField or callable
        Bar and tilde members of the pair.  Sampled fields without an analytic
        representation are interpolated linearly.
    x, p : array_like
        Points (broadcast together).
    t : float, optional
        Time used for the default half width; read from ``ftilde`` if omitted.

    Raises
    ------
    ToleranceNotReached
        If the y-quadrature does not converge.
    """
    if t is None:
        t = ftilde.time if isinstance(ftilde, ComplexField) else 0.0
    fb, ft = _as_callable(fbar), _as_callable(ftilde)
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    out = np.empty(x.shape, dtype=complex)
    flat_x, flat_p, flat_out = x.ravel(), p.ravel(), out.ravel()
    for xv in np.unique(flat_x):
        idx = np.nonzero(flat_x == xv)[0]
        pk = flat_p[idx][:, None] / d.hbar

        def integrand(y, xv=xv, pk=pk):
            pair = np.conj(fb(xv + 0.5 * y)) * ft(xv - 0.5 * y)
            return pair[None, :] * np.exp(1j * pk * y[None, :])

        half = y_half_width(d, t, theta, xv)
        flat_out[idx] = integrate_line(integrand, policy, center=0.0, half_width=half)
    return out[()]


def wigner_grid(d: DerivedQuantities, theta: float, x_axis, p_axis, m: int = 0, n: int = 0,
                branch=Branch.MINUS, t: float = 0.0) -> PhaseSpaceGrid:
    """:func:`wigner_mn` sampled on a lattice."""
    func = lambda x, p: wigner_mn(d, theta, m, n, branch, x, p, t)
    return PhaseSpaceGrid.from_function(func, x_axis, p_axis, theta, t, m=m, n=n,
                                        branch=Branch.parse(branch).symbol)


def default_axes(d: DerivedQuantities, points: int = 201, span: float = 6.0,
                 stretch: bool = False):
    """``x, p`` axes over ``[-span, span]`` in units ``b0/|sigma|`` and ``hbar |sigma|/b0``.

    With ``stretch`` both axes are widened by ``max(1, |gamma|/|sigma|^2)``, the
    elongation of the ground-state ellipse.
    """
    factor = max(1.0, abs(d.gamma) / d.sigma_abs ** 2) if stretch else 1.0
    grid = np.linspace(-span, span, points) * factor
    return grid * d.b0 / d.sigma_abs, grid * d.hbar * d.sigma_abs / d.b0


def density_from_wigner(grid: PhaseSpaceGrid, policy: QuadraturePolicy | None = None,
                        hbar: float = 1.0, half_width: float | None = None):
    """Marginal ``int W dp / (2 pi hbar)`` for each ``x`` of the grid.

    With ``policy`` and an analytic ``grid.func`` the p-integral is adaptive over
    ``[-half_width, half_width]`` (default: the grid's p extent); otherwise
    Simpson's rule on the samples is used.
    """
    if policy is None or grid.func is None:
        return simpson(grid.values, x=grid.p_axis, axis=1) / (2 * math.pi * hbar)
    if half_width is None:
        half_width = float(np.max(np.abs(grid.p_axis)))
    xs = grid.x_axis[:, None]
    value = integrate_line(lambda p: grid.func(xs, p[None, :]), policy, center=0.0,
                           half_width=half_width)
    return value / (2 * math.pi * hbar)


def principal_axis(grid: PhaseSpaceGrid) -> float:
    """Slope ``dx/dp`` of the major axis from the second moments of ``Re W``."""
    w = grid.values.real
    xx, pp = np.meshgrid(grid.x_axis, grid.p_axis, indexing="ij")

    def integ(a):
        return simpson(simpson(a, x=grid.p_axis, axis=1), x=grid.x_axis)

    norm = integ(w)
    mx, mp = integ(xx * w) / norm, integ(pp * w) / norm
    cxx = integ((xx - mx) ** 2 * w) / norm
    cpp = integ((pp - mp) ** 2 * w) / norm
    cxp = integ((xx - mx) * (pp - mp) * w) / norm
    evals, evecs = np.linalg.eigh(np.array([[cxx, cxp], [cxp, cpp]]))
    vx, vp = evecs[:, int(np.argmax(evals))]
    return math.inf if vp == 0 else float(vx / vp)
