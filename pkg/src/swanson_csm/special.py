"""Complex-argument special functions and a line-quadrature engine."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable

import mpmath
import numpy as np
from scipy import special as sp

from .errors import (DegreeTooLarge, OutOfAccuracyEnvelope, SeriesNonConvergent,
                     ToleranceNotReached)

N_MAX = 200
ERF_IMAG_ENVELOPE = 30.0
PCFD_Z_ENVELOPE = 20.0
PCFD_NU_ENVELOPE = 50.0


def _check_degree(n: int, n_max: int) -> None:
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    if n > n_max:
        raise DegreeTooLarge(f"degree {n} exceeds maximum {n_max}")


def hermite(n: int, z, n_max: int = N_MAX):
    """Physicists' Hermite polynomial ``H_n(z)`` by three-term recurrence.

    Parameters
    ----------
    n : int
        Degree, ``0 <= n <= n_max``.
    z : complex or array_like
        Argument(s).

    Returns
    -------
    complex or ndarray
    """
    _check_degree(n, n_max)
    z = np.asarray(z, dtype=complex)
    h_prev = np.ones_like(z)
    if n == 0:
        return h_prev[()]
    h = 2.0 * z
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return h[()]


def hermite_functions(n_top: int, z, n_max: int = N_MAX) -> np.ndarray:
    """Normalized Hermite functions ``h_k(z) = exp(-z^2/2) H_k(z) / sqrt(2^k k! sqrt(pi))``.

    Uses the scaled recurrence, so nothing overflows for large ``k``.

    Returns
    -------
    ndarray, shape ``(n_top + 1,) + z.shape``
    """
    _check_degree(n_top, n_max)
    z = np.asarray(z, dtype=complex)
    out = np.empty((n_top + 1,) + z.shape, dtype=complex)
    out[0] = np.exp(-0.5 * z * z) * math.pi ** -0.25
    if n_top >= 1:
        out[1] = math.sqrt(2.0) * z * out[0]
    for k in range(1, n_top):
        out[k + 1] = (math.sqrt(2.0 / (k + 1)) * z * out[k]
                      - math.sqrt(k / (k + 1)) * out[k - 1])
    return out


def assoc_laguerre(n: int, k: int, z, n_max: int = N_MAX):
    """Generalized Laguerre polynomial ``L_n^k(z)`` by forward recurrence in ``n``."""
    _check_degree(n, n_max)
    if n + k < 0:
        raise ValueError("assoc_laguerre requires n + k >= 0")
    z = np.asarray(z, dtype=complex)
    l_prev = np.ones_like(z)
    if n == 0:
        return l_prev[()]
    ell = 1.0 + k - z
    for j in range(1, n):
        l_prev, ell = ell, ((2 * j + 1 + k - z) * ell - (j + k) * l_prev) / (j + 1)
    return ell[()]


def erf_complex(z):
    """Error function of complex argument.

    Delegates to :func:`scipy.special.erf` (Faddeeva-based) and rejects
    arguments with ``|Im z| > 30``, where ``exp(-z^2)`` overflows.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z.imag) > ERF_IMAG_ENVELOPE):
        raise OutOfAccuracyEnvelope(f"|Im z| exceeds {ERF_IMAG_ENVELOPE}")
    return sp.erf(z)[()]


def _pcfd_terms(nu, z):
    w = z * z / 2
    damp = mpmath.exp(-w / 2)
    half = mpmath.mpf(1) / 2
    return [
        ([2, damp, mpmath.sqrt(mpmath.pi)], [nu / 2, 1, 1], [], [(1 - nu) / 2],
         [-nu / 2], [half], w),
        ([2, damp, -mpmath.sqrt(2 * mpmath.pi) * z], [nu / 2, 1, 1], [], [-nu / 2],
         [(1 - nu) / 2], [3 * half], w),
    ]


def _pcfd_scalar(nu: complex, z: complex, max_terms: int) -> complex:
    try:
        value = mpmath.hypercomb(_pcfd_terms, [mpmath.mpc(nu), mpmath.mpc(z)],
                                 maxterms=max_terms)
    except mpmath.libmp.NoConvergence as exc:
        raise SeriesNonConvergent(str(exc)) from exc
    return complex(value)


def parabolic_cylinder_D(nu, z, check: bool = False, max_terms: int = 6000):
    """Parabolic cylinder function ``D_nu(z)`` from its Kummer-series form.

    ``D_nu(z) = 2^{nu/2} e^{-z^2/4} [ sqrt(pi)/Gamma((1-nu)/2) M(-nu/2, 1/2, z^2/2)
    - sqrt(2 pi) z / Gamma(-nu/2) M((1-nu)/2, 3/2, z^2/2) ]``.

    The two terms cancel to about ``exp(-|z|^2/2)`` of their size.  The Kummer
    sums are therefore evaluated with :func:`mpmath.hypercomb`, which raises
    the working precision until the combination is accurate; the result is
    returned in double precision.

    Parameters
    ----------
    nu, z : complex or array_like
        Order and argument, broadcast together.  Envelope: ``|z| <= 20``,
        ``|nu| <= 50``.
    check : bool
        Also evaluate ``D_{nu+1}`` and ``D_{nu-1}`` and require the recurrence
        ``D_{nu+1} - z D_nu + nu D_{nu-1} = 0`` to hold to ``1e-8`` relative.

    Raises
    ------
    OutOfAccuracyEnvelope, SeriesNonConvergent
    """
    nu_a, z_a = np.broadcast_arrays(np.asarray(nu, dtype=complex), np.asarray(z, dtype=complex))
    if np.any(np.abs(z_a) > PCFD_Z_ENVELOPE):
        raise OutOfAccuracyEnvelope(f"|z| exceeds {PCFD_Z_ENVELOPE}")
    if np.any(np.abs(nu_a) > PCFD_NU_ENVELOPE):
        raise OutOfAccuracyEnvelope(f"|nu| exceeds {PCFD_NU_ENVELOPE}")
    out = np.empty(nu_a.shape, dtype=complex)
    for idx in np.ndindex(nu_a.shape):
        n_i, z_i = complex(nu_a[idx]), complex(z_a[idx])
        value = _pcfd_scalar(n_i, z_i, max_terms)
        if check:
            up = _pcfd_scalar(n_i + 1, z_i, max_terms)
            down = _pcfd_scalar(n_i - 1, z_i, max_terms)
            scale = max(abs(up), abs(z_i * value), abs(n_i * down), 1e-300)
            if abs(up - z_i * value + n_i * down) > 1e-8 * scale:
                raise SeriesNonConvergent("recurrence consistency check failed")
        out[idx] = value
    return out[()]


class QuadratureRule(enum.Enum):
    GAUSS_LEGENDRE_PANELS = "GaussLegendrePanels"
    TRAPEZOID_REFINED = "TrapezoidRefined"


@dataclass(frozen=True)
class QuadraturePolicy:
    """Settings for :func:`integrate_line`.

    Parameters
    ----------
    rule : QuadratureRule
        Panel Gauss-Legendre (default) or step-halving trapezoid.
    half_width : float or None
        Integrate over ``[center - L, center + L]``.  ``None`` lets each
        caller pick ``L`` from the integrand's Gaussian envelope.
    panels : int
        Initial number of panels (GL) or initial intervals / order (trapezoid).
    order : int
        Gauss-Legendre nodes per panel.
    abs_tol, rel_tol : float
        Accept once the refinement difference is below
        ``max(abs_tol, rel_tol * |value|)``.
    max_refinements : int
        Panel doublings before giving up.
    half_width_scale : float
        Multiplier applied to caller-chosen envelope half widths.
    """

    rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE_PANELS
    half_width: float | None = None
    panels: int = 16
    order: int = 64
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_refinements: int = 6
    half_width_scale: float = 1.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.panels < 1 or self.order < 2:
            raise ValueError("panels must be >= 1 and order >= 2")
        if self.half_width is not None and self.half_width <= 0:
            raise ValueError("half_width must be positive")

    def with_(self, **changes) -> "QuadraturePolicy":
        return replace(self, **changes)


DEFAULT_POLICY = QuadraturePolicy()

ENVELOPE_LOG = -math.log(1e-18)


def gaussian_half_width(c: float, extra: float = 0.0) -> float:
    """Half width ``L`` with ``exp(-c L^2) < 1e-18``, plus ``extra`` for off-centre mass."""
    if c <= 0:
        raise ValueError("envelope coefficient must be positive")
    return math.sqrt(ENVELOPE_LOG / c) + extra


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(order: int):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _gl_sum(f, a, b, panels, order):
    x, w = _gl(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    vals = np.asarray(f(nodes))
    return vals @ weights, np.abs(vals) @ weights, nodes.size


def _trap_sum(f, a, b, intervals):
    nodes = np.linspace(a, b, intervals + 1)
    weights = np.full(nodes.size, (b - a) / intervals)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    vals = np.asarray(f(nodes))
    return vals @ weights, np.abs(vals) @ weights, nodes.size


ROUNDOFF_FACTOR = 50 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | np.ndarray
    error: float
    evaluations: int


def integrate_line(f: Callable, policy: QuadraturePolicy = DEFAULT_POLICY, *,
                   center: float = 0.0, half_width: float | None = None,
                   a: float | None = None, b: float | None = None,
                   full_output: bool = False):
    """Integrate ``f`` over a finite interval of the real line.

    ``f`` is called with a 1-D array of nodes and must return values whose
    last axis runs over the nodes, so vector- or matrix-valued integrands are
    integrated in one sweep.

    The interval is ``[a, b]`` if given, else ``center +- L`` with ``L`` taken
    from ``policy.half_width`` or the ``half_width`` argument (scaled by
    ``policy.half_width_scale``).  Panels are doubled until two successive
    estimates agree to ``max(abs_tol, rel_tol |value|)`` componentwise.

    Returns
    -------
    complex or ndarray, or QuadratureResult if ``full_output``.

    Raises
    ------
    ToleranceNotReached
    """
    if a is None or b is None:
        width = policy.half_width if policy.half_width is not None else half_width
        if width is None:
            raise ValueError("no integration half width given")
        width *= policy.half_width_scale
        a, b = center - width, center + width
    if policy.rule is QuadratureRule.GAUSS_LEGENDRE_PANELS:
        step = lambda k: _gl_sum(f, a, b, policy.panels * 2 ** k, policy.order)
    else:
        step = lambda k: _trap_sum(f, a, b, policy.panels * policy.order * 2 ** k)
    prev, _, evals = step(0)
    for k in range(1, policy.max_refinements + 1):
        cur, mass, n = step(k)
        evals += n
        diff = np.abs(cur - prev)
        bound = np.maximum(policy.abs_tol, policy.rel_tol * np.abs(cur)) + ROUNDOFF_FACTOR * mass
        if np.all(diff <= bound):
            if full_output:
                return QuadratureResult(cur, float(np.max(diff)), evals)
            return cur
        prev = cur
    raise ToleranceNotReached(
        f"quadrature change {float(np.max(diff)):.3e} above tolerance after "
        f"{policy.max_refinements} refinements")
