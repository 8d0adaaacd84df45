"""Response-function kernels and time evolution of bi-orthogonal pairs.

The propagator of the transformed Hamiltonian in the inverted region is

    K(theta, x, x', t) = e^{i(theta-pi/4)} |sigma| / (b0 sqrt(2 pi sinh tau))
        * exp(i |sigma|^2 e^{2i theta} ((x^2 + x'^2) cosh tau - 2 x x') / (2 b0^2 sinh tau))

with ``tau = |Omega| t``.  This normalization tends to ``delta(x - x')`` as
``t -> 0+``.  Tilde fields evolve with ``Gamma(theta) K(theta)`` and decay,
bar fields with ``Gamma(-theta)^{-1} K(-theta)`` and grow.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .eigen import (discrete_half_width, eigenfunction_stack, upsilon)
from .errors import (RegionError, TimeNonPositive, TruncationInsufficient)
from .model import Branch, DerivedQuantities, Region, Side, theta_domain
from .special import DEFAULT_POLICY, QuadraturePolicy, integrate_line

FIELD_HALF_WIDTH = 12.0


@dataclass
class ComplexField:
    """A complex function sampled on a strictly increasing real grid.

    Attributes
    ----------
    x : ndarray
        Grid, strictly increasing.
    values : ndarray
        Samples, same shape as ``x``.
    theta : float
        Scaling angle the field belongs to.
    time : float
        Physical time of the samples.
    side : Side
        TILDE (evolves with H) or BAR (evolves with the adjoint partner).
    func : callable or None
        Analytic representation ``func(x) -> values`` for arbitrary real
        ``x``.  When present, integrals use it instead of the samples.
    meta : dict
        Free-form provenance.
    """

    x: np.ndarray
    values: np.ndarray
    theta: float
    time: float = 0.0
    side: Side = Side.TILDE
    func: Callable | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.side = Side(self.side)
        if self.x.ndim != 1 or self.values.shape != self.x.shape:
            raise ValueError("x must be 1-D and values must match its shape")
        if self.x.size > 1 and not np.all(np.diff(self.x) > 0):
            raise ValueError("grid must be strictly increasing")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.values))):
            raise ValueError("field samples must be finite")

    @classmethod
    def from_function(cls, func: Callable, x, theta: float, time: float = 0.0,
                      side: Side = Side.TILDE, **meta) -> "ComplexField":
        x = np.asarray(x, dtype=float)
        return cls(x, np.asarray(func(x), dtype=complex), theta, time, side, func, dict(meta))

    def __call__(self, x):
        if self.func is None:
            raise ValueError("field has no analytic representation")
        return self.func(np.asarray(x, dtype=float))

    def linear_combination(self, a: complex, other: "ComplexField", b: complex
                           ) -> "ComplexField":
        """``a*self + b*other`` on the common grid."""
        if not np.array_equal(self.x, other.x):
            raise ValueError("fields must share a grid")
        func = None
        if self.func is not None and other.func is not None:
            f, g = self.func, other.func
            func = lambda x: a * f(x) + b * g(x)
        return ComplexField(self.x, a * self.values + b * other.values, self.theta,
                            self.time, self.side, func)


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Bi-orthogonal expansion coefficients of a field at ``t0``.

    ``valid_plus`` / ``valid_minus`` record whether the branch was
    square-integrable at the field's angle; invalid branches hold zeros.
    """

    c_plus: np.ndarray
    c_minus: np.ndarray
    N: int
    t0: float = 0.0
    valid_plus: bool = True
    valid_minus: bool = True

    def branch(self, branch) -> np.ndarray:
        return self.c_plus if Branch.parse(branch) is Branch.PLUS else self.c_minus


def default_half_width(d: DerivedQuantities, t: float = 0.0) -> float:
    """Grid half width ``12 max(1, e^{|Omega| t}) b0/|sigma|``."""
    return FIELD_HALF_WIDTH * max(1.0, math.exp(d.omega_abs * t)) * d.b0 / d.sigma_abs


def default_grid(d: DerivedQuantities, t: float = 0.0, points: int = 2001) -> np.ndarray:
    L = default_half_width(d, t)
    return np.linspace(-L, L, points)


def _source_half_width(d: DerivedQuantities, theta: float) -> float | None:
    if d.sigma_abs == 0.0:
        # no intrinsic length at an exceptional point: policy.half_width must be set
        return None
    # initial fields decay like exp(-|sigma|^2 sin(2 theta) x^2 / 2); centre offsets up to ~2
    c = max(math.sin(2 * ((theta % math.pi))), 0.05) * d.sigma_abs ** 2 / d.b0 ** 2
    return (FIELD_HALF_WIDTH + 2.0) / math.sqrt(c)


def _check_time(t: float) -> None:
    if not t > 0:
        raise TimeNonPositive(f"propagator needs t > 0, got {t}")


def kernel_K(d: DerivedQuantities, theta: float, x, xp, t: float, literal: bool = False):
    """Undressed propagator ``K(theta, x, x', t)``.

    At an exceptional point the free-particle limit
    ``c sqrt(m/(2 pi hbar t)) exp(i m e^{2i theta}(x-x')^2/(2 hbar t))``
    is used.  The constant ``c`` is the principal root of ``e^{i(2 theta - pi/2)}``,
    so that ``K`` tends to ``delta(x - x')`` wherever the kernel is integrable.

    Parameters
    ----------
    literal : bool
        Multiply by ``-e^{-i pi/4} e^{-i theta}``, the constant by which the
        textbook inverted-oscillator display differs from the
        identity-normalized kernel.

    Raises
    ------
    TimeNonPositive
    RegionError
        Outside the inverted-oscillator and exceptional-point regions.
    """
    _check_time(t)
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    # principal root, fixed by the delta limit; equals e^{i(theta - pi/4)} on (-pi/4, 3pi/4)
    phase = cmath.sqrt(cmath.exp(1j * (2 * theta - math.pi / 2)))
    e2 = cmath.exp(2j * theta)
    if d.region is Region.EXCEPTIONAL_POINT:
        pref = phase * math.sqrt(d.m / (2 * math.pi * d.hbar * t))
        out = pref * np.exp(1j * d.m * e2 * (x - xp) ** 2 / (2 * d.hbar * t))
    elif d.region is Region.INVERTED_OSCILLATOR:
        tau = d.omega_abs * t
        sh, ch = math.sinh(tau), math.cosh(tau)
        pref = phase * d.sigma_abs / (d.b0 * math.sqrt(2 * math.pi * sh))
        coef = 1j * d.sigma_abs ** 2 * e2 / (2 * d.b0 ** 2 * sh)
        out = pref * np.exp(coef * ((x * x + xp * xp) * ch - 2 * x * xp))
    else:
        raise RegionError("kernel defined only for the inverted oscillator and the EP")
    if literal:
        out = out * (-cmath.exp(-1j * math.pi / 4) * cmath.exp(-1j * theta))
    return out


def gamma_factor(d: DerivedQuantities, theta: float, x, xp):
    """``Gamma(theta, x, x') = Upsilon^{-1}(theta, x) Upsilon(theta, x')``."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    return np.exp(d.gamma * cmath.exp(2j * theta) * (x * x - xp * xp) / (2 * d.b0 ** 2))


def kernel_dressed(d: DerivedQuantities, theta: float, x, xp, t: float, which: Side,
                   literal: bool = False):
    """Tilde: ``Gamma(theta) K(theta)``; Bar: ``Gamma(-theta)^{-1} K(-theta)``."""
    which = Side(which)
    if which is Side.TILDE:
        return gamma_factor(d, theta, x, xp) * kernel_K(d, theta, x, xp, t, literal)
    if which is Side.BAR:
        return kernel_K(d, -theta, x, xp, t, literal) / gamma_factor(d, -theta, x, xp)
    raise ValueError("kernel_dressed needs side TILDE or BAR")


def scale_initial_condition(f: Callable, d: DerivedQuantities, theta: float, which: Side,
                            x=None, literal_bar: bool = False) -> ComplexField:
    """Complex-scale an initial packet ``f`` given as an analytic function of ``z``.

    Tilde: ``Upsilon^{-1}(theta, x) e^{i theta/2} f(e^{i theta} x)``.
    Bar: ``Upsilon(-theta, x) conj(e^{i theta/2} f(e^{i theta} x))``, the
    reflection that pairs with the tilde field.  ``literal_bar`` uses
    ``e^{-i theta/2} f(e^{-i theta} x)`` instead, which coincides with the
    reflection only when ``f`` is real on the real axis.
    """
    which = Side(which)
    rot = cmath.exp(1j * theta)
    half = cmath.exp(0.5j * theta)
    if which is Side.TILDE:
        func = lambda y: upsilon(theta, y, inverse=True, d=d) * half * f(rot * np.asarray(y))
    elif literal_bar:
        func = lambda y: upsilon(-theta, y, d=d) * half.conjugate() * f(
            rot.conjugate() * np.asarray(y))
    else:
        func = lambda y: upsilon(-theta, y, d=d) * np.conj(half * f(rot * np.asarray(y)))
    if x is None:
        x = default_grid(d)
    return ComplexField.from_function(func, x, theta, 0.0, which)


def _evolve_at(f0: ComplexField, d, theta, t, x, policy, block=256):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.shape, dtype=complex)
    if f0.func is not None:
        src = f0.func
        L = _source_half_width(d, theta)
        for start in range(0, x.size, block):
            xs = x[start:start + block]
            integrand = lambda xp: (kernel_dressed(d, theta, xs[:, None], xp[None, :], t,
                                                   f0.side) * src(xp)[None, :])
            out[start:start + block] = integrate_line(integrand, policy, half_width=L)
    else:
        dx = np.diff(f0.x)
        w = np.zeros(f0.x.shape)
        w[1:] += 0.5 * dx
        w[:-1] += 0.5 * dx
        for start in range(0, x.size, block):
            xs = x[start:start + block]
            kern = kernel_dressed(d, theta, xs[:, None], f0.x[None, :], t, f0.side)
            out[start:start + block] = kern @ (w * f0.values)
    return out


def _check_kernel_integrable(d: DerivedQuantities, theta: float, side: Side, t: float) -> None:
    if d.region is not Region.INVERTED_OSCILLATOR:
        return
    tau = d.omega_abs * t
    # x'^2 coefficient of the kernel exponent: i|s|^2 e^{+-2i theta} cosh/(2 sinh)
    rot = cmath.exp(-2j * theta if side is Side.BAR else 2j * theta)
    if (1j * rot / math.tanh(tau)).real > 0:
        raise RegionError(
            f"{side.value}-side kernel grows like exp(+c x'^2) at theta={theta}; evolve the "
            "other side or use the closed form")


def evolve_quadrature(f0: ComplexField, d: DerivedQuantities, theta: float, t: float,
                      policy: QuadraturePolicy = DEFAULT_POLICY, x=None) -> ComplexField:
    """Evolve ``f0`` to time ``t`` by integrating against the dressed kernel.

    Uses ``f0.func`` when available, otherwise the trapezoid rule on the
    samples.  The result carries a ``func`` that re-runs the quadrature at
    arbitrary points.

    Raises
    ------
    TimeNonPositive, ToleranceNotReached
    RegionError
        When the kernel of ``f0.side`` is not integrable at ``theta``: bar
        fields for ``sin 2 theta > 0``, tilde fields for ``sin 2 theta < 0``.
    """
    _check_time(t)
    _check_kernel_integrable(d, theta, f0.side, t)
    grid = f0.x if x is None else np.asarray(x, dtype=float)
    func = lambda y: _evolve_at(f0, d, theta, t, y, policy)
    return ComplexField(grid, func(grid), theta, f0.time + t, f0.side, func,
                        {"evolved_from": f0.meta})


def eigenstate_evolution_closed(n: int, branch, t: float, side: Side = Side.TILDE,
                                omega_abs: float = 1.0, convention: str = "oracle",
                                include_zero_point: bool = True) -> complex:
    """Multiplicative factor acquired by an eigenstate after time ``t``.

    Parameters
    ----------
    convention : {"oracle", "main_text", "appendix"}
        ``oracle`` is the factor produced by the identity-normalized kernel:
        ``exp(-+(n + 1/2) tau)`` on the tilde side, ``exp(+-(n + 1/2) tau)``
        on the bar side, with constant phase 1.  ``main_text`` returns
        ``-+e^{-i pi n/2} e^{+-n tau}`` (tilde) and ``+-e^{i pi n/2} e^{-+n tau}``
        (bar).  ``appendix`` returns ``i e^{-i pi n/2} e^{-n tau}`` (minus) and
        ``-e^{-i pi n/2} e^{n tau}`` (plus), tilde side only.
    include_zero_point : bool
        For ``oracle`` only: keep the ``exp(-+tau/2)`` zero-point factor.
    """
    branch = Branch.parse(branch)
    side = Side(side)
    tau = omega_abs * t
    sgn = int(branch)
    if side is Side.BAR:
        sgn = -sgn
    if convention == "oracle":
        power = n + (0.5 if include_zero_point else 0.0)
        return complex(math.exp(sgn * power * tau))
    rot = cmath.exp(-0.5j * math.pi * n)
    if convention == "main_text":
        if side is Side.BAR:
            return -sgn * rot.conjugate() * math.exp(sgn * n * tau)
        return -sgn * rot * math.exp(sgn * n * tau)
    if convention == "appendix":
        if side is Side.BAR:
            raise ValueError("appendix convention defines the tilde side only")
        lead = 1j if branch is Branch.MINUS else -1.0
        return lead * rot * math.exp(sgn * n * tau)
    raise ValueError(f"unknown convention {convention!r}")


def _field_half_width(f0: ComplexField, d, theta, n_top):
    L = _source_half_width(d, theta)
    for branch in Branch:
        if theta_domain(branch, theta):
            L = max(L, discrete_half_width(d, theta, branch, n_top))
    return L


def expansion_coefficients(f0: ComplexField, d: DerivedQuantities, theta: float, N: int,
                           policy: QuadraturePolicy = DEFAULT_POLICY) -> ExpansionCoefficients:
    """Project ``f0`` on the first ``N`` eigenfunctions of each admissible branch.

    Tilde fields use ``c_n = <psibar_n | f>``, bar fields ``<phitilde_n | f>``.
    """
    dual_side = Side.BAR if f0.side is Side.TILDE else Side.TILDE
    coeffs = {}
    valid = {}
    for branch in Branch:
        valid[branch] = theta_domain(branch, theta)
        if not valid[branch]:
            coeffs[branch] = np.zeros(N, dtype=complex)
            continue

        def integrand(x, branch=branch):
            duals = eigenfunction_stack(d, theta, N - 1, branch, dual_side, x)
            src = f0.func(x) if f0.func is not None else np.interp(x, f0.x, f0.values)
            return np.conj(duals) * src[None, :]

        if f0.func is not None:
            coeffs[branch] = integrate_line(integrand, policy,
                                            half_width=_field_half_width(f0, d, theta, N - 1))
        else:
            duals = eigenfunction_stack(d, theta, N - 1, branch, dual_side, f0.x)
            coeffs[branch] = np.trapezoid(np.conj(duals) * f0.values[None, :], f0.x, axis=1)
    return ExpansionCoefficients(coeffs[Branch.PLUS], coeffs[Branch.MINUS], N, f0.time,
                                 valid[Branch.PLUS], valid[Branch.MINUS])


@dataclass(frozen=True)
class SplitResult:
    """``advanced`` collects the plus branch, ``retarded`` the minus branch."""

    advanced: ComplexField
    retarded: ComplexField
    coefficients: ExpansionCoefficients

    @property
    def total(self) -> ComplexField:
        return self.advanced.linear_combination(1.0, self.retarded, 1.0)


def split_retarded_advanced(f0: ComplexField, d: DerivedQuantities, theta: float, N: int,
                            t: float, policy: QuadraturePolicy = DEFAULT_POLICY,
                            rel_tol: float = 1e-10, x=None) -> SplitResult:
    """Evolve ``f0`` branch by branch through its truncated eigen-expansion.

    ``f^{+-}(t) = sum_n c_n^{+-} exp(+-(n + 1/2) tau) phitilde_n^{+-}`` for a
    tilde field (signs flip on the bar side).

    Raises
    ------
    TruncationInsufficient
        If ``|c_{N-1}| > rel_tol max|c_n|`` on an admissible branch.
    """
    coeffs = expansion_coefficients(f0, d, theta, N, policy)
    grid = f0.x if x is None else np.asarray(x, dtype=float)
    parts = {}
    for branch in Branch:
        c = coeffs.branch(branch)
        peak = np.max(np.abs(c))
        if peak > 0 and abs(c[-1]) > rel_tol * peak:
            raise TruncationInsufficient(
                f"branch {branch.symbol}: |c_{N - 1}| = {abs(c[-1]):.3e} exceeds "
                f"{rel_tol:g} of the largest coefficient")
        factors = np.array([eigenstate_evolution_closed(n, branch, t, f0.side, d.omega_abs)
                            for n in range(N)])
        weights = c * factors

        def func(y, branch=branch, weights=weights):
            if not np.any(weights):
                return np.zeros(np.shape(y), dtype=complex)
            stack = eigenfunction_stack(d, theta, N - 1, branch, f0.side, y)
            return np.tensordot(weights, stack, axes=1)

        parts[branch] = ComplexField(grid, func(grid), theta, f0.time + t, f0.side, func)
    return SplitResult(parts[Branch.PLUS], parts[Branch.MINUS], coeffs)


def binorm(fbar: ComplexField, ftilde: ComplexField,
           policy: QuadraturePolicy = DEFAULT_POLICY, half_width: float | None = None
           ) -> complex:
    """Bi-orthogonal pairing ``int conj(fbar) ftilde dx``.

    Uses the analytic representations when both fields carry one, otherwise
    the trapezoid rule on the shared grid.
    """
    if not math.isclose(fbar.theta, ftilde.theta, abs_tol=1e-14):
        raise ValueError("fields must share theta")
    if fbar.func is not None and ftilde.func is not None:
        if half_width is None:
            half_width = max(abs(fbar.x[0]), abs(fbar.x[-1]))
        return complex(integrate_line(lambda x: np.conj(fbar.func(x)) * ftilde.func(x),
                                      policy, half_width=half_width))
    if not np.array_equal(fbar.x, ftilde.x):
        raise ValueError("sampled fields must share a grid")
    return complex(np.trapezoid(np.conj(fbar.values) * ftilde.values, fbar.x))
