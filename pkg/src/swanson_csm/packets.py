"""Cosh, sinh and Gaussian benchmark packets: closed-form evolution and observables.

All three packets are finite sums of shifted Gaussians in the scaled variable
``y = e^{i(theta - pi/4)} |sigma| x / b0``:

    f(y) = sqrt(s) N sum_e w_e exp(-y^2/2 + 2 e y - 1)

with ``(e, w)`` = ``(+1, 1)`` for the Gaussian, ``(+-1, 1/2)`` for cosh and
``(+-1, +-1/2)`` for sinh.  Evolution on the minus branch replaces the shift
``2 e y`` by ``2 e q y`` and ``-1`` by ``-q^2``, ``q = e^{-tau}``, together with a
zero-point factor ``e^{-tau/2}``; the bar side uses ``Q = e^{tau}``.

Densities, currents and moments are expressed in ``X = s x`` with
``s = e^{i(theta-pi/4)} |sigma|/b0``; at ``theta = pi/4`` ``X`` is real.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .eigen import upsilon
from .errors import OverflowGuard, RegionError
from .model import DerivedQuantities, Region, Side
from .propagator import (ComplexField, default_grid, evolve_quadrature, scale_initial_condition)
from .special import DEFAULT_POLICY, QuadraturePolicy, erf_complex, integrate_line

SQRT_PI = math.sqrt(math.pi)
# smooth single-scale integrands: half the default panel count suffices
SURVIVAL_POLICY = QuadraturePolicy(panels=8)
OVERFLOW_EXPONENT = 700.0


class PacketKind(enum.Enum):
    COSH = "c"
    SINH = "s"
    GAUSSIAN = "g"

    @classmethod
    def parse(cls, value) -> "PacketKind":
        if isinstance(value, PacketKind):
            return value
        text = str(value).strip().lower()
        aliases = {"c": cls.COSH, "cosh": cls.COSH, "s": cls.SINH, "sinh": cls.SINH,
                   "g": cls.GAUSSIAN, "gauss": cls.GAUSSIAN, "gaussian": cls.GAUSSIAN}
        if text not in aliases:
            raise ValueError(f"unknown packet kind {value!r}")
        return aliases[text]


class DensityRegime(enum.Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"
    EP = "ep"


def _terms(kind: PacketKind):
    """``([(e, w), ...], N)`` in units where ``s = 1``."""
    if kind is PacketKind.GAUSSIAN:
        return [(1.0, 1.0)], math.exp(-1.0) * math.pi ** -0.25
    if kind is PacketKind.COSH:
        return [(1.0, 0.5), (-1.0, 0.5)], math.e / math.sqrt(SQRT_PI * math.e ** 2 * math.cosh(2))
    return [(1.0, 0.5), (-1.0, -0.5)], math.e / math.sqrt(SQRT_PI * math.e ** 2 * math.sinh(2))


def scale(d: DerivedQuantities, theta: float) -> complex:
    """``s = e^{i(theta - pi/4)} |sigma| / b0``, so that ``y = s x``."""
    return cmath.exp(1j * (theta - math.pi / 4)) * d.sigma_abs / d.b0


@dataclass(frozen=True)
class ScaledCoordinates:
    y: complex
    X: complex
    P: complex | None = None


def scaled_coordinates(d: DerivedQuantities, theta: float, x, p=None) -> ScaledCoordinates:
    """``y = X = s x``; ``P`` follows the Wigner momentum convention when ``p`` is given."""
    from .wigner import ps_coords
    y = scale(d, theta) * np.asarray(x, dtype=float)
    P = None if p is None else ps_coords(d, theta, x, p)[0]
    return ScaledCoordinates(y, y, P)


def _sum(kind, y, shift, const):
    terms, _ = _terms(kind)
    return sum(w * np.exp(-0.5 * y * y + 2.0 * e * shift * y - const) for e, w in terms)


def packet_function(kind, d: DerivedQuantities) -> callable:
    """Unscaled packet ``f(z)`` whose complex scaling gives :func:`packet_initial`."""
    kind = PacketKind.parse(kind)
    s0 = cmath.exp(-0.25j * math.pi) * d.sigma_abs / d.b0
    pref = cmath.sqrt(s0) * _terms(kind)[1]
    return lambda z: pref * _sum(kind, s0 * np.asarray(z, dtype=complex), 1.0, 1.0)


def packet_initial(kind, d: DerivedQuantities, theta: float, x):
    """Undressed initial packet ``f_kind(x, 0)`` including its normalization."""
    kind = PacketKind.parse(kind)
    d.require_inverted()
    s = scale(d, theta)
    y = s * np.asarray(x, dtype=float)
    return (cmath.sqrt(s) * _terms(kind)[1] * _sum(kind, y, 1.0, 1.0))[()]


def _check_theta(theta: float) -> None:
    if not 0.0 < theta <= math.pi / 2 + 1e-15:
        raise RegionError("packet series hold for 0 < theta <= pi/2")


def packet_evolved_closed(kind, side, d: DerivedQuantities, theta: float, x, t: float):
    """Closed-form evolved packet including the similarity dressing.

    Tilde: ``Upsilon^{-1}(theta,x) sqrt(s) N e^{-tau/2} sum w exp(-y^2/2 + 2 e q y - q^2)``.
    Bar: ``Upsilon(-theta,x) conj(sqrt(s) N e^{tau/2} sum w exp(-y^2/2 + 2 e Q y - Q^2))``.

    Raises
    ------
    OverflowGuard
        When the bar field would exceed double range (``e^{2 tau}`` too large).
    """
    kind = PacketKind.parse(kind)
    side = Side(side)
    d.require_inverted()
    _check_theta(theta)
    tau = d.omega_abs * t
    s = scale(d, theta)
    x = np.asarray(x, dtype=float)
    y = s * x
    norm = cmath.sqrt(s) * _terms(kind)[1]
    if side is Side.BAR:
        big = math.exp(tau)
        if big * big > OVERFLOW_EXPONENT:
            raise OverflowGuard("bar packet exceeds double range; use pair_product")
        core = norm * math.exp(0.5 * tau) * _sum(kind, y, big, big * big)
        return (upsilon(-theta, x, d=d) * np.conj(core))[()]
    if side is Side.TILDE:
        q = math.exp(-tau)
        core = norm * math.exp(-0.5 * tau) * _sum(kind, y, q, q * q)
        return (upsilon(theta, x, inverse=True, d=d) * core)[()]
    raise ValueError("side must be TILDE or BAR")


def pair_product(kind, d: DerivedQuantities, theta: float, x_bar, x_tilde, t_bar: float,
                 t_tilde: float):
    """``conj(fbar(x_bar, t_bar)) * ftilde(x_tilde, t_tilde)`` in one exponent (no overflow)."""
    kind = PacketKind.parse(kind)
    d.require_inverted()
    _check_theta(theta)
    terms, norm = _terms(kind)
    s = scale(d, theta)
    xb = np.asarray(x_bar, dtype=float)
    xt = np.asarray(x_tilde, dtype=float)
    yb, yt = s * xb, s * xt
    big = math.exp(d.omega_abs * t_bar)
    q = math.exp(-d.omega_abs * t_tilde)
    dress = -d.gamma * cmath.exp(2j * theta) * (xb * xb - xt * xt) / (2 * d.b0 ** 2)
    total = 0.0
    for eb, wb in terms:
        for et, wt in terms:
            expo = (-0.5 * (yb * yb + yt * yt) + 2 * eb * big * yb + 2 * et * q * yt
                    - big * big - q * q + dress)
            total = total + wb * wt * np.exp(expo)
    pref = s * norm * norm * math.exp(0.5 * d.omega_abs * (t_bar - t_tilde))
    return (pref * total)[()]


def packet_fields(kind, d: DerivedQuantities, theta: float, t: float, x=None):
    """Closed-form (bar, tilde) :class:`ComplexField` pair at time ``t``."""
    kind = PacketKind.parse(kind)
    if x is None:
        x = default_grid(d, t)
    bar = ComplexField.from_function(
        lambda y: packet_evolved_closed(kind, Side.BAR, d, theta, y, t), x, theta, t, Side.BAR,
        kind=kind.value)
    tilde = ComplexField.from_function(
        lambda y: packet_evolved_closed(kind, Side.TILDE, d, theta, y, t), x, theta, t,
        Side.TILDE, kind=kind.value)
    return bar, tilde


def survival_amplitude(kind, tau: float) -> float:
    """``int conj(fbar(0)) ftilde(t) dx`` in closed form, ``tau = |Omega| t``."""
    kind = PacketKind.parse(kind)
    q = math.exp(-tau)
    if kind is PacketKind.GAUSSIAN:
        core = math.exp(2.0 * (q - 1.0))
    elif kind is PacketKind.COSH:
        core = math.cosh(2.0 * q) / math.cosh(2.0)
    else:
        core = math.sinh(2.0 * q) / math.sinh(2.0)
    return core * math.exp(-0.5 * tau)


def survival_probability(kind, t, omega_abs: float = 1.0):
    """Closed-form survival probability ``|amplitude|^2``; identically 1 at ``omega_abs = 0``."""
    t = np.asarray(t, dtype=float)
    out = np.vectorize(lambda tt: survival_amplitude(kind, omega_abs * tt) ** 2)(t)
    return out[()] if out.ndim == 0 else out


def survival_general(f0, d: DerivedQuantities, theta: float, t: float,
                     policy: QuadraturePolicy = SURVIVAL_POLICY) -> float:
    """Survival probability by quadrature: ``|int conj(fbar(0)) ftilde(t) dx|^2``.

    ``f0`` is either a :class:`PacketKind` or an analytic initial packet
    ``f(z)``.  ``fbar(0)`` is the complex-scaled bar field; ``ftilde(t)`` is
    evolved with the kernel, so no closed form enters.
    """
    if d.region not in (Region.INVERTED_OSCILLATOR, Region.EXCEPTIONAL_POINT):
        raise RegionError("survival needs the inverted region or an exceptional point")
    try:
        kind = PacketKind.parse(f0)
    except ValueError:
        f = f0
    else:
        if d.sigma_abs == 0.0:
            raise RegionError("benchmark packets have no finite width at an exceptional point")
        f = packet_function(kind, d)
    if t == 0:
        return abs(_overlap_initial(f, d, theta, policy)) ** 2
    return abs(survival_amplitude_quadrature(f, d, theta, t, policy)) ** 2


def _envelope_width(d: DerivedQuantities, theta: float) -> float | None:
    if d.sigma_abs == 0.0:
        return None
    c = max(math.sin(2 * theta), 0.05) * d.sigma_abs ** 2 / d.b0 ** 2
    return 16.0 / math.sqrt(c)


def _overlap_initial(f, d, theta, policy):
    bar = scale_initial_condition(f, d, theta, Side.BAR, x=np.array([0.0]))
    tilde = scale_initial_condition(f, d, theta, Side.TILDE, x=np.array([0.0]))
    return integrate_line(lambda x: np.conj(bar.func(x)) * tilde.func(x), policy,
                          half_width=_envelope_width(d, theta))


def survival_amplitude_quadrature(f, d: DerivedQuantities, theta: float, t: float,
                                  policy: QuadraturePolicy = SURVIVAL_POLICY) -> complex:
    """``int conj(fbar(x, 0)) [int Ktilde(x, x', t) ftilde(x', 0) dx'] dx``."""
    bar = scale_initial_condition(f, d, theta, Side.BAR, x=np.array([0.0]))
    tilde = scale_initial_condition(f, d, theta, Side.TILDE, x=np.array([0.0]))
    evolved = evolve_quadrature(tilde, d, theta, t, policy, x=np.array([0.0]))
    return complex(integrate_line(lambda x: np.conj(bar.func(x)) * evolved.func(x), policy,
                                  half_width=_envelope_width(d, theta)))


def _gauss(X, c):
    return np.exp(-(X - c) ** 2)


def density_closed(kind, X, t, regime=DensityRegime.EXACT, omega_abs: float = 1.0):
    """Density in the scaled variable ``X``; a probability density when ``X`` is real.

    ``EXACT`` evaluates the four-Gaussian forms, ``ASYMPTOTIC`` the large-time
    limits with centres ``+-e^{tau}``, ``EP`` the exceptional-point forms
    (no time dependence).
    """
    kind = PacketKind.parse(kind)
    regime = DensityRegime(regime)
    X = np.asarray(X)
    tau = omega_abs * t
    if regime is DensityRegime.EP:
        if kind is PacketKind.GAUSSIAN:
            return (_gauss(X, 2.0) / SQRT_PI)[()]
        if kind is PacketKind.COSH:
            return (np.cosh(2 * X) ** 2 * np.exp(-X * X)
                    / (math.e ** 2 * SQRT_PI * math.cosh(2)))[()]
        return (np.sinh(2 * X) ** 2 * np.exp(-X * X) / (math.e ** 2 * SQRT_PI * math.sinh(2)))[()]
    if regime is DensityRegime.ASYMPTOTIC:
        c = math.exp(tau)
        if kind is PacketKind.GAUSSIAN:
            return (_gauss(X, c) / SQRT_PI)[()]
        return ((_gauss(X, c) + _gauss(X, -c)) / (2 * SQRT_PI))[()]
    ch, sh = 2 * math.cosh(tau), 2 * math.sinh(tau)
    if kind is PacketKind.GAUSSIAN:
        return (_gauss(X, ch) / SQRT_PI)[()]
    outer = math.e ** 2 * (_gauss(X, ch) + _gauss(X, -ch))
    inner = math.e ** -2 * (_gauss(X, sh) + _gauss(X, -sh))
    if kind is PacketKind.COSH:
        return ((outer + inner) / (4 * SQRT_PI * math.cosh(2)))[()]
    return ((outer - inner) / (4 * SQRT_PI * math.sinh(2)))[()]


def density_x(kind, d: DerivedQuantities, theta: float, x, t):
    """Density per unit ``x``: ``s * rho_X(s x)``, equal to ``conj(fbar) ftilde``."""
    s = scale(d, theta)
    return (s * density_closed(kind, s * np.asarray(x, dtype=float), t,
                               omega_abs=d.omega_abs))[()]


def current_prefactor(d: DerivedQuantities, theta: float) -> complex:
    """``(hbar/m)(|sigma|/b0) e^{-i(theta - pi/4)}``."""
    return d.hbar / d.m * d.sigma_abs / d.b0 * cmath.exp(-1j * (theta - math.pi / 4))


def current_closed(kind, d: DerivedQuantities, theta: float, X, t):
    """Probability current paired with :func:`density_closed` through ``d_t rho + d_x J = 0``.

    The Gaussian current is ``2 sinh(tau) exp(-(X - 2 cosh tau)^2) / sqrt(pi)``
    times the prefactor; cosh and sinh follow the two-term displays.
    """
    kind = PacketKind.parse(kind)
    X = np.asarray(X)
    tau = d.omega_abs * t
    pref = current_prefactor(d, theta)
    if kind is PacketKind.GAUSSIAN:
        return np.asarray(pref * 2 * math.sinh(tau) * _gauss(X, 2 * math.cosh(tau)) / SQRT_PI)[()]
    # env * sinh(2 c X) written as shifted Gaussians to avoid overflow
    ch, sh = 2 * math.cosh(tau), 2 * math.sinh(tau)
    outer = math.e ** 2 * math.sinh(tau) * (_gauss(X, ch) - _gauss(X, -ch)) / 2
    inner = math.e ** -2 * math.cosh(tau) * (_gauss(X, sh) - _gauss(X, -sh)) / 2
    if kind is PacketKind.COSH:
        return np.asarray(pref * (outer + inner) / (SQRT_PI * math.cosh(2)))[()]
    return np.asarray(pref * (outer - inner) / (SQRT_PI * math.sinh(2)))[()]


def current_from_fields(fbar, ftilde, d: DerivedQuantities, theta: float, x,
                        h: float = 1e-4, include_dressing: bool = True):
    """Current from a bi-orthogonal pair of callables.

    ``J = hbar/(2 m i) e^{-2i theta} (conj(fbar) d ftilde - d conj(fbar) ftilde)``
    plus, with ``include_dressing``, the term ``i (alpha - beta) x rho`` that the
    symmetrized ``{x, p}`` part of the Hamiltonian contributes.  Derivatives
    use 5-point stencils of step ``h``.
    """
    x = np.asarray(x, dtype=float)

    def deriv(f):
        return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)

    cb = lambda y: np.conj(fbar(y))
    rho = cb(x) * ftilde(x)
    J = d.hbar / (2j * d.m) * cmath.exp(-2j * theta) * (cb(x) * deriv(ftilde) - deriv(cb) * ftilde(x))
    if include_dressing:
        J = J + 1j * (d.alpha - d.beta) * x * rho
    return J


def persistence_Q(kind, d: DerivedQuantities, theta: float, L, t):
    """Probability of remaining in ``[-L, L]``, with ``L`` in units of ``b0``.

    Raises
    ------
    OutOfAccuracyEnvelope
        When the complex error-function arguments leave the envelope.
    """
    kind = PacketKind.parse(kind)
    ell = scale(d, theta) * np.asarray(L, dtype=float)
    tau = d.omega_abs * np.asarray(t, dtype=float)
    return persistence_scaled(kind, ell, tau)


def persistence_scaled(kind, ell, tau):
    """Persistence in terms of scaled half width ``ell = s L`` and ``tau``."""
    kind = PacketKind.parse(kind)
    ell = np.asarray(ell)
    tau = np.asarray(tau, dtype=float)
    ch, sh = 2 * np.cosh(tau), 2 * np.sinh(tau)
    pair_c = erf_complex(ell + ch) + erf_complex(ell - ch)
    if kind is PacketKind.GAUSSIAN:
        out = 0.5 * pair_c
    else:
        pair_s = erf_complex(ell + sh) + erf_complex(ell - sh)
        if kind is PacketKind.COSH:
            out = (math.e ** 2 * pair_c + math.e ** -2 * pair_s) / (4 * math.cosh(2))
        else:
            out = (math.e ** 2 * pair_c - math.e ** -2 * pair_s) / (4 * math.sinh(2))
    out = np.asarray(out)
    if np.all(np.abs(out.imag) == 0):
        out = out.real
    return out[()]


def persistence_quadrature(kind, ell: float, tau: float,
                           policy: QuadraturePolicy = DEFAULT_POLICY) -> float:
    """``int_{-ell}^{ell} rho_X dX`` by quadrature, integrating around each Gaussian centre."""
    kind = PacketKind.parse(kind)
    centres = [2 * math.cosh(tau)]
    if kind is not PacketKind.GAUSSIAN:
        centres += [-2 * math.cosh(tau), 2 * math.sinh(tau), -2 * math.sinh(tau)]
    pieces = sorted({-ell, ell, *[min(max(c + o, -ell), ell) for c in centres
                                  for o in (-8.0, 8.0)]})
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        if b > a:
            total += integrate_line(lambda X: density_closed(kind, X, tau), policy, a=a, b=b)
    return float(np.real(total))


@dataclass(frozen=True)
class Moments:
    mean_X: float
    mean_X2: float
    var_X: float


def moments(kind, t, omega_abs: float = 1.0) -> Moments:
    """Closed-form first and second moments of ``X``."""
    kind = PacketKind.parse(kind)
    tau = omega_abs * t
    if kind is PacketKind.GAUSSIAN:
        mean = 2 * math.cosh(tau)
        mean2 = 0.5 + 4 * math.cosh(tau) ** 2
    else:
        mean = 0.0
        lead = math.tanh(2) if kind is PacketKind.COSH else 1 / math.tanh(2)
        mean2 = 0.5 + 2 * lead + 2 * math.cosh(2 * tau)
    return Moments(mean, mean2, mean2 - mean * mean)


def moments_quadrature(kind, t, omega_abs: float = 1.0,
                       policy: QuadraturePolicy = DEFAULT_POLICY) -> Moments:
    tau = omega_abs * t
    L = 2 * math.cosh(tau) + 10.0
    vals = integrate_line(lambda X: np.stack([X * density_closed(kind, X, tau),
                                              X * X * density_closed(kind, X, tau)]),
                          policy, half_width=L)
    mean, mean2 = float(vals[0].real), float(vals[1].real)
    return Moments(mean, mean2, mean2 - mean * mean)


def continuity_residual(kind, d: DerivedQuantities, theta: float, x, t: float,
                        dt: float = 1e-3, dx: float = 1e-3, source: str = "closed"):
    """Central-difference residual of ``d_t rho + d_x J`` on the grid ``x``.

    ``source="closed"`` pairs :func:`density_closed` (per unit ``X``) with
    :func:`current_closed`; ``source="fields"`` uses ``rho = conj(fbar) ftilde``
    and :func:`current_from_fields` on the closed-form packet fields.

    Returns
    -------
    residual : float
        ``max |d_t rho + d_x J|`` over the grid.
    peak : float
        ``max |d_t rho|`` over the grid, for relative comparisons.
    """
    kind = PacketKind.parse(kind)
    x = np.asarray(x, dtype=float)
    s = scale(d, theta)
    if source == "closed":
        rho = lambda tt, xx: density_closed(kind, s * xx, tt, omega_abs=d.omega_abs)
        cur = lambda tt, xx: current_closed(kind, d, theta, s * xx, tt)
    elif source == "fields":
        def rho(tt, xx):
            return pair_product(kind, d, theta, xx, xx, tt, tt)

        def cur(tt, xx):
            fb = lambda y: packet_evolved_closed(kind, Side.BAR, d, theta, y, tt)
            ft = lambda y: packet_evolved_closed(kind, Side.TILDE, d, theta, y, tt)
            return current_from_fields(fb, ft, d, theta, xx, h=min(dx, 1e-3) / 4)
    else:
        raise ValueError("source must be 'closed' or 'fields'")
    drho = (rho(t + dt, x) - rho(t - dt, x)) / (2 * dt)
    dJ = (cur(t, x + dx) - cur(t, x - dx)) / (2 * dx)
    return float(np.max(np.abs(drho + dJ))), float(np.max(np.abs(drho)))


def eigen_continuity_residual(d: DerivedQuantities, theta: float, x, t: float,
                              dt: float = 1e-3, dx: float = 1e-3) -> float:
    """Residual for the ground-state pair, whose density is time independent."""
    from .eigen import EigenstateId, eigenfunction
    from .propagator import eigenstate_evolution_closed

    bar_id = EigenstateId(0, "-", Side.BAR)
    til_id = EigenstateId(0, "-", Side.TILDE)

    def field(side_id, tt):
        fac = eigenstate_evolution_closed(0, "-", tt, side_id.side, d.omega_abs)
        return lambda y: fac * eigenfunction(side_id, d, theta, y)

    x = np.asarray(x, dtype=float)
    rho = lambda tt, xx: np.conj(field(bar_id, tt)(xx)) * field(til_id, tt)(xx)
    cur = lambda tt, xx: current_from_fields(field(bar_id, tt), field(til_id, tt), d, theta,
                                             xx, h=dx / 4)
    drho = (rho(t + dt, x) - rho(t - dt, x)) / (2 * dt)
    dJ = (cur(t, x + dx) - cur(t, x - dx)) / (2 * dx)
    return float(np.max(np.abs(drho + dJ)))


def peak_centres(kind, t: float, omega_abs: float = 1.0, span: float | None = None,
                 points: int = 20001) -> np.ndarray:
    """Local maxima of ``rho_X`` refined by parabolic interpolation.

    Maxima below ``1e-12`` of the global peak are underflow noise and dropped.
    """
    tau = omega_abs * t
    span = span or 2 * math.cosh(tau) + 6
    X = np.linspace(-span, span, points)
    rho = density_closed(kind, X, t, omega_abs=omega_abs)
    idx = np.where((rho[1:-1] > rho[:-2]) & (rho[1:-1] >= rho[2:])
                   & (rho[1:-1] > 1e-12 * np.max(rho)))[0] + 1
    h = X[1] - X[0]
    out = []
    for i in idx:
        a, b, c = rho[i - 1], rho[i], rho[i + 1]
        denom = a - 2 * b + c
        out.append(X[i] + (0.5 * h * (a - c) / denom if denom != 0 else 0.0))
    return np.array(out)
