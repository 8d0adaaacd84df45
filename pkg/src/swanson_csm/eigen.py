"""Discrete and continuum eigenfunctions of the complex-scaled Hamiltonian.

Conventions
-----------
``s = exp(i(theta +- pi/4)) |sigma| / b0`` is the complex inverse length of
branch ``+-``, reduced to the sign with ``Re s >= 0`` (``s`` and ``-s`` give
the same function up to ``(-1)^n``, but only the reduced one makes
``int phi_n^2 dx = +1``).  The plain eigenfunctions are
``phi_n = sqrt(s) h_n(s x)`` with ``h_n`` the normalized Hermite functions, the tilde side is
``Upsilon^{-1}(theta, x) phi_n`` and the bar side is
``Upsilon(-theta, x) conj(phi_n)``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import RegionError
from .model import Branch, DerivedQuantities, Side, scaled_factor, theta_domain
from .special import (DEFAULT_POLICY, N_MAX, QuadraturePolicy, gaussian_half_width,
                      hermite_functions, integrate_line, parabolic_cylinder_D)


@dataclass(frozen=True)
class EigenstateId:
    """Label of one eigenfunction.

    ``energy`` is set for continuum states, in which case ``n`` is ignored
    and ``branch`` selects the sign of the parabolic-cylinder argument.
    """

    n: int = 0
    branch: Branch = Branch.MINUS
    side: Side = Side.TILDE
    energy: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "branch", Branch.parse(self.branch))
        if self.energy is None and self.n < 0:
            raise ValueError("n must be non-negative")


class SpectralKind(enum.Enum):
    DISCRETE = "Discrete"
    CONTINUUM = "Continuum"


@dataclass(frozen=True)
class SpectralValue:
    value: complex
    kind: SpectralKind


def upsilon(theta: float, x, inverse: bool = False, d: DerivedQuantities | None = None):
    """Similarity factor ``exp(-gamma e^{2i theta} x^2 / (2 b0^2))``.

    ``inverse`` flips the sign of the exponent.
    """
    if d is None:
        raise ValueError("upsilon needs derived quantities")
    x = np.asarray(x, dtype=float)
    sign = 1.0 if inverse else -1.0
    return np.exp(sign * d.gamma * cmath.exp(2j * theta) * x * x / (2.0 * d.b0 ** 2))[()]


def _require(d: DerivedQuantities) -> None:
    d.require_inverted()


def reduced_scale(d: DerivedQuantities, theta: float, branch) -> complex:
    """``+-exp(i(theta +- pi/4)) |sigma|/b0`` with the sign chosen so that ``Re >= 0``."""
    s = scaled_factor(d, theta, branch)
    if s.real < 0 or (s.real == 0 and s.imag < 0):
        s = -s
    return s


def phi_stack(d: DerivedQuantities, theta: float, n_top: int, branch, x) -> np.ndarray:
    """``phi_k^{branch}(theta, x)`` for ``k = 0..n_top``, shape ``(n_top+1,) + x.shape``."""
    _require(d)
    s = reduced_scale(d, theta, branch)
    x = np.asarray(x, dtype=float)
    return cmath.sqrt(s) * hermite_functions(n_top, s * x)


def phi_n(d: DerivedQuantities, theta: float, n: int, branch, x):
    """Plain eigenfunction ``phi_n^{branch}(theta, x)`` of the transformed Hamiltonian."""
    return phi_stack(d, theta, n, branch, x)[n][()]


def _dress(d, theta, side, x, plain):
    if side is Side.PLAIN:
        return plain
    if side is Side.TILDE:
        return upsilon(theta, x, inverse=True, d=d) * plain
    return upsilon(-theta, x, d=d) * np.conj(plain)


def eigenfunction_stack(d: DerivedQuantities, theta: float, n_top: int, branch, side,
                        x) -> np.ndarray:
    """All discrete eigenfunctions up to ``n_top`` on one side."""
    side = Side(side)
    return _dress(d, theta, side, np.asarray(x, dtype=float),
                  phi_stack(d, theta, n_top, branch, x))


def eigenfunction(eid: EigenstateId, d: DerivedQuantities, theta: float, x):
    """Evaluate the eigenfunction named by ``eid`` at ``x``."""
    if eid.energy is not None:
        return continuum_eigenfunction(d, theta, eid.energy, eid.branch, x, side=eid.side)
    return eigenfunction_stack(d, theta, eid.n, eid.branch, eid.side, x)[eid.n][()]


def eigenvalue(eid: EigenstateId, d: DerivedQuantities, theta: float = math.pi / 4
               ) -> SpectralValue:
    """Energy of ``eid``; the bar side carries the complex conjugate.

    Discrete: ``+-i hbar |Omega| (n + 1/2)``.  Continuum: ``E e^{-2i theta}``.
    """
    _require(d)
    if eid.energy is not None:
        value = eid.energy * cmath.exp(-2j * theta)
        kind = SpectralKind.CONTINUUM
    else:
        value = 1j * int(eid.branch) * d.hbar * d.omega_abs * (eid.n + 0.5)
        kind = SpectralKind.DISCRETE
    if eid.side is Side.BAR:
        value = value.conjugate()
    return SpectralValue(complex(value), kind)


def envelope_coefficient(d: DerivedQuantities, theta: float, branch) -> float:
    """Real part of ``s^2``: the product ``phi_m phi_n`` decays like ``exp(-c x^2)``."""
    s = scaled_factor(d, theta, branch)
    return (s * s).real


def discrete_half_width(d: DerivedQuantities, theta: float, branch, n_top: int) -> float:
    """Quadrature half width covering the turning point of ``h_{n_top}`` plus a Gaussian tail."""
    c = envelope_coefficient(d, theta, branch)
    if c <= 0:
        raise RegionError(f"branch {Branch.parse(branch).symbol} is not square-integrable "
                          f"at theta={theta}")
    return (math.sqrt(2 * n_top + 1) + math.sqrt(gaussian_half_width(1.0) ** 2)) / math.sqrt(c)


def biorthogonality_matrix(d: DerivedQuantities, theta: float, N: int, branch,
                           policy: QuadraturePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Gram matrix ``G[m, n] = int conj(psibar_m) phitilde_n dx`` for ``m, n < N``.

    Raises
    ------
    RegionError
        If ``theta`` is outside the square-integrability domain of ``branch``.
    ToleranceNotReached
    """
    branch = Branch.parse(branch)
    if not theta_domain(branch, theta):
        raise RegionError(f"theta={theta} outside the domain of branch {branch.symbol}")
    n_top = N - 1

    def integrand(x):
        bar = eigenfunction_stack(d, theta, n_top, branch, Side.BAR, x)
        tilde = eigenfunction_stack(d, theta, n_top, branch, Side.TILDE, x)
        return np.einsum("mx,nx->mnx", np.conj(bar), tilde)

    return integrate_line(integrand, policy,
                          half_width=discrete_half_width(d, theta, branch, n_top))


def hamiltonian_apply_fd(d: DerivedQuantities, theta: float, f, x, h: float):
    """Apply the complex-scaled Hamiltonian to a callable ``f`` with 5-point stencils.

    ``H(theta) = hbar(w+a+b)/2 e^{2i theta} x^2/b0^2 + (w-a-b) b0^2/(2 hbar) e^{-2i theta} p^2
    + i(a-b)/2 {x, p}`` with ``p = -i hbar d/dx``.
    """
    if not d.has_couplings:
        raise ValueError("finite-difference Hamiltonian needs the couplings")
    x = np.asarray(x, dtype=float)
    f0 = f(x)
    fp1, fm1, fp2, fm2 = f(x + h), f(x - h), f(x + 2 * h), f(x - 2 * h)
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    e2 = cmath.exp(2j * theta)
    wpp = d.omega + d.alpha + d.beta
    wmm = d.omega - d.alpha - d.beta
    potential = 0.5 * d.hbar * wpp * e2 * x * x / d.b0 ** 2 * f0
    kinetic = -0.5 * wmm * d.b0 ** 2 * d.hbar / e2 * d2
    mixed = 0.5 * (d.alpha - d.beta) * d.hbar * (2 * x * d1 + f0)
    return potential + kinetic + mixed, f0


def eigen_residual(d: DerivedQuantities, theta: float, n: int, branch, x=None,
                   h: float = 1e-3) -> float:
    """Sup-relative residual ``max|H phitilde - E phitilde| / max|E phitilde|``."""
    if x is None:
        x = np.linspace(-5.0, 5.0, 1001)
    eid = EigenstateId(n, branch, Side.TILDE)
    hf, f0 = hamiltonian_apply_fd(d, theta, lambda y: eigenfunction(eid, d, theta, y), x, h)
    ef = eigenvalue(eid, d, theta).value * f0
    return float(np.max(np.abs(hf - ef)) / np.max(np.abs(ef)))


def continuum_nu(d: DerivedQuantities, theta: float, E: float, literal: bool = False) -> complex:
    """Order parameter ``nu`` of the continuum solution with eigenvalue ``E e^{-2i theta}``.

    ``nu = -(i E e^{-2i theta} / (hbar |Omega|) + 1/2)``.  With ``literal`` the
    opposite rotation ``e^{+2i theta}`` is used instead; the two agree only
    when ``e^{4i theta} = 1``.
    """
    rot = cmath.exp((2j if literal else -2j) * theta)
    return -(1j * E * rot / (d.hbar * d.omega_abs) + 0.5)


def _continuum_plain(d, theta, E, sign, x, literal):
    nu = continuum_nu(d, theta, E, literal)
    sign = Branch.parse(sign)
    arg = -int(sign) * cmath.sqrt(-2j) * cmath.exp(1j * theta) * d.sigma_abs / d.b0
    x = np.asarray(x, dtype=float)
    return sp.gamma(nu + 1) * parabolic_cylinder_D(-nu - 1, arg * x)


def continuum_eigenfunction(d: DerivedQuantities, theta: float, E: float, sign, x,
                            side: Side = Side.PLAIN, literal: bool = False):
    """Unnormalized continuum eigenfunction ``Gamma(nu+1) D_{-nu-1}(-+ sqrt(-2i) e^{i theta} |sigma| x/b0)``.

    ``side`` TILDE multiplies by ``Upsilon^{-1}(theta, x)``; BAR returns
    ``Upsilon(-theta, x) phi_E(-theta, x)``.  The normalization constant is 1.

    Raises
    ------
    OutOfAccuracyEnvelope
        When ``sqrt(2)|sigma x|/b0`` exceeds the parabolic-cylinder envelope.
    """
    _require(d)
    side = Side(side)
    x = np.asarray(x, dtype=float)
    if side is Side.BAR:
        return (upsilon(-theta, x, d=d) * _continuum_plain(d, -theta, E, sign, x, literal))[()]
    plain = _continuum_plain(d, theta, E, sign, x, literal)
    if side is Side.TILDE:
        plain = upsilon(theta, x, inverse=True, d=d) * plain
    return np.asarray(plain)[()]


def continuum_windowed_overlap(d: DerivedQuantities, theta: float, energies, L: float,
                               sign_bar, sign_tilde, nodes: int = 300) -> np.ndarray:
    """Matrix ``M[i, j] = int_{-L}^{L} conj(psibar_{E_i}) phitilde_{E_j} dx``.

    Fixed Gauss-Legendre rule with ``nodes`` points, since the integrand only
    decays like ``1/|x|`` and no truncation-error estimate exists.
    """
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    x, w = L * xg, L * wg
    bars = [continuum_eigenfunction(d, theta, E, sign_bar, x, Side.BAR) for E in energies]
    tildes = [continuum_eigenfunction(d, theta, E, sign_tilde, x, Side.TILDE)
              for E in energies]
    return np.array([[np.sum(np.conj(b) * t * w) for t in tildes] for b in bars])


__all__ = [
    "EigenstateId", "SpectralKind", "SpectralValue", "upsilon", "phi_n", "phi_stack",
    "eigenfunction", "eigenfunction_stack", "eigenvalue", "biorthogonality_matrix",
    "hamiltonian_apply_fd", "eigen_residual", "continuum_nu", "continuum_eigenfunction",
    "continuum_windowed_overlap", "discrete_half_width", "reduced_scale", "envelope_coefficient", "N_MAX",
]
