"""Model parameters, derived scales and region classification.

The Hamiltonian is

    H = hbar*omega*(a^dag a + 1/2) + hbar*alpha*a^2 + hbar*beta*a^dag^2

written in position space with length scale ``b0``.  Everything downstream
works with :class:`DerivedQuantities`, which bundles the mass-like scale
``m``, the complex frequency ``Omega`` and the dimensionless width ``sigma``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

from .errors import DegenerateParameters, RegionError

EP_TOL = 1e-12


class Branch(enum.IntEnum):
    """Resonance branch; the value is the sign in ``E = +-i hbar |Omega| (n + 1/2)``."""

    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> "Branch":
        if isinstance(value, Branch):
            return value
        text = str(value).strip().lower()
        if text in ("+", "plus", "+1", "1", "advanced"):
            return cls.PLUS
        if text in ("-", "minus", "-1", "retarded"):
            return cls.MINUS
        raise ValueError(f"unknown branch {value!r}")

    @property
    def symbol(self) -> str:
        return "+" if self is Branch.PLUS else "-"


class Side(enum.Enum):
    """Which member of a bi-orthogonal pair a function is."""

    PLAIN = "plain"
    TILDE = "tilde"
    BAR = "bar"


class Region(enum.Enum):
    INVERTED_OSCILLATOR = "InvertedOscillator"
    EXCEPTIONAL_POINT = "ExceptionalPoint"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class ModelParams:
    """Couplings, unit scales and the complex-scaling angle.

    Parameters
    ----------
    omega, alpha, beta : float
        Couplings in units of frequency.
    hbar : float
        Action unit, must be positive.
    b0 : float
        Length unit, must be positive.
    theta : float
        Complex-scaling angle in radians.
    """

    omega: float = 1.0
    alpha: float = -1.0
    beta: float = -0.5
    hbar: float = 1.0
    b0: float = 1.0
    theta: float = math.pi / 4

    def __post_init__(self):
        for name in ("omega", "alpha", "beta", "hbar", "b0", "theta"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.b0 <= 0:
            raise ValueError("b0 must be positive")

    @classmethod
    def from_omega_abs(cls, omega_abs: float, alpha: float = -1.0, omega: float = 1.0,
                       **kwargs) -> "ModelParams":
        """Pick ``beta`` so that ``omega^2 - 4 alpha beta = -omega_abs^2``."""
        beta = (omega ** 2 + omega_abs ** 2) / (4.0 * alpha)
        return cls(omega=omega, alpha=alpha, beta=beta, **kwargs)

    def with_theta(self, theta: float) -> "ModelParams":
        return ModelParams(self.omega, self.alpha, self.beta, self.hbar, self.b0, theta)


@dataclass(frozen=True)
class DerivedQuantities:
    """Scales derived from :class:`ModelParams`.

    Attributes
    ----------
    m : float
        ``hbar / ((omega - alpha - beta) b0^2)``.
    omega_sq : float
        ``omega^2 - 4 alpha beta``.
    omega_abs : float
        ``|Omega|``.
    phi : float
        Phase of ``Omega`` (``pi/2`` in the inverted region).
    sigma : complex
        ``sqrt(m Omega / hbar) b0`` on the principal branch.
    sigma_abs : float
        ``|sigma|``.
    gamma : float
        ``(alpha - beta) / (omega - alpha - beta)``.
    k : complex
        ``m Omega^2``.
    """

    m: float
    omega_sq: float
    omega_abs: float
    phi: float
    sigma: complex
    sigma_abs: float
    gamma: float
    k: complex
    hbar: float = 1.0
    b0: float = 1.0
    omega: float = math.nan
    alpha: float = math.nan
    beta: float = math.nan
    region: Region = field(default=Region.INVERTED_OSCILLATOR)

    @classmethod
    def synthetic(cls, sigma_abs: float, gamma: float, omega_abs: float = 1.0,
                  hbar: float = 1.0, b0: float = 1.0) -> "DerivedQuantities":
        """Build scales directly, bypassing couplings (for unit tests of formulas).

        The mass follows from ``|sigma|^2 = m |Omega| b0^2 / hbar``.
        """
        m = sigma_abs ** 2 * hbar / (omega_abs * b0 ** 2)
        omega = 1j * omega_abs
        return cls(m=m, omega_sq=-omega_abs ** 2, omega_abs=omega_abs, phi=math.pi / 2,
                   sigma=cmath.sqrt(m * omega / hbar) * b0, sigma_abs=sigma_abs,
                   gamma=gamma, k=m * omega ** 2, hbar=hbar, b0=b0)

    @property
    def has_couplings(self) -> bool:
        return math.isfinite(self.omega)

    def require_inverted(self) -> None:
        if self.region is not Region.INVERTED_OSCILLATOR:
            raise RegionError(
                "requires m > 0 and omega^2 - 4 alpha beta < 0, got "
                f"m={self.m:g}, omega^2-4ab={self.omega_sq:g}")


def derive_quantities(p: ModelParams, tol: float = EP_TOL) -> DerivedQuantities:
    """Compute the derived scales of ``p``.

    Raises
    ------
    DegenerateParameters
        If ``omega == alpha + beta``.
    """
    denom = p.omega - p.alpha - p.beta
    if denom == 0.0:
        raise DegenerateParameters("omega == alpha + beta: mass scale undefined")
    m = p.hbar / (denom * p.b0 ** 2)
    omega_sq = p.omega ** 2 - 4.0 * p.alpha * p.beta
    big_omega = cmath.sqrt(omega_sq)
    omega_abs = abs(big_omega)
    phi = cmath.phase(big_omega) if omega_abs > 0 else 0.0
    sigma = cmath.sqrt(m * big_omega / p.hbar) * p.b0
    return DerivedQuantities(
        m=m, omega_sq=omega_sq, omega_abs=omega_abs, phi=phi, sigma=sigma,
        sigma_abs=abs(sigma), gamma=(p.alpha - p.beta) / denom, k=m * big_omega ** 2,
        hbar=p.hbar, b0=p.b0, omega=p.omega, alpha=p.alpha, beta=p.beta,
        region=_region(m, omega_sq, tol))


def _region(m: float, omega_sq: float, tol: float) -> Region:
    if abs(omega_sq) <= tol:
        return Region.EXCEPTIONAL_POINT
    if m > 0 and omega_sq < 0:
        return Region.INVERTED_OSCILLATOR
    return Region.OUT_OF_SCOPE


def classify_region(p: ModelParams, tol: float = EP_TOL) -> Region:
    """Classify ``p`` as inverted oscillator, exceptional point or out of scope."""
    return derive_quantities(p, tol).region


def theta_domain(branch, theta: float) -> bool:
    """True when the ``branch`` eigenfunctions are square-integrable at ``theta``.

    The minus branch needs ``theta mod pi`` in ``(0, pi/2)``, the plus branch
    ``(pi/2, pi)``.  Endpoints are excluded.
    """
    branch = Branch.parse(branch)
    r = math.fmod(theta, math.pi)
    if r < 0:
        r += math.pi
    if branch is Branch.MINUS:
        return 0.0 < r < math.pi / 2
    return math.pi / 2 < r < math.pi


def _stretch_b(d: DerivedQuantities) -> float:
    return (d.gamma ** 2 + d.sigma_abs ** 4 - 1.0) / (2.0 * d.gamma)


def stretch_slope(d: DerivedQuantities, gamma_tol: float = 1e-14) -> float:
    """Slope ``B + sqrt(1 + B^2)`` of the W00 stretching line, ``B = (g^2+|s|^4-1)/2g``.

    At ``gamma = 0`` returns the analytic limit: 1 when ``|sigma|^4 = 1``,
    ``+inf`` otherwise.  For ``gamma < 0`` this expression is the magnitude
    of the principal-axis slope but not its sign, see
    :func:`principal_axis_slope`.
    """
    if abs(d.gamma) <= gamma_tol:
        return 1.0 if math.isclose(d.sigma_abs ** 4, 1.0, rel_tol=1e-12) else math.inf
    b = _stretch_b(d)
    root = math.hypot(1.0, b)
    return b + root if b >= 0 else 1.0 / (root - b)


def principal_axis_slope(d: DerivedQuantities, gamma_tol: float = 1e-14) -> float:
    """Slope ``dx/dp`` (units ``b0`` and ``hbar/b0``) of the major axis of W00 at theta=pi/4.

    Equals ``sign(gamma) sqrt(1 + B^2) - B``.  For ``gamma = 0`` the ellipse
    is axis aligned: ``+inf`` when it is elongated along x, ``0`` along p,
    ``nan`` when circular.
    """
    if abs(d.gamma) <= gamma_tol:
        s4 = d.sigma_abs ** 4
        if math.isclose(s4, 1.0, rel_tol=1e-12):
            return math.nan
        return math.inf if s4 < 1.0 else 0.0
    b = _stretch_b(d)
    root = math.hypot(1.0, b)
    if d.gamma > 0:
        return root - b if b <= 0 else 1.0 / (root + b)
    return -(root + b) if b >= 0 else -1.0 / (root - b)


def scaled_factor(d: DerivedQuantities, theta: float, branch) -> complex:
    """``exp(i(theta +- pi/4)) |sigma| / b0``, the argument scale of the Hermite functions."""
    branch = Branch.parse(branch)
    return cmath.exp(1j * (theta + branch * math.pi / 4)) * d.sigma_abs / d.b0


def parse_theta(value) -> float:
    """Parse a real angle or one of the literals ``pi/4``, ``pi/2``."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower().replace(" ", "")
    literals = {"pi/4": math.pi / 4, "pi/2": math.pi / 2}
    if text in literals:
        return literals[text]
    return float(text)
