import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swanson_csm import (ComplexField, DensityRegime, ModelParams, PacketKind, QuadraturePolicy,
                         Side, current_closed, density_closed, density_x, derive_quantities,
                         evolve_quadrature, moments, packet_evolved_closed, packet_initial,
                         persistence_Q, persistence_scaled, survival_general,
                         survival_probability)
from swanson_csm.errors import OverflowGuard, RegionError
from swanson_csm.packets import (continuity_residual, eigen_continuity_residual,
                                 moments_quadrature, pair_product, peak_centres,
                                 persistence_quadrature, survival_amplitude)

THETA = math.pi / 4
KINDS = list(PacketKind)
kinds = st.sampled_from(KINDS)


def test_survival_closed_values():
    q = math.exp(-1.0)
    assert survival_probability("g", 1.0) == pytest.approx(math.exp(4 * (q - 1) - 1))
    assert survival_probability("g", 1.0) == pytest.approx(0.0293494, abs=5e-8)
    assert survival_probability("c", 1.0) == pytest.approx(
        (math.cosh(2 * q) / math.cosh(2)) ** 2 * math.exp(-1))
    for kind in KINDS:
        assert survival_probability(kind, 0.0) == pytest.approx(1.0)


@given(kinds, st.floats(0.0, 10.0), st.floats(0.0, 2.0))
def test_survival_nonincreasing(kind, tau, dtau):
    assert survival_amplitude(kind, tau + dtau) <= survival_amplitude(kind, tau) + 1e-15


@pytest.mark.parametrize("kind", KINDS)
def test_survival_quadrature_matches_closed(d, kind):
    for tau in (0.0, 0.5, 2.0):
        ref = survival_probability(kind, tau, d.omega_abs)
        assert survival_general(kind, d, THETA, tau) == pytest.approx(ref, rel=1e-8)


def test_survival_independent_of_theta(d):
    ref = survival_probability("g", 1.0)
    assert survival_general("g", d, 0.5, 1.0) == pytest.approx(ref, rel=1e-8)


def test_survival_ep_oracle(d_ep):
    # width-w packet rotated so it decays on the scaled line: P = 1/(1 + hbar t/(2 m w^2))
    r = cmath.exp(-0.25j * math.pi)
    policy = QuadraturePolicy(panels=8, half_width=60.0)
    for w in (1.0, 2.0, 4.0):
        f = lambda z, w=w: np.sqrt(r / w) * math.pi ** -0.25 * np.exp(-(r * z) ** 2 / (2 * w * w))
        for t in (0.5, 1.0, 3.0):
            expected = 1.0 / (1.0 + d_ep.hbar * t / (2 * d_ep.m * w * w))
            assert survival_general(f, d_ep, THETA, t, policy) == pytest.approx(expected,
                                                                                rel=1e-8)
    assert 1.0 / (1.0 + 1.0 / (2 * d_ep.m * 4.0)) == pytest.approx(0.8)


def test_survival_ep_packets(d_ep):
    with pytest.raises(RegionError):
        survival_general("g", d_ep, THETA, 1.0)
    for kind in KINDS:
        assert survival_probability(kind, np.array([0.0, 1.0, 1e3]), d_ep.omega_abs).tolist() \
            == [1.0, 1.0, 1.0]


@pytest.mark.parametrize("kind", KINDS)
def test_closed_evolution_matches_quadrature(d, kind):
    x = np.linspace(-4, 6, 11)
    f0 = ComplexField.from_function(lambda y: packet_evolved_closed(kind, Side.TILDE, d, THETA,
                                                                    y, 0.0), x, THETA)
    ev = evolve_quadrature(f0, d, THETA, 0.8, x=x).values
    ref = packet_evolved_closed(kind, Side.TILDE, d, THETA, x, 0.8)
    np.testing.assert_allclose(ev, ref, atol=1e-9 * np.max(np.abs(ref)))


def test_initial_packet_is_undressed_closed_form(d):
    x = np.linspace(-3, 3, 7)
    closed = packet_evolved_closed("c", Side.TILDE, d, 0.5, x, 0.0)
    from swanson_csm import upsilon
    np.testing.assert_allclose(closed, upsilon(0.5, x, inverse=True, d=d)
                               * packet_initial("c", d, 0.5, x))


def test_packet_guards(d):
    with pytest.raises(RegionError):
        packet_evolved_closed("g", Side.TILDE, d, 0.0, 0.0, 0.0)
    with pytest.raises(OverflowGuard):
        packet_evolved_closed("g", Side.BAR, d, THETA, 0.0, 5.0)
    with pytest.raises(ValueError):
        PacketKind.parse("triangle")


@pytest.mark.parametrize("theta", [THETA, 0.5, 1.2])
@pytest.mark.parametrize("kind", KINDS)
def test_density_is_pair_product(d, kind, theta):
    x = np.linspace(-4, 6, 11)
    for t in (0.0, 1.0):
        ref = pair_product(kind, d, theta, x, x, t, t)
        np.testing.assert_allclose(density_x(kind, d, theta, x, t), ref,
                                   atol=1e-12 * np.max(np.abs(ref)))


@given(kinds, st.floats(0.0, 4.0))
def test_density_normalized(kind, tau):
    assert persistence_quadrature(kind, 40.0 + 2 * math.cosh(tau), tau) == \
        pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_asymptotic_density_bound(kind):
    X = np.linspace(-1200, 1200, 240001)
    for tau in (1.0, 3.0, 7.0):
        gap = np.max(np.abs(density_closed(kind, X, tau)
                            - density_closed(kind, X, tau, DensityRegime.ASYMPTOTIC)))
        assert gap <= 0.86 * math.exp(-tau)
        if tau == 7.0:
            assert gap <= 1e-3


@given(kinds, st.floats(-6, 6))
def test_ep_density_is_exact_at_zero_time(kind, X):
    assert density_closed(kind, X, 0.0, DensityRegime.EP) == \
        pytest.approx(density_closed(kind, X, 0.0), rel=1e-12, abs=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_continuity_second_order(d, kind):
    x = np.linspace(-8, 8, 401) / d.sigma_abs
    r1, peak = continuity_residual(kind, d, THETA, x, 0.7, 1e-3, 1e-3)
    r2, _ = continuity_residual(kind, d, THETA, x, 0.7, 5e-4, 5e-4)
    assert r1 <= 1e-5 * peak
    assert math.log2(r1 / r2) >= 1.8


@pytest.mark.parametrize("kind", KINDS)
def test_current_from_fields_matches_closed(d, kind):
    # the dressing term is what makes the field current agree with the closed one
    x = np.linspace(-6, 8, 57) / d.sigma_abs
    r, peak = continuity_residual(kind, d, THETA, x, 0.5, 1e-3, 1e-3, source="fields")
    assert r <= 1e-5 * peak


def test_eigen_continuity(d):
    x = np.linspace(-4, 4, 41)
    assert eigen_continuity_residual(d, THETA, x, 0.3) <= 1e-7


def test_gaussian_current_value(d):
    J = complex(current_closed("g", d, THETA, 2 * math.cosh(1.0), 1.0))
    assert J == pytest.approx(d.hbar / d.m * d.sigma_abs * 2 * math.sinh(1.0) / math.sqrt(math.pi))


@given(kinds, st.floats(0.0, 3.0))
def test_moments_closed_vs_quadrature(kind, tau):
    a, b = moments(kind, tau), moments_quadrature(kind, tau)
    assert a.mean_X == pytest.approx(b.mean_X, abs=1e-8)
    assert a.mean_X2 == pytest.approx(b.mean_X2, rel=1e-10)


@given(st.floats(0.0, 6.0))
def test_gaussian_variance_constant(tau):
    m = moments("g", tau)
    assert m.mean_X == pytest.approx(2 * math.cosh(tau))
    assert m.var_X == pytest.approx(0.5, abs=1e-9 * m.mean_X2)


@given(kinds, st.floats(1.0, 30.0), st.floats(0.0, 3.0))
def test_persistence_closed_vs_quadrature(kind, ell, tau):
    closed = float(np.real(persistence_scaled(kind, ell, tau)))
    assert closed == pytest.approx(persistence_quadrature(kind, ell, tau), abs=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_persistence_plateau_then_decay(kind):
    ell = 200.0
    tau = np.linspace(0.0, 8.0, 801)
    Q = np.real(persistence_scaled(kind, ell, tau))
    plateau = tau < math.log(ell) - 1.0
    assert np.all(np.abs(Q[plateau] - 1.0) <= 1e-8)
    assert np.all(np.diff(Q) <= 1e-15)
    assert Q[-1] < 1e-3


def test_persistence_physical_units(d):
    L, t = 3.0, 0.4
    ref = persistence_scaled("s", d.sigma_abs * L, d.omega_abs * t)
    assert complex(persistence_Q("s", d, THETA, L, t)) == pytest.approx(complex(ref))


def test_peak_centres():
    assert peak_centres("g", 1.5) == pytest.approx([2 * math.cosh(1.5)], abs=1e-6)
    far = peak_centres("c", 4.0)
    assert len(far) == 2
    assert far == pytest.approx([-2 * math.cosh(4.0), 2 * math.cosh(4.0)], rel=1e-3)


@pytest.mark.parametrize("kind", ["c", "s"])
def test_current_finite_far_out(d, kind):
    J = current_closed(kind, d, math.pi / 4, np.array([-400.0, 0.0, 400.0]), 3.0)
    assert np.all(np.isfinite(J))
    assert abs(J[0]) == 0.0 and abs(J[2]) == 0.0
