import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import simpson

from swanson_csm import (ModelParams, PacketKind, PhaseSpaceGrid, QuadraturePolicy, Side,
                         density_from_wigner, density_x, derive_quantities, eigenfunction_stack,
                         packet_evolved_closed, principal_axis, principal_axis_slope,
                         wigner_grid, wigner_mn, wigner_numeric, wigner_packet_closed)
from swanson_csm.errors import DegreeTooLarge, RegionError
from swanson_csm.figures import WIGNER_SETS
from swanson_csm.propagator import eigenstate_evolution_closed
from swanson_csm.wigner import default_axes, ps_coords, wigner_packet_raw

THETA = math.pi / 4
KINDS = list(PacketKind)


def _lattice(d, n=9, span=3.0):
    xs = np.linspace(-span, span, n) / d.sigma_abs
    ps = np.linspace(-span, span, n) * d.sigma_abs
    return np.meshgrid(xs, ps, indexing="ij")


def _eigen_pair(d, theta, m, n, branch, t=0.0):
    fac_b = eigenstate_evolution_closed(m, branch, t, Side.BAR, d.omega_abs)
    fac_t = eigenstate_evolution_closed(n, branch, t, Side.TILDE, d.omega_abs)
    fb = lambda y: fac_b * eigenfunction_stack(d, theta, m, branch, Side.BAR, y)[m]
    ft = lambda y: fac_t * eigenfunction_stack(d, theta, n, branch, Side.TILDE, y)[n]
    return fb, ft


@pytest.mark.parametrize("theta,branch", [(THETA, "-"), (0.3, "-"), (1.2, "-"), (2.0, "+")])
def test_wigner_mn_matches_quadrature(d, theta, branch):
    X, P = _lattice(d)
    for m in range(3):
        for n in range(3):
            for t in (0.0, 0.7):
                fb, ft = _eigen_pair(d, theta, m, n, branch, t)
                ref = wigner_mn(d, theta, m, n, branch, X, P, t)
                num = wigner_numeric(fb, ft, d, theta, X, P, t=t)
                assert np.max(np.abs(num - ref)) <= 1e-7 * np.max(np.abs(ref))


@given(st.integers(0, 8), st.floats(0.0, 20.0))
def test_diagonal_time_independent(n, t):
    d = derive_quantities(ModelParams())
    X, P = _lattice(d, 5)
    assert np.array_equal(wigner_mn(d, THETA, n, n, "-", X, P, t),
                          wigner_mn(d, THETA, n, n, "-", X, P, 0.0))


@given(st.integers(0, 4), st.integers(0, 4), st.floats(0.0, 2.0))
def test_off_diagonal_time_factor(m, n, tau):
    d = derive_quantities(ModelParams())
    a = wigner_mn(d, THETA, m, n, "-", 0.3, -0.4, tau)
    b = wigner_mn(d, THETA, m, n, "-", 0.3, -0.4, 0.0)
    assert a == pytest.approx(b * math.exp(-(n - m) * tau), rel=1e-12, abs=1e-300)


def test_ground_state_positive_and_w22_negative(d):
    xs, ps = default_axes(d, 81, 4.0)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    w00 = wigner_mn(d, THETA, 0, 0, "-", X, P)
    w22 = wigner_mn(d, THETA, 2, 2, "-", X, P)
    assert np.max(np.abs(w00.imag)) <= 1e-14 and np.min(w00.real) >= 0
    assert np.max(np.abs(w22.imag)) <= 1e-12
    assert np.min(w22.real) < -0.5
    assert w22.real[40, 40] == pytest.approx(2.0)


@pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (0, 2), (2, 1)])
def test_phase_space_biorthonormality(d, m, n):
    xs, ps = default_axes(d, 241, 9.0)
    grid = wigner_grid(d, THETA, xs, ps, m, n)
    total = simpson(simpson(grid.values, x=ps, axis=1), x=xs) / (2 * math.pi * d.hbar)
    assert total == pytest.approx(1.0 if m == n else 0.0, abs=1e-9)


@pytest.mark.parametrize("kind", KINDS)
def test_packet_closed_matches_quadrature(d, kind):
    X, P = _lattice(d, 9)
    for t in (0.0, 1.0):
        fb = lambda y: packet_evolved_closed(kind, Side.BAR, d, THETA, y, t)
        ft = lambda y: packet_evolved_closed(kind, Side.TILDE, d, THETA, y, t)
        ref = wigner_packet_raw(kind, d, THETA, X, P, t)
        num = wigner_numeric(fb, ft, d, THETA, X, P, t=t)
        assert np.max(np.abs(num - ref)) <= 1e-7 * np.max(np.abs(ref))


@pytest.mark.parametrize("kind", KINDS)
def test_packet_closed_normalized(kind):
    g = np.linspace(-12, 12, 481)
    Pg, Xg = np.meshgrid(g, g + 0.0, indexing="ij")
    for tau in (0.0, 0.5):
        Xs = np.linspace(-12, 12 + 4 * math.cosh(tau), 601)
        Pg, Xg = np.meshgrid(g, Xs, indexing="ij")
        w = wigner_packet_closed(kind, Pg, Xg, tau)
        total = simpson(simpson(w, x=Xs, axis=1), x=g)
        assert total == pytest.approx(1.0, abs=1e-9)


@given(st.sampled_from(KINDS), st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1.5))
def test_cosh_sinh_packets_symmetric(kind, P, X, tau):
    if kind is PacketKind.GAUSSIAN:
        return
    w = wigner_packet_closed(kind, P, X, tau)
    assert wigner_packet_closed(kind, -P, -X, tau) == pytest.approx(w, rel=1e-12, abs=1e-300)
    assert np.conj(wigner_packet_closed(kind, -P, X, tau)) == \
        pytest.approx(w, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("kind", KINDS)
def test_marginal_is_density(d, kind):
    for tau in (0.0, 1.0):
        t = tau / d.omega_abs
        xs = np.linspace(-4.0, 4.0 + 2 * math.cosh(tau), 21) / d.sigma_abs
        grid = PhaseSpaceGrid.from_function(
            lambda x, p: wigner_packet_raw(kind, d, THETA, x, p, t), xs, np.array([-1.0, 1.0]),
            THETA, t)
        half = (12.0 + 8.0 * math.sinh(tau)) * d.sigma_abs
        rho = density_from_wigner(grid, QuadraturePolicy(), d.hbar, half)
        ref = density_x(kind, d, THETA, xs, t)
        np.testing.assert_allclose(rho, ref, atol=1e-10 * np.max(np.abs(ref)))


def test_marginal_from_samples(d):
    xs, ps = default_axes(d, 41, 10.0)
    grid = wigner_grid(d, THETA, xs, ps, 0, 0)
    from swanson_csm import eigenfunction_stack as stack
    ref = np.conj(stack(d, THETA, 0, "-", Side.BAR, xs)[0]) * stack(d, THETA, 0, "-",
                                                                      Side.TILDE, xs)[0]
    np.testing.assert_allclose(density_from_wigner(grid, hbar=d.hbar), ref, atol=1e-3)


@pytest.mark.parametrize("panel", sorted(WIGNER_SETS))
def test_principal_axis_matches_slope(panel):
    alpha, beta = WIGNER_SETS[panel]
    d = derive_quantities(ModelParams(1.0, alpha, beta))
    xs, ps = default_axes(d, 401, 8.0, stretch=True)
    grid = wigner_grid(d, THETA, xs, ps, 0, 0)
    expected = principal_axis_slope(d)
    if math.isnan(expected):
        return
    assert principal_axis(grid) == pytest.approx(expected, rel=1e-3)


def test_principal_axis_positive_gamma():
    d = derive_quantities(ModelParams(1.0, -0.5, -2.0))
    assert d.gamma > 0
    xs, ps = default_axes(d, 401, 8.0, stretch=True)
    grid = wigner_grid(d, THETA, xs, ps, 0, 0)
    assert principal_axis(grid) == pytest.approx(principal_axis_slope(d), rel=1e-3)


def test_scaled_momentum_real_at_quarter_pi(d):
    P, X = ps_coords(d, THETA, 0.7, -0.3)
    assert abs(P.imag) <= 1e-15 and abs(X.imag) <= 1e-15


def test_guards(d):
    with pytest.raises(RegionError):
        wigner_packet_raw("g", d, 0.3, 0.0, 0.0, 0.0)
    with pytest.raises(DegreeTooLarge):
        wigner_mn(d, THETA, 201, 0, "-", 0.0, 0.0)
    with pytest.raises(ValueError):
        PhaseSpaceGrid(np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.zeros((2, 2)), THETA)
    with pytest.raises(ValueError):
        PhaseSpaceGrid(np.array([0.0, 1.0]), np.array([0.0, 1.0]), np.zeros((3, 2)), THETA)
