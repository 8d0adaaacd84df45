import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swanson_csm import (PacketKind, Side, csm_rhs_equivalence_report, g_n,
                         packet_evolved_closed, persistence_scaled, rhs_biorthogonality,
                         rhs_evolve_gaussian, rhs_persistence, rhs_survival,
                         survival_probability)
from swanson_csm.errors import TruncationInsufficient
from swanson_csm.rhs import (csm_field_from_rhs, gaussian_coefficients, g_stack,
                             pair_exponent_real_part, rhs_eigenvalue, rhs_gaussian_closed,
                             rhs_survival_series)

THETA = math.pi / 4


def test_survival_display_values():
    q = math.exp(-1.0)
    assert rhs_survival(1.0) == pytest.approx(math.exp(4 * (q - 1)))
    assert rhs_survival(1.0) == pytest.approx(0.0797800, abs=5e-8)
    assert rhs_survival(0.0) == 1.0


@given(st.floats(0.0, 6.0))
def test_survival_displays_differ_by_decay(tau):
    assert survival_probability("g", tau) == pytest.approx(rhs_survival(tau) * math.exp(-tau),
                                                           rel=1e-12)


@given(st.floats(0.0, 4.0))
def test_series_survival_reproduces_csm(tau):
    from swanson_csm import ModelParams, derive_quantities
    d = derive_quantities(ModelParams())
    assert rhs_survival_series(d, tau) == pytest.approx(survival_probability("g", tau),
                                                        rel=1e-10)


def test_eigenvalues(d):
    assert rhs_eigenvalue(d, 2, "+") == pytest.approx(2.5j * d.omega_abs)
    assert rhs_eigenvalue(d, 2, "+", Side.BAR) == pytest.approx(-2.5j * d.omega_abs)


def test_real_line_pair_does_not_decay(d):
    x = np.linspace(-50, 50, 11)
    np.testing.assert_allclose(pair_exponent_real_part(d, "+", x), 0.0, atol=1e-12)


@pytest.mark.parametrize("branch", ["+", "-"])
def test_biorthogonality_on_ray(d, branch):
    for m in range(8):
        for n in range(8):
            val = rhs_biorthogonality(d, m, n, branch)
            assert val == pytest.approx(1.0 if m == n else 0.0, abs=1e-10)


@pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (0, 2), (3, 3), (2, 4), (1, 3), (4, 4),
                                 (5, 5)])
def test_biorthogonality_regularized(d, m, n):
    # accuracy degrades with m + n as the fitted polynomial grows
    val = rhs_biorthogonality(d, m, n, "+", method="regularized")
    tol = 1e-12 if m + n <= 4 else 1e-8
    assert val == pytest.approx(1.0 if m == n else 0.0, abs=tol)


def test_richardson_ladder_low_degree(d):
    assert rhs_biorthogonality(d, 0, 0, "+", method="richardson") == \
        pytest.approx(1.0, abs=1e-6)
    assert rhs_biorthogonality(d, 1, 2, "+", method="richardson") == 0


def test_unknown_method(d):
    with pytest.raises(ValueError):
        rhs_biorthogonality(d, 0, 0, method="other")


def test_bar_functions_real_line_only(d):
    with pytest.raises(ValueError):
        g_stack(d, 2, "+", Side.BAR, np.array([1.0 + 1.0j]))
    x = np.linspace(-2, 2, 5)
    assert g_n(d, 1, "+", Side.BAR, x) == pytest.approx(
        np.exp(-d.gamma * x * x / 2) * np.conj(g_n(d, 1, "+", Side.PLAIN, x)))


def test_coefficients_closed_form(d):
    c = gaussian_coefficients(d, 6)
    s0 = np.exp(0.25j * math.pi) * d.sigma_abs
    for n in range(6):
        norm = np.sqrt(s0 / (math.sqrt(math.pi) * 2.0 ** n * math.factorial(n)))
        assert c[n] == pytest.approx(1.0 / (math.factorial(n) * math.e * math.pi ** 0.25 * norm))
    np.testing.assert_allclose(gaussian_coefficients(d, 6, Side.BAR), np.conj(c))


@pytest.mark.parametrize("side,t,N", [(Side.TILDE, 0.0, 60), (Side.TILDE, 1.0, 60),
                                      (Side.BAR, 0.0, 60), (Side.BAR, 0.5, 100)])
def test_series_matches_resummed(d, side, t, N):
    x = np.linspace(-5, 5, 41) / d.sigma_abs
    series = rhs_evolve_gaussian(d, t, x, side, N)
    closed = rhs_gaussian_closed(d, t, x, side)
    assert np.max(np.abs(series - closed)) <= 1e-10 * np.max(np.abs(closed))


def test_bar_series_roundoff_floor(d):
    # growing bar coefficients make the sum cancel; accuracy is bounded by roundoff
    x = np.linspace(-5, 5, 41) / d.sigma_abs
    with pytest.raises(TruncationInsufficient):
        rhs_evolve_gaussian(d, 1.0, x, Side.BAR, 100, tol=1e-7)
    res = rhs_evolve_gaussian(d, 1.0, x, Side.BAR, 140, tol=1e-7, full_output=True)
    closed = rhs_gaussian_closed(d, 1.0, x, Side.BAR)
    err = np.max(np.abs(res.values - closed)) / np.max(np.abs(closed))
    assert res.roundoff > 1e-10
    assert err <= 100 * res.roundoff


def test_series_tail_guard(d):
    x = np.linspace(-5, 5, 11) / d.sigma_abs
    with pytest.raises(TruncationInsufficient):
        rhs_evolve_gaussian(d, 0.0, x, N=10)
    res = rhs_evolve_gaussian(d, 0.0, x, N=60, full_output=True)
    assert res.terms == 60 and res.tail <= 1e-10


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0])
def test_rotated_series_is_csm_field(d, t):
    x = np.linspace(-5, 5, 101) / d.sigma_abs
    csm = packet_evolved_closed(PacketKind.GAUSSIAN, Side.TILDE, d, THETA, x, t)
    np.testing.assert_allclose(csm_field_from_rhs(d, t, x), csm,
                               atol=1e-8 * np.max(np.abs(csm)))


@given(st.floats(0.5, 300.0), st.floats(0.0, 8.0))
def test_persistence_equivalence(ell, tau):
    assert rhs_persistence(ell, tau) == pytest.approx(
        float(np.real(persistence_scaled("g", ell, tau))), abs=1e-12)


def test_report(d):
    rows = csm_rhs_equivalence_report(d, (0.0, 1.0, 2.0), (200.0, 5.0))
    fields = [r for r in rows if r["quantity"] == "field_tilde"]
    pers = [r for r in rows if r["quantity"] == "persistence"]
    surv = [r for r in rows if r["quantity"] == "survival"]
    assert len(fields) == 3 and len(pers) == 6 and len(surv) == 3
    assert all(r["verdict"] == "agree" for r in fields + pers)
    assert {r["L"] for r in pers} == {200.0, 5.0}
    assert len({r["verdict"].split(";")[0] for r in surv}) == 1
    assert surv[0]["verdict"].startswith("quadrature and series reproduce")
