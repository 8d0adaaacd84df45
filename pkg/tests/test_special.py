import math

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given
from hypothesis import strategies as st

from swanson_csm import (QuadraturePolicy, QuadratureRule, assoc_laguerre, erf_complex,
                         hermite, hermite_functions, integrate_line, parabolic_cylinder_D)
from swanson_csm.errors import (DegreeTooLarge, OutOfAccuracyEnvelope, ToleranceNotReached)

small_complex = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12])
def test_hermite_matches_scipy(n):
    x = np.linspace(-4, 4, 17)
    np.testing.assert_allclose(hermite(n, x).real, sp.eval_hermite(n, x), rtol=1e-12,
                               atol=1e-12)


def test_hermite_low_degrees_exact():
    z = 0.3 + 0.7j
    assert hermite(2, z) == pytest.approx(4 * z * z - 2)
    assert hermite(3, z) == pytest.approx(8 * z ** 3 - 12 * z)


@given(st.integers(0, 30), small_complex)
def test_hermite_parity(n, z):
    assert hermite(n, -z) == pytest.approx((-1) ** n * hermite(n, z), rel=1e-10, abs=1e-10)


@given(st.integers(1, 30), small_complex)
def test_hermite_derivative_identity(n, z):
    # H_{n+1} = 2 z H_n - H_n'  and  H_n' = 2 n H_{n-1}
    lhs = hermite(n + 1, z)
    rhs = 2 * z * hermite(n, z) - 2 * n * hermite(n - 1, z)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9 * abs(hermite(n + 1, 3.0)))


def test_degree_limits():
    with pytest.raises(DegreeTooLarge):
        hermite(201, 0.0)
    with pytest.raises(DegreeTooLarge):
        hermite_functions(5, 0.0, n_max=4)
    with pytest.raises(ValueError):
        hermite(-1, 0.0)


def test_hermite_functions_orthonormal():
    x, w = np.polynomial.hermite.hermgauss(120)
    h = hermite_functions(40, x) * np.exp(x * x / 2)
    gram = (h * w) @ h.T
    np.testing.assert_allclose(gram.real, np.eye(41), atol=1e-12)


def test_hermite_functions_high_degree_finite():
    h = hermite_functions(200, np.linspace(-25, 25, 101))
    assert np.all(np.isfinite(h))


@given(st.integers(0, 10), st.integers(0, 6), st.floats(-5, 5))
def test_laguerre_matches_scipy(n, k, x):
    ref = sp.eval_genlaguerre(n, k, x)
    assert assoc_laguerre(n, k, x).real == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_laguerre_complex_matches_mpmath():
    z = 1.3 - 2.1j
    for n, k in [(0, 2), (3, 1), (6, 4)]:
        ref = complex(mpmath.laguerre(n, k, z))
        assert assoc_laguerre(n, k, z) == pytest.approx(ref, rel=1e-12)


@given(small_complex)
def test_erf_matches_mpmath(z):
    assert erf_complex(z) == pytest.approx(complex(mpmath.erf(z)), rel=1e-12, abs=1e-14)


def test_erf_envelope():
    with pytest.raises(OutOfAccuracyEnvelope):
        erf_complex(1 + 31j)


@pytest.mark.parametrize("nu,z", [(0.5, 1.2), (-0.5 - 0.3j, 2 + 1j), (2.0, -3.0),
                                  (-1.7 + 4j, 6 - 6j), (3j, 10 * np.exp(0.6j))])
def test_pcfd_matches_mpmath(nu, z):
    ref = complex(mpmath.pcfd(nu, z))
    assert parabolic_cylinder_D(nu, z) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("n", [0, 1, 4])
def test_pcfd_integer_order_is_hermite_function(n):
    x = np.linspace(-3, 3, 7)
    ref = 2.0 ** (-n / 2) * np.exp(-x * x / 4) * sp.eval_hermite(n, x / math.sqrt(2))
    np.testing.assert_allclose(parabolic_cylinder_D(n, x), ref, rtol=1e-11, atol=1e-14)


def test_pcfd_recurrence_check_and_envelope():
    parabolic_cylinder_D(-0.5 + 1j, 4 - 2j, check=True)
    with pytest.raises(OutOfAccuracyEnvelope):
        parabolic_cylinder_D(0.5, 25.0)
    with pytest.raises(OutOfAccuracyEnvelope):
        parabolic_cylinder_D(60.0, 1.0)


@given(st.floats(0.2, 5.0), st.floats(-1.0, 1.0))
def test_gaussian_quadrature(re_a, im_a):
    a = complex(re_a, im_a * re_a)
    val = integrate_line(lambda x: np.exp(-a * x * x), half_width=12.0 / math.sqrt(re_a))
    assert val == pytest.approx(np.sqrt(math.pi / a), rel=1e-11)


def test_quadrature_vector_valued_and_rules():
    f = lambda x: np.stack([np.exp(-x * x), x * x * np.exp(-x * x)])
    val = integrate_line(f, a=-10, b=10)
    np.testing.assert_allclose(val, [math.sqrt(math.pi), math.sqrt(math.pi) / 2], rtol=1e-12)
    trap = QuadraturePolicy(rule=QuadratureRule.TRAPEZOID_REFINED, panels=4, order=8)
    assert integrate_line(lambda x: np.exp(-x * x), trap, a=-9, b=9) == \
        pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_quadrature_policy_half_width_overrides():
    policy = QuadraturePolicy(half_width=1.0)
    assert integrate_line(lambda x: np.ones_like(x), policy, half_width=50.0) == \
        pytest.approx(2.0)


def test_quadrature_failure_raises():
    policy = QuadraturePolicy(panels=1, order=4, max_refinements=1)
    with pytest.raises(ToleranceNotReached):
        integrate_line(lambda x: np.sin(200 * x), policy, a=0, b=3)


def test_quadrature_full_output():
    res = integrate_line(lambda x: np.exp(-x * x), half_width=10.0, full_output=True)
    assert res.evaluations > 0 and res.error < 1e-12
