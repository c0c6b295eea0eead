import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stablefi import special
from stablefi.special import (PoleError, StableIndex, as_index, constants, gamma,
                              k_alpha_closed, k_alpha_quadrature)

alphas = st.floats(min_value=1.001, max_value=1.999)


def test_gamma_known_values():
    assert gamma(1.0) == 1.0
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(-0.125) == pytest.approx(-8.7172, abs=5e-5)
    assert gamma(-0.125) == pytest.approx(float(mpmath.gamma(-0.125)), rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


@given(st.floats(min_value=-6.9, max_value=6.0).filter(lambda v: abs(v - round(v)) > 1e-3))
def test_gamma_recurrence(x):
    assert abs(gamma(x + 1.0) - x * gamma(x)) <= 1e-12 * abs(gamma(x + 1.0)) + 1e-300


@given(st.floats(min_value=-6.9, max_value=6.0).filter(lambda v: abs(v - round(v)) > 1e-3))
def test_gamma_against_mpmath(x):
    assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)


def test_constants_at_three_halves():
    c = constants(1.5)
    assert c.c_alpha == pytest.approx(2 ** -0.5 / float(mpmath.gamma(0.75)) ** 2, rel=1e-14)
    assert c.c_alpha == pytest.approx(0.47089, abs=1e-5)
    assert c.omega_alpha == pytest.approx(1.59577, abs=1e-5)
    assert c.kappa == pytest.approx(0.05340, abs=1e-5)
    assert c.K_alpha == pytest.approx(0.13484, abs=1e-5)
    assert c.C_alpha == pytest.approx(0.299207, abs=1e-6)


@settings(max_examples=40)
@given(alphas)
def test_levy_constant_against_mpmath(a):
    ref = (a * mpmath.mpf(2) ** (a - 1) * mpmath.gamma((a + 1) / 2)
           / (mpmath.sqrt(mpmath.pi) * mpmath.gamma(1 - mpmath.mpf(a) / 2)))
    assert special.levy_constant(a) == pytest.approx(float(ref), rel=1e-13)


@settings(max_examples=25)
@given(alphas)
def test_k_alpha_against_mpmath_quadrature(a):
    with mpmath.workdps(30):
        b = mpmath.mpf(a)
        pref = (2 ** (2 - b) * (1 - b / 2)
                / (mpmath.gamma(1 - b / 2) * mpmath.gamma(b / 2)))
        # v = 1/u, then u = r^(1/(2-alpha)), absorbs the u^(1-alpha) factor
        p = 1 / (2 - b)

        def integrand(r):
            u = r ** p
            return (1 - u * u) ** (b / 2 - 1) / (1 + u)

        integral = p * mpmath.quad(integrand, [0, 0.5, 1])
    assert k_alpha_quadrature(a) == pytest.approx(float(pref * integral), rel=1e-9)
    assert k_alpha_quadrature(a) == pytest.approx(k_alpha_closed(a), rel=1e-8)


def test_omega_positive_on_range():
    for a in np.linspace(1.001, 1.999, 50):
        assert special.omega(a) > 0


@pytest.mark.parametrize("bad", [1.0, 2.0, 0.5, 1.0005, 1.9995, float("nan")])
def test_stable_index_guard(bad):
    with pytest.raises(ValueError):
        as_index(bad)


def test_stable_index_accepts_instance():
    assert as_index(StableIndex(1.5)) == 1.5
