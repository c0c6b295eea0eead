import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from stablefi.functionals import tail_supremum
from stablefi.green import (DomainError, GreenSample, delta_n, delta_tilde_n, f_helper,
                            f_n, far_field_ratio, green_apply, green_diagonal,
                            green_scaled, green_unit, h, r_helper, s_helper,
                            theorem_bound, verify_green_properties)
from stablefi.measure import Weight
from stablefi.special import constants

# h(1.5, 2) from an mpmath tanh-sinh quadrature at 30 digits
H_15_2 = 1.0705741344570898


def h_oracle(a, x):
    with mpmath.workdps(30):
        return float(mpmath.quad(lambda z: (z * z - 1) ** (mpmath.mpf(a) / 2 - 1), [1, x]))


def test_h_frozen_value():
    assert h(1.5, 2.0) == pytest.approx(H_15_2, rel=1e-14)
    assert h(1.5, 1.0) == 0.0
    assert h(1.5, -2.0) == h(1.5, 2.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.05, 1.95), st.floats(1.0001, 1e5))
def test_h_against_oracle(a, x):
    assert h(a, x) == pytest.approx(h_oracle(a, x), rel=1e-11)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.05, 1.95), st.floats(1.0, 1e9))
def test_h_sandwich(a, x):
    lo = (x ** (a - 1) - 1) / (a - 1)
    hi = (x - 1) ** (a - 1) / (a - 1)
    v = h(a, x)
    assert lo * (1 - 1e-12) - 1e-300 <= v <= hi * (1 + 1e-12) + 1e-300


def test_h_domain():
    with pytest.raises(DomainError):
        h(1.5, 0.5)


def test_green_symmetries():
    assert green_unit(1.5, 2.0, 3.0) == pytest.approx(green_unit(1.5, 3.0, 2.0), rel=1e-14)
    assert green_unit(1.5, 2.0, 3.0) == pytest.approx(green_unit(1.5, -2.0, -3.0), rel=1e-14)
    assert green_unit(1.5, 1.0, 3.0) == 0.0


def test_green_scaling():
    assert green_scaled(1.5, 1.0, 2.0, 3.0) == green_unit(1.5, 2.0, 3.0)
    assert green_scaled(1.5, 2.0, 4.0, 6.0) == pytest.approx(
        2 ** 0.5 * green_unit(1.5, 2.0, 3.0), rel=1e-14)
    ratio = green_diagonal(1.5, 2.0, 4.0) / green_diagonal(1.5, 1.0, 2.0)
    assert ratio == pytest.approx(2 ** 0.5, rel=1e-14)


def test_green_diagonal_limit():
    y = 2.0
    d = green_diagonal(1.5, 1.0, y)
    # the gap closes like e^(alpha-1): a factor sqrt(10) per decade of e
    gaps = []
    for k in (6, 7, 8):
        e = 10.0 ** -k
        off = 0.5 * (green_unit(1.5, y + e, y) + green_unit(1.5, y - e, y))
        gaps.append(abs(off - d) / d)
    assert gaps[-1] < 1e-4
    assert gaps[0] / gaps[1] == pytest.approx(10 ** 0.5, rel=1e-3)
    assert green_diagonal(1.5, 1.0, 1.0) == 0.0
    assert green_diagonal(1.5, 1.0, 1.0 + 1e-12) < 1e-5


def test_green_far_field():
    a, x = 1.5, 2.0
    g = green_unit(a, x, 1e8)
    assert g == pytest.approx(far_field_ratio(a) * h(a, x), rel=1e-3)


def test_green_far_field_is_not_k_alpha():
    # the closed-form kernel tends to c Gamma(a/2) Gamma((3-a)/2) h(x) / sqrt(pi)
    a = 1.5
    with mpmath.workdps(30):
        ref = (constants(a).c_alpha * mpmath.gamma(a / 2) * mpmath.gamma((3 - a) / 2)
               / mpmath.sqrt(mpmath.pi))
    assert far_field_ratio(a) == pytest.approx(float(ref), rel=1e-14)
    assert far_field_ratio(a) / constants(a).K_alpha > 2.5


def test_helpers_at_origin():
    assert r_helper(1.5, 1.0 + 1e-12, 0.0) == pytest.approx(0.0, abs=1e-6)
    xs = np.linspace(1.1, 30, 20)
    assert np.max(np.abs(s_helper(1.5, xs, 0.0))) < 1e-12


def test_f_helper_is_scaled_kernel():
    a = 1.5
    x, u = 2.5, np.array([0.1, 1.0, 7.0, 300.0])
    g = green_unit(a, x, x + u) / constants(a).c_alpha
    assert np.allclose(f_helper(a, x, u), g, rtol=1e-10)


def test_f_n_values():
    assert f_n(1.5, 1.0, 1.0) == pytest.approx(0.75 ** 0.25, rel=1e-15)
    assert f_n(1.5, 0.0, 9.0) == pytest.approx(3.0 ** 0.5 * 1.0, rel=1e-15)
    x = 1e10
    assert f_n(1.5, 1.0, x) / x ** 0.25 == pytest.approx(1.0, rel=1e-9)


def _apply_oracle(a, n, w, f, x):
    def integrand(y):
        return green_scaled(a, n, x, y) * f(y) / float(w(y))

    pts = sorted({n, abs(x), 2 * abs(x)})
    total = 0.0
    for sign in (1.0, -1.0):
        for lo, hi in zip(pts[:-1], pts[1:]):
            total += quad(lambda t: integrand(sign * t), lo, hi, epsrel=1e-11, limit=200)[0]
        total += quad(lambda t: integrand(sign * t), pts[-1], np.inf, epsrel=1e-11,
                      limit=400)[0]
    return total


def test_green_apply_against_quad():
    a, n, x = 1.5, 1.0, 2.0
    w = Weight.poly(a, 2.0)
    f = lambda y: f_n(a, n, y)
    got = green_apply(a, n, w, f, x)
    assert got == pytest.approx(_apply_oracle(a, n, w, f, x), rel=1e-7)
    assert green_apply(a, n, w, lambda y: np.zeros_like(np.asarray(y, float)), x) == 0.0


def test_theorem_bound_example():
    a, n, x = 1.5, 1.0, 2.0
    w = Weight.poly(a, 2.0)
    bound = theorem_bound(a, delta_n(a, w, n).value)
    ratio = green_apply(a, n, w, lambda y: f_n(a, n, y), x) / f_n(a, n, x)
    assert ratio <= bound


def test_delta_tilde_trends():
    a = 1.5
    fast = [delta_tilde_n(a, Weight.poly(a, 2.0), n).value for n in (1, 10, 100, 1000)]
    assert all(u > v for u, v in zip(fast, fast[1:]))
    assert fast[-1] < 0.05
    slow = [delta_tilde_n(a, Weight.poly(a, 1.0), n).value for n in (1, 10, 100, 1000)]
    assert slow[-1] > 0.5 * slow[0] > 0


@pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0, 3.0])
def test_delta_chain(gamma):
    a = 1.5
    w = Weight.poly(a, gamma)
    beta = 2.0 ** (-1.0 / (a - 1.0))
    for n in (1.0, 5.0, 50.0):
        lhs = delta_n(a, w, 2 * n).value
        rhs = (2 - 2 * beta) * tail_supremum(w, shift=n, n=2 * n).value
        assert lhs <= rhs * (1 + 1e-9)


def test_verify_green_small_sample():
    rep = verify_green_properties(1.5, GreenSample(
        n_pairs=100, n_monotone=500, n_limit=20, n_diagonal=5,
        weights=(Weight.poly(1.5, 2.0),), ns=(1.0,), n_theorem_x=2))
    failed = [k for k, c in rep.checks.items() if not c["passed"]]
    assert failed == ["limit"]
