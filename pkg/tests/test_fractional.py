import math

import numpy as np
import pytest
from scipy.integrate import quad

from stablefi import fractional as fr
from stablefi.fractional import TestFunction as Fn
from stablefi.fractional import (DivergentIntegralError, dirichlet_form,
                                 drift_pairing, frac_laplacian, hardy_rellich_check,
                                 killing_kernel, levy_apply, part_form, symmetry_defect)
from stablefi.measure import Weight
from stablefi.special import constants, gamma

A = 1.5
C = constants(A).C_alpha


def frac_lap_oracle(f, a, x, support):
    # C int_0^inf (f(x+z) + f(x-z) - 2 f(x)) z^(-1-a) dz; on [0, e] the second
    # difference is replaced by its Taylor term f''(x) z^2 to avoid cancellation
    c = constants(a).C_alpha
    fx = f(x)
    e = 1e-3
    head = f.derivative(x, 2) * e ** (2 - a) / (2 - a)
    reach = max(abs(support[1] - x), abs(x - support[0]))
    kinks = sorted(p for p in (abs(support[1] - x), abs(x - support[0])) if e < p < reach)

    def integrand(z):
        return (f(x + z) + f(x - z) - 2.0 * fx) * z ** (-1.0 - a)

    body = quad(integrand, e, reach, points=kinks or None, epsabs=1e-14, epsrel=1e-12,
                limit=400)[0]
    tail = -2.0 * fx * reach ** (-a) / a
    return c * (head + body + tail)


def test_gaussian_fourier_oracle():
    f = Fn.gaussian(1.0)
    exact = -(2 ** A) * gamma((A + 1) / 2) / math.sqrt(math.pi)
    assert frac_laplacian(f, A, 0.0) == pytest.approx(exact, rel=1e-4)
    assert frac_laplacian(f, A, 0.0) == pytest.approx(exact, rel=1e-7)


@pytest.mark.parametrize("x", [0.7, 1.5])
def test_gaussian_off_centre_fourier(x):
    f = Fn.gaussian(1.0)
    # -(1/pi) int_0^inf xi^a sqrt(pi) e^(-xi^2/4) cos(x xi) d xi
    ref = -quad(lambda k: k ** A * math.exp(-k * k / 4) * math.cos(x * k), 0, 60,
                epsabs=0, epsrel=1e-12, limit=400)[0] / math.sqrt(math.pi)
    assert frac_laplacian(f, A, x) == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("x", [0.0, 0.3, -0.8, 1.7, 4.0])
def test_bump_against_quad(x):
    f = Fn.bump(0.2, 1.3)
    ref = frac_lap_oracle(f, A, x, f.support)
    assert frac_laplacian(f, A, x) == pytest.approx(ref, rel=1e-6, abs=1e-10)


def test_odd_function_vanishes_at_origin():
    f = Fn.bump(0.0, 2.0).times_polynomial([0.0, 1.0, 0.0, 0.5])
    assert abs(frac_laplacian(f, A, 0.0)) < 1e-12


def test_levy_apply_reductions():
    f = Fn.bump(0.0, 1.0)
    x = np.array([-0.5, 0.0, 0.4, 2.0])
    one = lambda y: np.ones_like(np.asarray(y, float))
    assert np.allclose(levy_apply(one, None, f, A, x), frac_laplacian(f, A, x), rtol=1e-14)
    w = Weight.poly(A, 2.0)
    drift = levy_apply(w, one, f, A, x) - w(x) * frac_laplacian(f, A, x)
    assert np.allclose(drift, f.derivative(x), atol=1e-12)
    with pytest.raises(ValueError):
        levy_apply(lambda y: -one(y), None, f, A, x)


def test_symmetric_defect_small():
    w = Weight.poly(A, 2.0)
    f, g = Fn.bump(-0.3, 1.0), Fn.bump(0.4, 0.9)
    x, wt = fr._union_nodes([f, g])
    scale = float(np.sum(wt / w(x) * (np.abs(levy_apply(w, None, f, A, x) * g(x))
                                        + np.abs(f(x) * levy_apply(w, None, g, A, x)))))
    assert abs(symmetry_defect(w, None, A, f, g)) <= 1e-6 * scale


def test_drift_defect_oracle():
    w = Weight.poly(A, 2.0)
    one = lambda y: np.ones_like(np.asarray(y, float))
    f, g = Fn.bump(-0.3, 1.0), Fn.bump(0.4, 0.9)
    ref = quad(lambda x: (f.derivative(x) * g(x) - f(x) * g.derivative(x)) / float(w(x)),
               -0.5, 0.7, epsabs=0, epsrel=1e-12)[0]
    assert symmetry_defect(w, one, A, f, g) == pytest.approx(ref, rel=1e-6)


def test_drift_pairing_integration_by_parts():
    w = Weight.poly(A, 2.0)
    one = lambda y: np.ones_like(np.asarray(y, float))
    f = Fn.bump(0.5, 1.0)
    lhs = 2.0 * drift_pairing(w, one, f, f)
    # -int f^2 (1/a)' dx
    rho_prime = lambda x: -A * 2.0 * np.sign(x) * (1 + abs(x)) ** (-A * 2.0 - 1) * w.scale ** -A
    ref = -quad(lambda x: f(x) ** 2 * rho_prime(x), -0.5, 1.5, points=[0.0],
                epsabs=0, epsrel=1e-12)[0]
    assert lhs == pytest.approx(ref, rel=1e-8)
    assert abs(lhs) > 1e-3


def test_energy_matches_pairing():
    f = Fn.bump(0.3, 1.2, 2.0)
    x, wt = fr._union_nodes([f])
    pairing = -float(np.sum(wt * f(x) * frac_laplacian(f, A, x)))
    assert dirichlet_form(f, f, A) == pytest.approx(pairing, rel=1e-6)


def test_energy_bilinear_and_symmetric():
    f, g = Fn.bump(0.0, 1.0), Fn.bump(0.5, 0.8)
    efg = dirichlet_form(f, g, A)
    assert efg == pytest.approx(dirichlet_form(g, f, A), rel=1e-8)
    assert dirichlet_form(f.scaled(3.0), g, A) == pytest.approx(3 * efg, rel=1e-8)
    fg = f + g
    expanded = dirichlet_form(f, f, A) + 2 * efg + dirichlet_form(g, g, A)
    assert dirichlet_form(fg, fg, A) == pytest.approx(expanded, rel=1e-6)


def test_energy_of_jump_is_infinite():
    f = Fn.bump(0.0, 2.0).restrict([(0.5, 1.5)])
    assert dirichlet_form(f, f, A) == math.inf


def test_energy_of_cusp_stable_in_band():
    f = Fn.bump(0.0, 1.0).times_abs_power(0.6)
    e1 = dirichlet_form(f, f, A, band=1e-3)
    e2 = dirichlet_form(f, f, A, band=1e-2)
    assert e1 == pytest.approx(e2, rel=1e-5)


@pytest.mark.parametrize("x", [-3.5, -1.2, 1.01, 2.0, 3.99])
def test_killing_kernel_against_quad(x):
    iv = [(-4.0, -1.0), (1.0, 4.0)]
    k = lambda y: abs(x - y) ** (-1 - A)
    ref = (quad(k, -np.inf, -4)[0] + quad(k, -1, 1, epsabs=0, epsrel=1e-12)[0]
           + quad(k, 4, np.inf)[0])
    assert float(killing_kernel(A, x, iv)) == pytest.approx(ref, rel=1e-9)


def test_part_form_matches_restricted_energy():
    n, N = 1.0, 4.0
    f = Fn.bump(0.3, 5.0).times_polynomial(
        np.polynomial.polynomial.polyfromroots([n, -n, N, -N]))
    pf = part_form(f, A, n, N)
    direct = dirichlet_form(f.restrict([(-N, -n), (n, N)]), f.restrict([(-N, -n), (n, N)]), A)
    assert pf.total == pytest.approx(direct, rel=1e-6)
    assert pf.total <= (6 * C / (constants(A).kappa * A) + 1) * dirichlet_form(f, f, A)


def test_part_form_zero_and_errors():
    f = Fn.bump(0.0, 0.5)
    assert part_form(f, A, 1.0, 4.0).total == 0.0
    with pytest.raises(ValueError):
        part_form(f, A, 4.0, 4.0)


def test_hardy_rellich():
    g = Fn.bump(0.1, 1.5).times_polynomial([0.0, 1.0])
    lhs, rhs, ok = hardy_rellich_check(g, A)
    assert ok and rhs > lhs > 0
    lhs3, rhs3, ok3 = hardy_rellich_check(g.scaled(3.0), A)
    assert ok3
    assert lhs3 == pytest.approx(9 * lhs, rel=1e-10)
    assert rhs3 == pytest.approx(9 * rhs, rel=1e-8)
    # profiles approaching |x|^((a-1)/2) bring the ratio down but keep it above one
    ratios = [hardy_rellich_check(Fn.bump(0.0, 1.0).times_abs_power((A - 1) / 2 + e),
                                  A).ratio for e in (0.3, 0.1, 0.05)]
    assert ratios[0] > ratios[1] > ratios[2] > 1
    with pytest.raises(DivergentIntegralError):
        hardy_rellich_check(Fn.bump(0.0, 1.0), A)


def test_smoothness_defect():
    assert Fn.bump(0.0, 1.0).smoothness_defect() < 1e-5
    assert Fn.gaussian(0.7).smoothness_defect() < 1e-5
