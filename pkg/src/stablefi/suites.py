"""Randomised property suites for the Orlicz, nonlocal and Green modules.

Each suite draws its cases from a seeded generator and returns a
:class:`SuiteReport`; a failed property is an entry with ``passed=False``,
never an exception.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import fractional as fr
from .green import GreenSample, verify_green_properties
from .measure import Weight
from .orlicz import NFunction, gauge_norm, orlicz_norm
from .special import as_index, constants

__all__ = [
    "SuiteReport",
    "verify_orlicz_properties",
    "verify_nonlocal_properties",
    "run_all",
]


@dataclass
class SuiteReport:
    name: str
    checks: dict

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks.values())

    def failures(self):
        return [k for k, c in self.checks.items() if not c["passed"]]

    def to_dict(self):
        return {"suite": self.name, "passed": self.passed, "checks": self.checks}


def _entry(value, tol, passed=None, **extra):
    ok = bool(value <= tol) if passed is None else bool(passed)
    return {"value": float(value), "tolerance": float(tol), "passed": ok, **extra}


# -- Orlicz -------------------------------------------------------------------------

def _random_nfunction(rng):
    kind = rng.integers(3)
    if kind == 0:
        return NFunction.power(float(rng.uniform(1.2, 3.0)))
    if kind == 1:
        return NFunction.xlog()
    return NFunction.xlogxi(float(rng.choice([0.25, 0.5, 1.0])))


def _random_weight(rng):
    alpha = float(rng.choice([1.2, 1.5, 1.8]))
    if rng.random() < 0.7:
        return Weight.poly(alpha, float(rng.choice([1.5, 2.0, 3.0])) / alpha * 1.5)
    return Weight.log(alpha, float(rng.choice([0.5, 1.0, 2.0])))


def _random_function(rng):
    """Bounded or slowly growing test function with its kink points."""
    kind = rng.integers(4)
    c = float(rng.uniform(-2, 2))
    s = float(rng.uniform(0.3, 3))
    A = float(rng.uniform(0.2, 5))
    if kind == 0:
        return (lambda x: A * np.exp(-((x - c) / s) ** 2)), (c,)
    if kind == 1:
        return (lambda x: A * (1.5 + np.cos(x / s))), ()
    if kind == 2:
        return (lambda x: A * np.abs(x - c) ** 0.3), (c,)
    return (lambda x: A * np.where(np.abs(x - c) < s, 1.0, 0.2)), (c - s, c + s)


def verify_orlicz_properties(seed=0, n_triples=50):
    """Norm sandwich, squared identity, indicator identity, inverse sandwiches, double conjugacy."""
    rng = np.random.default_rng(seed)
    checks = {}

    worst_lo = worst_hi = -math.inf
    worst_id = 0.0
    for _ in range(n_triples):
        phi = _random_nfunction(rng)
        w = _random_weight(rng)
        f, bp = _random_function(rng)
        g = gauge_norm(phi, f, w, bp)
        o = orlicz_norm(phi, f, w, bp)
        worst_lo = max(worst_lo, (g - o) / g)
        worst_hi = max(worst_hi, (o - 2.0 * g) / g)
        # ||f^2|| under Phi equals the square of ||f|| under Phi(x^2)
        lhs = gauge_norm(phi, lambda x: f(x) ** 2, w, bp)
        rhs = gauge_norm(phi.squared(), f, w, bp) ** 2
        worst_id = max(worst_id, abs(lhs - rhs) / rhs)
    checks["norm_sandwich"] = _entry(max(worst_lo, worst_hi), 1e-8,
                                     lower_margin=worst_lo, upper_margin=worst_hi)
    checks["squared_identity"] = _entry(worst_id, 1e-6)

    worst = 0.0
    for phi in (NFunction.xlog(), NFunction.power(2.0), NFunction.xlogxi(0.5)):
        w = Weight.poly(1.5, 2.0)
        for x in np.geomspace(0.1, 100, 13):
            x = float(x)
            g = gauge_norm(phi, lambda y, x=x: (np.abs(y) >= x).astype(float), w, (-x, x))
            exact = 1.0 / float(phi.inverse(1.0 / float(w.tail(x))))
            worst = max(worst, abs(g - exact) / exact)
    checks["indicator_identity"] = _entry(worst, 1e-6)

    ts = np.geomspace(2.0, 1e12, 200)
    viol = 0
    cases = [(NFunction.xlog(), 1.0)] + [(NFunction.xlogxi(xi), xi) for xi in (0.25, 0.5, 1.0)]
    for phi, xi in cases:
        inv = phi.inverse(ts)
        L = np.log(ts) ** xi
        viol += int(np.sum(inv < ts / (2.0 * L) * (1 - 1e-12)))
        viol += int(np.sum(inv > 2.0 * ts / L * (1 + 1e-12)))
    checks["inverse_sandwich"] = _entry(viol, 0)

    worst = 0.0
    xs = np.geomspace(0.01, 100, 60)
    for phi in (NFunction.power(2.0), NFunction.power(3.0), NFunction.xlog()):
        back = phi.complementary().complementary()
        worst = max(worst, float(np.max(np.abs(back(xs) - phi(xs)) / phi(xs))))
    checks["double_conjugacy"] = _entry(worst, 1e-6)
    return SuiteReport("orlicz", checks)


# -- nonlocal -------------------------------------------------------------------------

def _coefficients(rng):
    """Random smooth positive diffusion coefficient ``a``."""
    c0 = float(rng.uniform(0.5, 2.0))
    c1 = float(rng.uniform(0.0, 1.0))
    c2 = float(rng.uniform(-1.0, 1.0))
    return lambda x: c0 + c1 * np.asarray(x, float) ** 2 + 0.3 * np.sin(c2 * np.asarray(x, float))


def _scaled_defect(a_fun, b_fun, alpha, f, g):
    x, w = fr._union_nodes([f, g])
    lf = fr.levy_apply(a_fun, b_fun, f, alpha, x)
    lg = fr.levy_apply(a_fun, b_fun, g, alpha, x)
    rho = 1.0 / a_fun(x)
    raw = float(np.sum(w * rho * (lf * g(x) - f(x) * lg)))
    scale = float(np.sum(w * rho * (np.abs(lf * g(x)) + np.abs(f(x) * lg))))
    return raw, raw / scale


def _overlapping_pair(rng):
    c = float(rng.uniform(-1, 1))
    r = float(rng.uniform(0.6, 1.5))
    shift = float(rng.uniform(0.3, 0.9)) * r
    return fr.TestFunction.bump(c, r), fr.TestFunction.bump(c + shift, r * float(rng.uniform(0.7, 1.3)))


def verify_nonlocal_properties(alpha=1.5, seed=0, n_defect=20, n_oracle=5,
                               n_hardy=50, n_lemma=20, n_cross=3):
    """Symmetry defect, Hardy-Rellich, the part-form bound and the energy cross-check."""
    a = as_index(alpha)
    rng = np.random.default_rng(seed)
    checks = {}

    # b = 0: the operator is symmetric in L^2(mu)
    floor = 0.0
    for _ in range(n_defect):
        a_fun = _coefficients(rng)
        f, g = _overlapping_pair(rng)
        floor = max(floor, abs(_scaled_defect(a_fun, None, a, f, g)[1]))
    checks["symmetric_defect"] = _entry(floor, 1e-6)

    # b = 1: the defect equals the drift antisymmetry and stands above the floor
    from scipy.integrate import quad
    worst_rel, weakest = 0.0, math.inf
    for _ in range(n_oracle):
        a_fun = _coefficients(rng)
        f, g = _overlapping_pair(rng)
        raw, scaled = _scaled_defect(a_fun, 1.0, a, f, g)
        lo = max(f.support[0], g.support[0])
        hi = min(f.support[1], g.support[1])
        oracle = quad(lambda x: float((f.derivative(x) * g(x) - f(x) * g.derivative(x))
                                      / a_fun(x)), lo, hi, epsabs=0, epsrel=1e-12, limit=200)[0]
        worst_rel = max(worst_rel, abs(raw - oracle) / abs(oracle))
        weakest = min(weakest, abs(scaled) / max(floor, 1e-300))
    checks["drift_defect_oracle"] = _entry(worst_rel, 1e-6)
    checks["drift_defect_above_floor"] = _entry(weakest, 10.0, passed=weakest >= 10.0)

    # Hardy-Rellich on functions vanishing at the origin
    fails, worst_ratio = 0, math.inf
    for i in range(n_hardy):
        c = float(rng.uniform(-0.8, 0.8))
        r = float(rng.uniform(0.5, 2.5))
        base = fr.TestFunction.bump(c, max(r, abs(c) + 0.2))
        if i % 2 == 0:
            g = base.times_abs_power(float(rng.uniform((a - 1) / 2 + 0.05, 1.5)))
        else:
            g = base.times_polynomial([0.0, 1.0, float(rng.uniform(-1, 1))])
        res = fr.hardy_rellich_check(g, a)
        fails += not res.passed
        worst_ratio = min(worst_ratio, res.ratio)
    checks["hardy_rellich"] = _entry(fails, 0, min_ratio=worst_ratio, cases=n_hardy)

    # part-form bound for f vanishing on the boundary of A
    C0 = 6.0 * constants(a).C_alpha / (constants(a).kappa * a) + 1.0
    fails, worst = 0, 0.0
    for i in range(n_lemma):
        n, N = ((1.0, 4.0), (2.0, 8.0))[i % 2]
        R = N * float(rng.uniform(0.6, 1.5))
        c = float(rng.uniform(-0.5, 0.5)) * n
        f = fr.TestFunction.bump(c, R + abs(c)).times_polynomial(
            np.polynomial.polynomial.polyfromroots([n, -n, N, -N]))
        part = fr.part_form(f, a, n, N).total
        energy = fr.dirichlet_form(f, f, a)
        ratio = part / energy
        fails += not ratio <= C0
        worst = max(worst, ratio)
    checks["part_form_bound"] = _entry(fails, 0, max_ratio=worst, constant=C0, cases=n_lemma)

    # energy against -<f, Delta^(alpha/2) f>
    worst = 0.0
    for _ in range(n_cross):
        f = fr.TestFunction.bump(float(rng.uniform(-1, 1)), float(rng.uniform(0.5, 2)))
        x, w = fr._union_nodes([f])
        pairing = -float(np.sum(w * f(x) * fr.frac_laplacian(f, a, x)))
        energy = fr.dirichlet_form(f, f, a)
        worst = max(worst, abs(energy - pairing) / energy)
    checks["energy_cross_check"] = _entry(worst, 1e-4)
    return SuiteReport("nonlocal", checks)


def run_all(alpha=1.5, seed=0, green_sample=None):
    """All three suites with one seed; returns a list of reports."""
    sample = green_sample or GreenSample(seed=seed, weights=(
        Weight.poly(alpha, 2.0), Weight.log(alpha, 1.0)))
    g = verify_green_properties(alpha, sample)
    return [SuiteReport("green", g.checks),
            verify_orlicz_properties(seed),
            verify_nonlocal_properties(alpha, seed)]
