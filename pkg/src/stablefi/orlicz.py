"""N-functions, their conjugates and inverses, and Orlicz norms under ``mu``.

An N-function is even, convex, vanishes only at 0 and satisfies
``Phi(x)/x -> 0`` at 0 and ``-> inf`` at infinity.  The families used by
the criteria are

* ``Power(r)``: ``|x|^r / r`` with ``r > 1``,
* ``XLog``: ``|x| log(1+|x|)``,
* ``XLogXi(xi)``: ``|x| log^xi(1+|x|)``,

plus arbitrary user functions.  Inverses and conjugates are computed by
vectorised bisection in ``log x``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .functionals import SupremumResult, tail_supremum
from .special import as_index

__all__ = [
    "NFunction",
    "NotInOrliczSpaceError",
    "parse_nfunction",
    "complementary",
    "conjugate_bruteforce",
    "inverse",
    "gauge_norm",
    "orlicz_norm",
    "delta_phi",
]

_BISECT_STEPS = 80


class NotInOrliczSpaceError(ValueError):
    """No finite ``k`` makes the modular ``int Phi(f/k) dmu`` at most one."""


def _solve_increasing(g, target, guess=1.0):
    """Vectorised root of a non-decreasing ``g`` on ``[0, inf)``: ``g(x) = target``.

    Bracket by repeated doubling/halving from ``guess``, then bisect in
    ``log x``.  Entries whose target cannot be reached return ``inf``.
    """
    t = np.atleast_1d(np.asarray(target, dtype=float))
    out = np.zeros_like(t)
    pos = t > 0
    if not np.any(pos):
        return out
    tp = t[pos]
    lo = np.full_like(tp, float(guess))
    hi = lo.copy()
    # expand until g(lo) <= t <= g(hi)
    for _ in range(2100):
        bad = g(lo) > tp
        if not np.any(bad):
            break
        lo[bad] *= 0.5
    for _ in range(2100):
        bad = g(hi) < tp
        if not np.any(bad) or np.all(np.isinf(hi[bad])):
            break
        hi[bad] *= 2.0
    reach = g(hi) >= tp
    llo, lhi = np.log(np.maximum(lo, 1e-308)), np.log(hi)
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (llo + lhi)
        up = g(np.exp(mid)) >= tp
        lhi = np.where(up, mid, lhi)
        llo = np.where(up, llo, mid)
        if np.all(lhi - llo < 1e-15):
            break
    res = np.exp(0.5 * (llo + lhi))
    res[~reach] = np.inf
    out[pos] = res
    return out


def _shape_back(out, like):
    return float(out[0]) if np.ndim(like) == 0 else out.reshape(np.shape(like))


@dataclass(frozen=True)
class NFunction:
    """Even convex N-function with its left derivative.

    Build instances with :meth:`power`, :meth:`xlog`, :meth:`xlogxi` or
    :meth:`custom`.  ``inverse_asym = (b, c, coef)`` records
    ``1 / Phi^-1(1/T) ~ coef * T^b log(1/T)^c`` as ``T -> 0``; the criteria
    use it to decide whether suprema stay finite.
    """

    family: str
    param: float = None
    _eval: object = field(default=None, repr=False, compare=False)
    _deriv: object = field(default=None, repr=False, compare=False)
    _inv: object = field(default=None, repr=False, compare=False)
    inverse_asym: tuple = field(default=None, compare=False)

    # -- constructors -----------------------------------------------------

    @classmethod
    def power(cls, r):
        r = float(r)
        if not r > 1.0:
            raise ValueError("Power N-function needs r > 1")
        return cls(
            "power", r,
            lambda x: np.abs(x) ** r / r,
            lambda x: np.abs(x) ** (r - 1.0),
            lambda t: (r * np.asarray(t, float)) ** (1.0 / r),
            (1.0 / r, 0.0, r ** (-1.0 / r)),
        )

    @classmethod
    def xlog(cls):
        def phi(x):
            ax = np.abs(x)
            return np.log1p(ax) + ax / (1.0 + ax)

        return cls("xlog", None, lambda x: np.abs(x) * np.log1p(np.abs(x)), phi,
                   None, (1.0, 1.0, 1.0))

    @classmethod
    def xlogxi(cls, xi):
        xi = float(xi)
        if not xi > 0.0:
            raise ValueError("XLogXi needs xi > 0")

        def ev(x):
            ax = np.abs(x)
            return ax * np.log1p(ax) ** xi

        def phi(x):
            ax = np.abs(x)
            lg = np.log1p(ax)
            with np.errstate(divide="ignore", invalid="ignore"):
                second = np.where(ax > 0, xi * ax * lg ** (xi - 1.0) / (1.0 + ax), 0.0)
            return lg ** xi + second

        return cls("xlogxi", xi, ev, phi, None, (1.0, xi, 1.0))

    @classmethod
    def custom(cls, func, derivative=None, inverse_asym=None, name="custom"):
        """Wrap a vectorised even convex ``func``.

        Without ``derivative`` a backward difference with step ``1e-6 x`` is
        used, so derivative-based quantities lose about six digits.
        """
        if derivative is None:
            def derivative(x):
                ax = np.abs(np.asarray(x, float))
                step = 1e-6 * np.maximum(ax, 1e-12)
                return (func(ax) - func(ax - step)) / step

        return cls(name, None, func, derivative, None, inverse_asym)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        out = self._eval(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, x):
        """Left derivative ``phi(x)`` for ``x >= 0``."""
        out = self._deriv(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def inverse(self, t):
        """Unique ``x >= 0`` with ``Phi(x) = t``."""
        if self._inv is not None:
            out = np.asarray(self._inv(t), float)
            return float(out) if out.ndim == 0 else out
        out = _solve_increasing(self._eval, t)
        return _shape_back(out, t)

    def complementary(self):
        """The conjugate ``Phi_c(y) = sup_x (x|y| - Phi(x))`` as an N-function.

        Its derivative is the generalised inverse of ``phi``.
        """
        parent = self

        def argmax(y):
            return _solve_increasing(parent._deriv, np.abs(np.asarray(y, float)))

        def ev(y):
            ay = np.abs(np.atleast_1d(np.asarray(y, float)))
            xs = argmax(ay)
            with np.errstate(invalid="ignore"):
                val = np.where(ay > 0, xs * ay - parent._eval(xs), 0.0)
            return _shape_back(val, y)

        def deriv(y):
            return _shape_back(argmax(y), y)

        asym = None
        if self.family == "power":
            rc = self.param / (self.param - 1.0)
            asym = (1.0 / rc, 0.0, rc ** (-1.0 / rc))
        return NFunction(f"conjugate[{self.label}]", None, ev, deriv, None, asym)

    def squared(self):
        """``Psi(x) = Phi(x^2)``, for which ``||f^2||_(Phi) = ||f||_(Psi)^2``."""
        parent = self
        inv = None if self._inv is None else (lambda t: np.sqrt(parent._inv(t)))
        return NFunction(
            f"squared[{self.label}]", None,
            lambda x: parent._eval(np.asarray(x, float) ** 2),
            lambda x: 2.0 * np.abs(x) * parent._deriv(np.asarray(x, float) ** 2),
            inv, None,
        )

    @property
    def label(self):
        return self.family if self.param is None else f"{self.family}:{self.param:g}"

    # -- diagnostics ------------------------------------------------------

    @property
    def delta2(self):
        """Whether ``Phi(2x)/Phi(x)`` stays bounded, judged on ``x = 10 .. 1e9``."""
        xs = np.array([10.0, 1e3, 1e6, 1e9])
        with np.errstate(over="ignore", invalid="ignore"):
            ratios = self._eval(2.0 * xs) / self._eval(xs)
        if not np.all(np.isfinite(ratios)):
            return False
        return bool(ratios[-1] <= 1.05 * ratios[-2] and ratios[-1] < 1e6)

    def validate(self, rng=None, n_triples=200):
        """Check the N-function axioms numerically; returns a dict of booleans."""
        rng = rng or np.random.default_rng(0)
        small = np.array([1e-8, 1e-6, 1e-4])
        large = np.array([1e4, 1e6, 1e8])
        rs = self._eval(small) / small
        rl = self._eval(large) / large
        a = np.exp(rng.uniform(-5, 5, n_triples))
        b = np.exp(rng.uniform(-5, 5, n_triples))
        mid = self._eval(0.5 * (a + b))
        avg = 0.5 * (self._eval(a) + self._eval(b))
        return {
            "zero_at_origin": bool(self._eval(np.array([0.0]))[0] == 0.0),
            "positive": bool(np.all(self._eval(np.concatenate([-a, a])) > 0)),
            "even": bool(np.allclose(self._eval(-a), self._eval(a), rtol=1e-14)),
            "small_ratio_to_zero": bool(np.all(np.diff(rs) > 0) and rs[0] < 1e-1),
            "large_ratio_to_inf": bool(np.all(np.diff(rl) > 0)),
            "convex": bool(np.all(mid <= avg * (1.0 + 1e-12))),
        }


def parse_nfunction(spec):
    """Parse ``power:R``, ``xlog`` or ``xlogxi:XI``."""
    name, _, arg = str(spec).strip().lower().partition(":")
    if name == "power":
        return NFunction.power(float(arg))
    if name == "xlog":
        return NFunction.xlog()
    if name == "xlogxi":
        return NFunction.xlogxi(float(arg))
    raise ValueError(f"unknown N-function {spec!r}; use power:R, xlog or xlogxi:XI")


def complementary(phi, y):
    """Conjugate ``sup_{x>=0} (x|y| - Phi(x))`` at ``y``."""
    return phi.complementary()(y)


def conjugate_bruteforce(phi, y, xmax=1e4, points=2_000_001):
    """Conjugate by maximising over a uniform grid on ``[0, xmax]``."""
    xs = np.linspace(0.0, xmax, points)
    vals = xs * abs(y) - phi(xs)
    i = int(np.argmax(vals))
    # refine with a parabola through the three grid values around the max
    if 0 < i < points - 1:
        fm, f0, fp = vals[i - 1], vals[i], vals[i + 1]
        den = fm - 2.0 * f0 + fp
        if den < 0:
            step = xs[1] - xs[0]
            shift = 0.5 * (fm - fp) / den
            xv = xs[i] + shift * step
            return float(xv * abs(y) - phi(xv))
    return float(vals[i])


def inverse(phi, t):
    return phi.inverse(t)


# -- norms -------------------------------------------------------------------

def _modular_values(f, w, breakpoints):
    x, wt = w.quadrature_rule(breakpoints)
    fx = np.abs(np.asarray(f(x), dtype=float))
    keep = wt > 0
    return fx[keep], wt[keep]


def _modular(phi, fx, wt, k):
    with np.errstate(over="ignore", invalid="ignore"):
        v = np.sum(wt * phi._eval(fx / k))
    return v if np.isfinite(v) else math.inf


def gauge_norm(phi, f, w, breakpoints=()):
    """``inf{k > 0 : int Phi(f/k) dmu <= 1}``.

    Parameters
    ----------
    phi : NFunction
    f : callable
        Vectorised function on the real line.
    w : Weight
    breakpoints : sequence of float
        Points where ``f`` is discontinuous or kinked; they become panel
        edges of the quadrature.

    Raises
    ------
    NotInOrliczSpaceError
        If no finite ``k`` brings the modular to one.
    """
    fx, wt = _modular_values(f, w, breakpoints)
    return _gauge_from_values(phi, fx, wt)


def _gauge_from_values(phi, fx, wt):
    if not np.any(fx > 0):
        return 0.0
    if not np.all(np.isfinite(fx)):
        raise NotInOrliczSpaceError("f is infinite on a set of positive measure")
    top = float(fx.max())
    hi = top
    for _ in range(4000):
        if _modular(phi, fx, wt, hi) <= 1.0:
            break
        hi *= 2.0
        if not math.isfinite(hi):
            raise NotInOrliczSpaceError("modular stays above one for every k")
    lo = hi
    while _modular(phi, fx, wt, lo) <= 1.0:
        lo *= 0.5
        if lo < 1e-300:
            return 0.0
    llo, lhi = math.log(lo), math.log(hi)
    for _ in range(200):
        mid = 0.5 * (llo + lhi)
        if _modular(phi, fx, wt, math.exp(mid)) <= 1.0:
            lhi = mid
        else:
            llo = mid
        if lhi - llo < 1e-15:
            break
    return math.exp(lhi)


def orlicz_norm(phi, f, w, breakpoints=(), tol=1e-12):
    """``inf_{k>0} (1 + int Phi(k f) dmu) / k``, by golden section in ``log k``.

    The objective is unimodal in ``k``, and the minimum lies between the
    gauge norm and twice the gauge norm.
    """
    fx, wt = _modular_values(f, w, breakpoints)
    g = _gauge_from_values(phi, fx, wt)
    if g == 0.0:
        return 0.0

    def objective(logk):
        k = math.exp(logk)
        return (1.0 + _modular(phi, fx, wt, 1.0 / k)) / k

    # at k = 1/g the objective equals 2g; search a generous window around it
    centre = -math.log(g)
    a, b = centre - 40.0, centre + 40.0
    inv_phi = 0.5 * (math.sqrt(5.0) - 1.0)
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    return min(fc, fd, objective(centre))


def delta_phi(phi, alpha, w, mass_tol=1e-6, **kw) -> SupremumResult:
    """``sup_x |x|^(alpha-1) / Phi^-1(1 / T(|x|))`` for a probability ``mu``."""
    a = as_index(alpha)
    if abs(w.total_mass() - 1.0) > mass_tol:
        raise ValueError("delta_phi needs a probability measure; normalise the weight")
    if a != w.alpha:
        raise ValueError("alpha does not match the weight")
    return tail_supremum(w, n=0.0, inverse=phi.inverse,
                         inverse_asym=phi.inverse_asym, **kw)
