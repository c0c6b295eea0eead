"""Fractional Laplacian, the Levy-type operator ``a Delta^(alpha/2) + b d/dx``,
and the associated quadratic forms.

All integrals act on compactly supported test functions.  The fractional
Laplacian uses the symmetric second difference

    Delta^(alpha/2) f(x) = C int_0^inf (f(x+z) + f(x-z) - 2 f(x)) z^(-1-alpha) dz,

whose integrand is ``O(z^(1-alpha))`` at the origin.  Double integrals are
written in the gap variable ``t = y - x`` and integrated on a log grid in
``t``; the band ``t < h`` uses a power-law fit of the inner integral.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._quad import _ts_rule, composite_nodes, gauss_legendre
from .special import as_index, constants

__all__ = [
    "TestFunction",
    "frac_laplacian",
    "levy_apply",
    "symmetry_defect",
    "drift_pairing",
    "dirichlet_form",
    "killing_kernel",
    "part_form",
    "PartForm",
    "hardy_rellich_check",
    "HardyRellich",
    "DivergentIntegralError",
]


class DivergentIntegralError(ArithmeticError):
    """A quadratic form or weighted integral is infinite for the given function."""


# -- test functions ------------------------------------------------------------

def _bump_parts(t):
    # exp(-1/(1-t^2)) and its first two t-derivatives, zero outside (-1, 1)
    t = np.asarray(t, float)
    inside = np.abs(t) < 1.0
    f = np.zeros_like(t)
    d1 = np.zeros_like(t)
    d2 = np.zeros_like(t)
    ti = t[inside]
    q = 1.0 - ti * ti
    with np.errstate(under="ignore"):
        e = np.exp(-1.0 / q)
    f[inside] = e
    d1[inside] = e * (-2.0 * ti / (q * q))
    d2[inside] = e * (6.0 * ti ** 4 - 2.0) / q ** 4
    return f, d1, d2


def _smooth_step(t):
    # 0 for t <= 0, 1 for t >= 1, C-infinity in between; value, d/dt, d2/dt2
    t = np.asarray(t, float)
    shape = t.shape
    t = t.ravel()

    def g(s):
        out = np.zeros((3,) + s.shape)
        # below 1e-3 exp(-1/s) underflows and the powers of 1/s would overflow
        pos = s > 1e-3
        sp = s[pos]
        # far-away nodes give sp**4 = inf, and 1/inf = 0 is the right limit
        with np.errstate(under="ignore", over="ignore"):
            e = np.exp(-1.0 / sp)
            out[0][pos] = e
            out[1][pos] = e / sp ** 2
            out[2][pos] = e * (1.0 / sp ** 4 - 2.0 / sp ** 3)
        return out

    n0, n1, n2 = g(t)
    m0, m1, m2 = g(1.0 - t)
    d0 = n0 + m0
    d1 = n1 - m1
    d2 = n2 + m2
    s0 = n0 / d0
    s1 = (n1 * d0 - n0 * d1) / d0 ** 2
    s2 = (n2 * d0 - n0 * d2) / d0 ** 2 - 2.0 * d1 * (n1 * d0 - n0 * d1) / d0 ** 3
    return s0.reshape(shape), s1.reshape(shape), s2.reshape(shape)


@dataclass(frozen=True)
class TestFunction:
    """Compactly supported function with its first two derivatives.

    ``f``, ``df`` and ``d2f`` are vectorised; ``support = (l, u)`` contains
    the set where ``f`` is non-zero and ``kinks`` lists interior points
    where ``f`` is only piecewise smooth.  Build instances with the
    class-method constructors and combine them with :meth:`times`,
    :meth:`times_polynomial`, :meth:`times_abs_power` and
    :meth:`restrict`.
    """

    f: object = field(repr=False)
    df: object = field(repr=False)
    d2f: object = field(repr=False)
    support: tuple = (-1.0, 1.0)
    kinks: tuple = ()
    name: str = "f"

    # -- constructors -----------------------------------------------------

    @classmethod
    def bump(cls, center=0.0, radius=1.0, amplitude=1.0):
        """``amplitude * exp(-1/(1-t^2))`` with ``t = (x-center)/radius``."""
        c, r, A = float(center), float(radius), float(amplitude)

        def parts(x):
            return _bump_parts((np.asarray(x, float) - c) / r)

        return cls(lambda x: A * parts(x)[0],
                   lambda x: A * parts(x)[1] / r,
                   lambda x: A * parts(x)[2] / r ** 2,
                   (c - r, c + r), (), f"bump({c:g},{r:g})")

    @classmethod
    def gaussian(cls, scale=1.0, cut=8.0, width=1.0):
        """``exp(-(x/scale)^2)`` cut off smoothly between ``|x| = cut-width`` and ``cut``."""
        s = float(scale)

        def gauss(x):
            x = np.asarray(x, float)
            e = np.exp(-(x / s) ** 2)
            return e, -2.0 * x / s ** 2 * e, (4.0 * x * x / s ** 4 - 2.0 / s ** 2) * e

        def chi(x):
            x = np.asarray(x, float)
            st = _smooth_step((cut - np.abs(x)) / width)
            sg = -np.sign(x) / width
            return st[0], st[1] * sg, st[2] / width ** 2

        def prod(x, k):
            g0, g1, g2 = gauss(x)
            c0, c1, c2 = chi(x)
            return (g0 * c0, g1 * c0 + g0 * c1, g2 * c0 + 2.0 * g1 * c1 + g0 * c2)[k]

        return cls(lambda x: prod(x, 0), lambda x: prod(x, 1), lambda x: prod(x, 2),
                   (-cut, cut), (), f"gauss({s:g})")

    @classmethod
    def from_callable(cls, f, support, df=None, d2f=None, kinks=(), name="f"):
        """Wrap user callables; missing derivatives use central differences."""
        width = support[1] - support[0]
        step = 1e-5 * width
        if df is None:
            def df(x):
                x = np.asarray(x, float)
                return (f(x + step) - f(x - step)) / (2.0 * step)
        if d2f is None:
            def d2f(x):
                x = np.asarray(x, float)
                return (f(x + step) - 2.0 * f(x) + f(x - step)) / step ** 2
        return cls(f, df, d2f, tuple(map(float, support)), tuple(kinks), name)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        out = np.asarray(self.f(np.asarray(x, float)), float)
        return float(out) if out.ndim == 0 else out

    def derivative(self, x, order=1):
        fn = {1: self.df, 2: self.d2f}[order]
        out = np.asarray(fn(np.asarray(x, float)), float)
        return float(out) if out.ndim == 0 else out

    @property
    def width(self):
        return self.support[1] - self.support[0]

    # -- algebra ----------------------------------------------------------

    def _combine(self, g0, g1, g2, kinks=(), name=None, support=None):
        f0, f1, f2 = self.f, self.df, self.d2f
        return TestFunction(
            lambda x: f0(x) * g0(x),
            lambda x: f1(x) * g0(x) + f0(x) * g1(x),
            lambda x: f2(x) * g0(x) + 2.0 * f1(x) * g1(x) + f0(x) * g2(x),
            support or self.support, tuple(sorted(set(self.kinks) | set(kinks))),
            name or self.name)

    def times(self, other):
        """Pointwise product with another test function."""
        lo = max(self.support[0], other.support[0])
        hi = min(self.support[1], other.support[1])
        if lo >= hi:
            lo = hi = 0.5 * (lo + hi)
        return self._combine(other.f, other.df, other.d2f, other.kinks,
                             f"{self.name}*{other.name}", (lo, hi))

    def times_polynomial(self, coeffs):
        """Product with ``sum coeffs[k] x^k``."""
        p = np.polynomial.Polynomial(coeffs)
        p1, p2 = p.deriv(1), p.deriv(2)
        return self._combine(p, p1, p2, name=f"{self.name}*poly")

    def times_abs_power(self, power):
        """Product with ``|x|^power``; adds a kink at 0."""
        q = float(power)

        def g0(x):
            return np.abs(x) ** q

        def g1(x):
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(x != 0, q * np.sign(x) * np.abs(x) ** (q - 1.0), 0.0)

        def g2(x):
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(x != 0, q * (q - 1.0) * np.abs(x) ** (q - 2.0), 0.0)

        return self._combine(g0, g1, g2, (0.0,), f"{self.name}*|x|^{q:g}")

    def restrict(self, intervals):
        """``f`` times the indicator of a union of open intervals."""
        iv = [tuple(map(float, i)) for i in intervals]

        def mask(x):
            x = np.asarray(x, float)
            m = np.zeros(x.shape, bool)
            for a, b in iv:
                m |= (x > a) & (x < b)
            return m

        f0, f1, f2 = self.f, self.df, self.d2f
        edges = sorted({e for i in iv for e in i})
        lo = max(self.support[0], edges[0])
        hi = min(self.support[1], edges[-1])
        return TestFunction(
            lambda x: np.where(mask(x), f0(x), 0.0),
            lambda x: np.where(mask(x), f1(x), 0.0),
            lambda x: np.where(mask(x), f2(x), 0.0),
            (lo, hi), tuple(sorted(set(self.kinks) | set(edges))),
            f"{self.name}|A")

    def scaled(self, c):
        return TestFunction(lambda x: c * self.f(x), lambda x: c * self.df(x),
                            lambda x: c * self.d2f(x), self.support, self.kinks,
                            f"{c:g}*{self.name}")

    def __add__(self, other):
        lo = min(self.support[0], other.support[0])
        hi = max(self.support[1], other.support[1])
        return TestFunction(lambda x: self.f(x) + other.f(x),
                            lambda x: self.df(x) + other.df(x),
                            lambda x: self.d2f(x) + other.d2f(x), (lo, hi),
                            tuple(sorted(set(self.kinks) | set(other.kinks))),
                            f"{self.name}+{other.name}")

    def smoothness_defect(self, rng=None, points=10):
        """Largest mismatch between ``df``/``d2f`` and finite differences.

        Sampled at random points away from kinks, relative to the sup of the
        respective derivative.
        """
        rng = rng or np.random.default_rng(0)
        l, u = self.support
        x = rng.uniform(l, u, 4 * points)
        if self.kinks:
            far = np.min(np.abs(x[:, None] - np.array(self.kinks)[None, :]), axis=1)
            x = x[far > 1e-3 * self.width]
        x = x[:points]
        h = 1e-4 * self.width
        grid = np.linspace(l, u, 2001)
        s1 = np.max(np.abs(self.df(grid))) + 1e-300
        s2 = np.max(np.abs(self.d2f(grid))) + 1e-300
        fd1 = (self.f(x + h) - self.f(x - h)) / (2.0 * h)
        fd2 = (self.df(x + h) - self.df(x - h)) / (2.0 * h)
        return float(max(np.max(np.abs(fd1 - self.df(x))) / s1,
                         np.max(np.abs(fd2 - self.d2f(x))) / s2))


# -- panel rules -----------------------------------------------------------------

def _ts_panels(edges, level=5):
    # double-exponential rule on each panel (both endpoints may be singular)
    frac, w = _ts_rule(level)
    edges = np.asarray(edges, float)
    width = np.diff(edges)
    keep = width > 0
    a, wd = edges[:-1][keep], width[keep]
    x = a[:, None] + wd[:, None] * frac[None, :]
    ww = wd[:, None] * w[None, :]
    # nodes that round onto an endpoint carry negligible weight; drop them
    inside = (x > a[:, None]) & (x < (a + wd)[:, None])
    return x[inside], ww[inside]


def _edges(lo, hi, points, min_panels=8):
    inner = [p for p in points if lo < p < hi]
    base = np.linspace(lo, hi, min_panels + 1)
    return np.unique(np.concatenate([base, inner]))


# -- the fractional Laplacian -------------------------------------------------------

def _frac_lap_scalar(f, a, x, C):
    l, u = f.support
    scale = f.width
    fx = float(f.f(np.array([x]))[0])
    # distance to the nearest kink bounds the Taylor segment
    kinks = [k for k in f.kinks]
    dk = min([abs(x - k) for k in kinks], default=math.inf)
    eps = min(1e-4 * scale, 0.5 * dk)
    zmax = max(u - x, x - l, eps * 2.0)
    # Taylor piece on [0, eps]
    d2 = float(f.d2f(np.array([x]))[0])
    total = d2 * eps ** (2.0 - a) / (2.0 - a)
    # log-z panels with breakpoints where x +- z crosses an edge or kink
    marks = [abs(p - x) for p in [l, u] + kinks]
    marks = [m for m in marks if eps < m < zmax]
    lz = np.log(eps)
    edges = np.unique(np.concatenate([
        np.arange(lz, math.log(zmax), 0.1), [math.log(zmax)],
        np.log(marks) if marks else []]))
    t, wt = composite_nodes(edges, 16)
    z = np.exp(t)
    second = f.f(x + z) + f.f(x - z) - 2.0 * fx
    total += float(np.sum(wt * second * z ** (-a)))
    # beyond zmax both shifted points are outside the support
    total += -2.0 * fx * zmax ** (-a) / a
    return C * total


def frac_laplacian(f, alpha, x):
    """``Delta^(alpha/2) f`` at ``x`` (scalar or array)."""
    a = as_index(alpha)
    C = constants(a).C_alpha
    xs = np.atleast_1d(np.asarray(x, float))
    out = np.array([_frac_lap_scalar(f, a, float(v), C) for v in xs])
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def _coef(fun, x):
    if fun is None:
        return np.zeros_like(np.asarray(x, float))
    if callable(fun):
        return np.asarray(fun(np.asarray(x, float)), float) * np.ones_like(x)
    return np.full_like(np.asarray(x, float), float(fun))


def levy_apply(a_fun, b_fun, f, alpha, x):
    """``a(x) Delta^(alpha/2) f(x) + b(x) f'(x)``.

    ``a_fun`` and ``b_fun`` are vectorised callables (a :class:`Weight`
    works for ``a``) or constants; ``b_fun=None`` means no drift.
    """
    x = np.asarray(x, float)
    av = _coef(a_fun, x)
    if np.any(av <= 0):
        raise ValueError("the diffusion coefficient a must be positive")
    out = av * frac_laplacian(f, alpha, x) + _coef(b_fun, x) * f.derivative(x)
    return float(out) if np.ndim(out) == 0 else out


def _union_nodes(funcs, panels=24, order=16):
    lo = min(f.support[0] for f in funcs)
    hi = max(f.support[1] for f in funcs)
    pts = set()
    for f in funcs:
        pts.update(f.support)
        pts.update(f.kinks)
    edges = _edges(lo, hi, pts, panels)
    return composite_nodes(edges, order)


def symmetry_defect(a_fun, b_fun, alpha, f, g):
    """``<Lf, g>_mu - <f, Lg>_mu`` with ``mu(dx) = dx / a(x)``."""
    x, w = _union_nodes([f, g])
    lf = levy_apply(a_fun, b_fun, f, alpha, x)
    lg = levy_apply(a_fun, b_fun, g, alpha, x)
    rho = 1.0 / _coef(a_fun, x)
    return float(np.sum(w * rho * (lf * g(x) - f(x) * lg)))


def drift_pairing(a_fun, b_fun, f, g):
    """``int b f' g dmu`` with ``mu(dx) = dx / a(x)``."""
    x, w = _union_nodes([f, g])
    return float(np.sum(w * _coef(b_fun, x) * f.derivative(x) * g(x) / _coef(a_fun, x)))


# -- quadratic forms ------------------------------------------------------------------

def _jump(f, k):
    d = 1e-12 * max(1.0, abs(k))
    return abs(float(f(k + d)) - float(f(k - d)))


def _gap_integral(f, g, lo, hi, t, kinks, level=4):
    """``int_lo^(hi-t) (f(x+t)-f(x)) (g(x+t)-g(x)) dx`` for one gap ``t``."""
    # panels graded geometrically away from each kink on the scale t
    grade = t * 8.0 ** np.arange(0, 12)
    grade = grade[grade < hi - lo]
    pts = set()
    for k in kinks:
        for c in (k, k - t):
            pts.add(c)
            pts.update(c + grade)
            pts.update(c - grade)
    edges = _edges(lo, hi - t, pts, 4)
    x, w = _ts_panels(edges, level)
    return float(np.sum(w * (f.f(x + t) - f.f(x)) * (g.f(x + t) - g.f(x))))


def _band_head(tk, Jk, a):
    """``int_0^t0 t^(-1-alpha) J(t) dt`` from samples at ``t0 * 10^k``, k = 0..3.

    ``J`` is modelled as ``c1 t^q + c2 t^(q+d)``: the local decade slopes
    converge geometrically to ``q`` and an Aitken step estimates the limit
    and the rate.  Smooth functions give ``q = 2`` and a single term.
    """
    t0, j0 = tk[0], Jk[0]
    if j0 == 0.0 or np.any(Jk[1:] / j0 <= 0):
        return 0.0
    s = np.log10(Jk[:-1] / Jk[1:])  # local exponents, nearest first
    d1, d2 = s[1] - s[0], s[2] - s[1]
    q = s[0]
    if abs(d1) > 1e-6 and abs(d2) > 1e-9:
        r = d2 / d1
        if 0.0 < r < 0.9:
            q = s[2] - d2 * d2 / (d2 - d1)
            d = -math.log10(r)
            # solve for the two coefficients at the two smallest gaps
            A = np.array([[tk[0] ** q, tk[0] ** (q + d)], [tk[1] ** q, tk[1] ** (q + d)]])
            c1, c2 = np.linalg.solve(A, Jk[:2])
            if q - a <= 0:
                raise DivergentIntegralError("the energy integral diverges on the diagonal")
            return (c1 * t0 ** (q - a) / (q - a)
                    + c2 * t0 ** (q + d - a) / (q + d - a))
    if q - a <= 0:
        raise DivergentIntegralError("the energy integral diverges on the diagonal")
    return j0 * t0 ** (-a) / (q - a)


def _triangle(f, g, lo, hi, a, band, panels_per_unit=6, order=16):
    """``2 int_0^(hi-lo) t^(-1-alpha) J(t) dt`` where ``J`` is the gap integral.

    The log-t rule covers ``[band/1000, hi-lo]``; below that the inner
    integral is replaced by the power-law model of :func:`_band_head`.
    For smooth functions this is the derivative-product surrogate
    ``t^2 int f' g'``.
    """
    width = hi - lo
    kinks = sorted({k for k in (*f.kinks, *g.kinks) if lo < k < hi})
    tmin = 1e-3 * band
    lt0, lt1 = math.log(tmin), math.log(width)
    npan = max(4, int(math.ceil((lt1 - lt0) * panels_per_unit)))
    edges = np.linspace(lt0, lt1, npan + 1)
    s, ws = composite_nodes(edges, order)
    ts = np.exp(s)
    J = np.array([_gap_integral(f, g, lo, hi, t, kinks) for t in ts])
    main = float(np.sum(ws * ts ** (-a) * J))
    tk = tmin * 10.0 ** -np.arange(4)
    Jk = np.array([_gap_integral(f, g, lo, hi, t, kinks) for t in tk])
    return 2.0 * (main + _band_head(tk, Jk, a))


def killing_kernel(alpha, x, intervals):
    """``int_{R minus the intervals} |x-y|^(-1-alpha) dy`` for ``x`` inside them.

    ``intervals`` is a sorted list of disjoint open intervals; the
    complement integral is a sum of closed-form power terms.
    """
    a = as_index(alpha)
    x = np.asarray(x, float)
    iv = sorted(tuple(map(float, i)) for i in intervals)
    # complement pieces: (-inf, l0], [u0, l1], ..., [u_last, inf)
    out = np.zeros_like(x)

    def seg(x, lo, hi):
        # int_lo^hi |x-y|^(-1-a) dy for x outside [lo, hi]
        with np.errstate(divide="ignore"):
            dlo, dhi = np.abs(x - lo), np.abs(x - hi)
        near, far = np.minimum(dlo, dhi), np.maximum(dlo, dhi)
        far_term = np.where(np.isinf(far), 0.0, far ** (-a))
        return (near ** (-a) - far_term) / a

    out += seg(x, -np.inf, iv[0][0])
    for (l0, u0), (l1, u1) in zip(iv[:-1], iv[1:]):
        out += seg(x, u0, l1)
    out += seg(x, iv[-1][1], np.inf)
    return out


def _boundary_term(f, g, lo, hi, a):
    # 2 int f g ((x-lo)^-a + (hi-x)^-a) / a over the hull
    kinks = [k for k in (*f.kinks, *g.kinks) if lo < k < hi]
    x, w = _ts_panels(_edges(lo, hi, kinks, 8))
    fg = f.f(x) * g.f(x)
    inside = (x > lo) & (x < hi) & (fg != 0)
    xi = x[inside]
    k = ((xi - lo) ** (-a) + (hi - xi) ** (-a)) / a
    return 2.0 * float(np.sum(w[inside] * fg[inside] * k))


def dirichlet_form(f, g, alpha, band=None):
    """``(C/2) int int (f(x)-f(y)) (g(x)-g(y)) |x-y|^(-1-alpha) dx dy``.

    Returns ``inf`` when ``f`` or ``g`` jumps (at a kink or at the edge of
    its support).
    """
    a = as_index(alpha)
    C = constants(a).C_alpha
    lo = min(f.support[0], g.support[0])
    hi = max(f.support[1], g.support[1])
    if hi <= lo:
        return 0.0
    for fn in (f, g):
        scale = float(np.max(np.abs(fn.f(np.linspace(*fn.support, 2001))))) + 1e-300
        for k in (*fn.kinks, *fn.support):
            if _jump(fn, k) > 1e-8 * scale:
                return math.inf
    band = band or 1e-3 * (hi - lo)
    inner = _triangle(f, g, lo, hi, a, band)
    return 0.5 * C * (inner + _boundary_term(f, g, lo, hi, a))


@dataclass
class PartForm:
    interior: float
    killing: float

    @property
    def total(self):
        return self.interior + self.killing


def part_form(f, alpha, n, N, band=None):
    """Energy of ``f 1_A`` for ``A = (-N, -n) u (n, N)`` split as interior + killing.

    ``interior`` is ``(C/2) int_A int_A (f(x)-f(y))^2 |x-y|^(-1-alpha)`` and
    ``killing`` is ``C int_A f^2 k_A`` with the closed-form kernel
    :func:`killing_kernel`.
    """
    a = as_index(alpha)
    if not 0 < n < N:
        raise ValueError("need 0 < n < N")
    C = constants(a).C_alpha
    right = (n, N)
    left = (-N, -n)
    band = band or 1e-3 * (N - n)
    fa = f.restrict([left, right])
    # same-component pairs: triangles on each component
    inner = 0.0
    for lo, hi in (left, right):
        inner += _triangle(fa, fa, lo, hi, a, band)
    # cross pairs, separated by 2n: smooth tensor rule (both orders)
    x, wx = _ts_panels(_edges(*right, f.kinks, 16))
    y, wy = _ts_panels(_edges(*left, f.kinks, 16))
    fx, fy = f.f(x), f.f(y)
    kern = np.abs(x[:, None] - y[None, :]) ** (-1.0 - a)
    cross = float(np.sum(wx[:, None] * wy[None, :] * (fx[:, None] - fy[None, :]) ** 2 * kern))
    inner += 2.0 * cross
    # killing term
    xs = np.concatenate([x, y])
    ws = np.concatenate([wx, wy])
    kill = float(np.sum(ws * np.concatenate([fx, fy]) ** 2
                        * killing_kernel(a, xs, [left, right])))
    return PartForm(0.5 * C * inner, C * kill)


@dataclass
class HardyRellich:
    lhs: float
    rhs: float
    passed: bool

    @property
    def ratio(self):
        return self.rhs / self.lhs if self.lhs > 0 else math.inf

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.passed))


def hardy_rellich_check(g, alpha, tol=1e-6):
    """Compare ``kappa int g^2 |x|^-alpha dx`` with ``E(g, g)``.

    Raises
    ------
    DivergentIntegralError
        If ``g(0) != 0`` so that the left side is infinite.
    """
    a = as_index(alpha)
    kappa = constants(a).kappa
    l, u = g.support
    scale = float(np.max(np.abs(g.f(np.linspace(l, u, 2001))))) + 1e-300
    if l < 0 < u and abs(float(g(0.0))) > 1e-12 * scale:
        raise DivergentIntegralError("g(0) != 0: the weighted integral diverges")
    edges = _edges(l, u, set(g.kinks) | {0.0}, 8)
    x, w = _ts_panels(edges)
    lhs = kappa * float(np.sum(w * g.f(x) ** 2 * np.abs(x) ** (-a)))
    rhs = dirichlet_form(g, g, a)
    return HardyRellich(lhs, rhs, bool(lhs <= rhs + tol))
