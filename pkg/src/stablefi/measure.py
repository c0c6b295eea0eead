"""Weights ``a(x)`` and the reversible measure ``mu(dx) = dx / a(x)``.

Two built-in families reproduce the standard polynomial and
polynomial-times-logarithm examples:

* ``poly``: ``sigma(x) = C (1 + |x|)^gamma``, so ``a(x) = C^alpha (1+|x|)^(alpha gamma)``;
* ``log``:  ``sigma(x) = C (1 + |x|) log^(gamma/alpha)(e + |x|)``.

Custom weights wrap any positive callable.  Tail functionals
``T(x) = mu((-x, x)^c)`` are exact for ``poly`` and computed by quadrature
otherwise.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

from ._quad import composite_nodes, gauss_legendre, tanh_sinh
from .special import as_index

__all__ = [
    "InfiniteMassError",
    "NonIntegrableError",
    "TailHint",
    "Weight",
    "normalizing_constant",
    "total_mass",
    "tail",
    "moment_alpha_minus_1",
]

_QUAD_OPTS = dict(epsabs=0.0, epsrel=1e-12, limit=400)


class InfiniteMassError(ValueError):
    """The measure ``dx / a(x)`` has infinite total mass."""


class NonIntegrableError(InfiniteMassError):
    """No normalising constant exists for the requested parameters."""


@dataclass(frozen=True)
class TailHint:
    """Asymptotics ``T(x) ~ coefficient * x^(-power) * log(x)^(-log_power)``.

    ``power = 0`` with ``log_power <= 1`` or ``power < 0`` signals infinite
    mass.  ``coefficient`` may be left as ``None`` when only the exponents
    are known.
    """

    power: float
    log_power: float = 0.0
    coefficient: float = None

    def finite_mass(self):
        return self.power > 0.0


def _log_profile_mass(alpha, gamma):
    # unnormalised mass of (1+|x|)^-alpha log^-gamma(e+|x|) over the line
    def g(u):
        # x = e^u - 1 maps [0, inf) to u in [0, inf)
        if u > 700.0:
            return 0.0
        x = math.expm1(u)
        return (1.0 + x) ** (1.0 - alpha) * math.log(math.e + x) ** (-gamma)

    val, _ = integrate.quad(g, 0.0, np.inf, **_QUAD_OPTS)
    return 2.0 * val


def normalizing_constant(family, alpha, gamma):
    """Scale ``C`` such that ``sigma = C * profile`` gives a probability measure.

    Raises
    ------
    NonIntegrableError
        For ``poly`` with ``alpha * gamma <= 1``.
    """
    a = as_index(alpha)
    if family == "poly":
        if a * gamma <= 1.0:
            raise NonIntegrableError(
                f"(1+|x|)^(-{a * gamma}) is not integrable; need alpha*gamma > 1")
        return 2.0 ** (1.0 / a) * (a * gamma - 1.0) ** (-1.0 / a)
    if family == "log":
        return _log_profile_mass(a, gamma) ** (1.0 / a)
    raise ValueError(f"no normalising constant for family {family!r}")


@dataclass(frozen=True)
class Weight:
    """Coefficient ``a(x) > 0`` of the symmetric operator ``a(x) Delta^(alpha/2)``.

    Use the :meth:`poly`, :meth:`log` and :meth:`custom` constructors rather
    than the raw initialiser.
    """

    family: str
    alpha: float
    gamma: float = None
    scale: float = 1.0
    evaluator: object = field(default=None, compare=False, repr=False)
    hint: TailHint = None
    closed_form_tail: bool = True

    # -- constructors -----------------------------------------------------

    @classmethod
    def poly(cls, alpha, gamma, scale=None):
        """``a(x) = (C (1+|x|)^gamma)^alpha``.

        With ``scale=None`` the probability normalisation is used when it
        exists and ``C = 1`` otherwise (infinite mass).
        """
        a = as_index(alpha)
        if scale is None:
            scale = (normalizing_constant("poly", a, gamma)
                     if a * gamma > 1.0 else 1.0)
        p = a * gamma - 1.0
        coef = 2.0 * scale ** (-a) / p if p > 0 else None
        return cls("poly", a, float(gamma), float(scale),
                   hint=TailHint(p, 0.0, coef))

    @classmethod
    def log(cls, alpha, gamma, scale=None):
        """``a(x) = (C (1+|x|) log^(gamma/alpha)(e+|x|))^alpha``."""
        a = as_index(alpha)
        if scale is None:
            scale = normalizing_constant("log", a, gamma)
        coef = 2.0 * scale ** (-a) / (a - 1.0)
        return cls("log", a, float(gamma), float(scale),
                   hint=TailHint(a - 1.0, float(gamma), coef))

    @classmethod
    def custom(cls, alpha, a, hint=None, scale=1.0):
        """Wrap a vectorised positive callable ``a``.

        ``a`` is multiplied by ``scale**alpha``.  Without a :class:`TailHint`
        mass finiteness and criterion verdicts fall back to numerics.
        """
        return cls("custom", as_index(alpha), None, float(scale),
                   evaluator=a, hint=hint, closed_form_tail=False)

    @classmethod
    def constant(cls, alpha, value=1.0):
        """``a = value``: Lebesgue measure scaled by ``1/value`` (infinite mass)."""
        return cls.custom(alpha, lambda x: np.full_like(np.asarray(x, float), value),
                          hint=TailHint(-1.0, 0.0))

    def normalized(self):
        """Copy rescaled so that the total mass is one."""
        m = self.total_mass()
        # mass scales like scale^-alpha
        new_scale = self.scale * m ** (1.0 / self.alpha)
        if self.family == "poly":
            return Weight.poly(self.alpha, self.gamma, new_scale)
        if self.family == "log":
            return Weight.log(self.alpha, self.gamma, new_scale)
        hint = self.hint
        if hint is not None and hint.coefficient is not None:
            hint = replace(hint, coefficient=hint.coefficient / m)
        return replace(self, scale=new_scale, hint=hint)

    # -- pointwise --------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        if self.family == "poly":
            return (self.scale * (1.0 + ax) ** self.gamma) ** self.alpha
        if self.family == "log":
            return (self.scale ** self.alpha * (1.0 + ax) ** self.alpha
                    * np.log(math.e + ax) ** self.gamma)
        return self.scale ** self.alpha * np.asarray(self.evaluator(x), float)

    def sigma(self, x):
        """Diffusion coefficient ``a(x)^(1/alpha)`` of the driving SDE."""
        return self(x) ** (1.0 / self.alpha)

    def density(self, x):
        """Density of ``mu`` with respect to Lebesgue measure."""
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        # direct forms avoid overflow of a(x) far out in the tail
        if self.family == "poly":
            return self.scale ** (-self.alpha) * (1.0 + ax) ** (-self.alpha * self.gamma)
        if self.family == "log":
            return (self.scale ** (-self.alpha) * (1.0 + ax) ** (-self.alpha)
                    * np.log(math.e + ax) ** (-self.gamma))
        return 1.0 / self(x)

    @property
    def even(self):
        return self.family in ("poly", "log")

    # -- mass and tails ---------------------------------------------------

    def finite_mass(self):
        """``True``/``False`` when decidable, ``None`` for an unhinted custom weight."""
        if self.hint is not None:
            return self.hint.finite_mass()
        slope = self._density_slope()
        if slope < -1.05:
            return True
        if slope > -0.95:
            return False
        return None

    def _density_slope(self):
        # local power-law exponent of the density far out on both sides
        xs = np.array([1e6, 1e8])
        right = np.diff(np.log(self.density(xs))) / np.diff(np.log(xs))
        left = np.diff(np.log(self.density(-xs))) / np.diff(np.log(xs))
        return float(max(right[0], left[0]))

    def _half_tail(self, x, sign):
        # integral of the density over (x, inf) (sign=+1) or (-inf, -x) (sign=-1)
        f = self.density

        def near(y):
            return f(sign * y)

        def far(u):
            y = (x + 1.0) * math.exp(u)
            return f(sign * y) * y

        # y = (x+1) e^u; beyond the float range the remaining mass is negligible
        umax = 700.0 - math.log1p(x)
        v1, _ = integrate.quad(near, x, x + 1.0, **_QUAD_OPTS)
        v2, _ = integrate.quad(far, 0.0, umax, **_QUAD_OPTS)
        return v1 + v2

    def total_mass(self):
        """``mu(R)``; raises :class:`InfiniteMassError` when it diverges."""
        if self.finite_mass() is False:
            raise InfiniteMassError(f"{self!r} has infinite mass")
        if self.family == "poly":
            return 2.0 * self.scale ** (-self.alpha) / (self.alpha * self.gamma - 1.0)
        return self._quad_tail(0.0)

    def _quad_tail(self, x):
        if self.even:
            return 2.0 * self._half_tail(x, 1.0)
        return self._half_tail(x, 1.0) + self._half_tail(x, -1.0)

    def tail(self, x):
        """``T(x) = mu((-x, x)^c)`` for scalar or array ``x >= 0``."""
        if self.finite_mass() is False:
            raise InfiniteMassError(f"{self!r} has infinite mass")
        xa = np.asarray(x, dtype=float)
        if np.any(xa < 0):
            raise ValueError("tail is defined for x >= 0")
        if self.family == "poly" and self.closed_form_tail:
            p = self.alpha * self.gamma - 1.0
            out = 2.0 * self.scale ** (-self.alpha) / p * (1.0 + xa) ** (-p)
            return float(out) if out.ndim == 0 else out
        if xa.ndim == 0:
            return self._quad_tail(float(xa))
        return np.array([self._quad_tail(v) for v in xa.ravel()]).reshape(xa.shape)

    def tail_on_grid(self, xs):
        """Tail values on an increasing grid of non-negative points.

        Cell masses between consecutive grid points are integrated with a
        10-point Gauss-Legendre rule and accumulated from the top, where the
        remaining tail is computed adaptively.  Much cheaper than calling
        :meth:`tail` point by point.
        """
        xs = np.asarray(xs, dtype=float)
        if self.family == "poly" and self.closed_form_tail:
            return self.tail(xs)
        if self.finite_mass() is False:
            raise InfiniteMassError(f"{self!r} has infinite mass")
        t0, w0 = gauss_legendre(10)
        lo, hi = xs[:-1], xs[1:]
        nodes = lo[:, None] + (hi - lo)[:, None] * t0[None, :]
        dens = self.density(nodes)
        if not self.even:
            dens = dens + self.density(-nodes)
        else:
            dens = 2.0 * dens
        cells = ((hi - lo)[:, None] * w0[None, :] * dens).sum(axis=1)
        top = self._quad_tail(xs[-1])
        return top + np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]])

    def tail_hint(self):
        return self.hint

    # -- integration against mu --------------------------------------------

    def quadrature_rule(self, breakpoints=(), panels=8, order=12, span=200.0):
        """Nodes ``x`` and weights ``w`` with ``sum(w g(x)) ~ int g dmu``.

        The line is cut at 0, +-1 and the given breakpoints.  Finite pieces
        get ``panels`` Gauss-Legendre panels; the two infinite pieces are
        mapped by ``x = b + sign (e^u - 1)`` and covered up to ``u = span``.
        """
        pts = {0.0, 1.0, -1.0}
        pts.update(float(b) for b in breakpoints)
        pts = np.array(sorted(pts))
        xs, ws = [], []
        for a, b in zip(pts[:-1], pts[1:]):
            x, w = composite_nodes(np.linspace(a, b, panels + 1), order)
            xs.append(x)
            ws.append(w)
        edges = np.arange(0.0, span + 0.5, 0.5)
        u, wu = composite_nodes(edges, order)
        for b, sign in ((pts[-1], 1.0), (pts[0], -1.0)):
            x = b + sign * np.expm1(u)
            xs.append(x)
            ws.append(wu * np.exp(u))
        x = np.concatenate(xs)
        w = np.concatenate(ws) * self.density(np.concatenate(xs))
        return x, w

    def expect(self, func, breakpoints=()):
        """``int func dmu`` for a vectorised ``func``."""
        x, w = self.quadrature_rule(breakpoints)
        return float(np.sum(w * func(x)))


def total_mass(w):
    return w.total_mass()


def tail(w, x):
    return w.tail(x)


def moment_alpha_minus_1(w):
    """``int |x|^(alpha-1) mu(dx)``, or ``inf`` when the tail forbids it.

    Finiteness is decided from the tail exponents when known; the value
    itself is computed by quadrature.
    """
    a = w.alpha
    h = w.hint
    if h is not None:
        finite = h.power > a - 1.0 or (h.power == a - 1.0 and h.log_power > 1.0)
        if not finite:
            return math.inf
    else:
        if w._density_slope() + (a - 1.0) > -1.0 - 1e-3:
            return math.inf

    # beyond u = 300 the density itself would underflow; the analytic tail
    # below covers the logarithmic case, algebraic tails are negligible there
    umax = 300.0

    # |x| <= 1: double-exponential rule for the x^(alpha-1) cusp at 0
    head, _ = tanh_sinh(lambda x: x ** (a - 1.0) * (w.density(x) + w.density(-x)), 1.0)
    # |x| > 1: composite rule in u = log(1+|x|), fine panels where the
    # integrand turns over, geometric ones along the slowly decaying tail
    lo = math.log(2.0)
    edges = np.unique(np.concatenate([np.linspace(lo, 16.0, 65),
                                      np.geomspace(16.0, umax, 80)]))
    u, wu = composite_nodes(edges, 16)
    y = np.expm1(u)
    # multiply the small density in first to stay in range
    dens = (w.density(y) + w.density(-y)) * y ** (a - 1.0)
    total = head + float(np.sum(wu * dens * (1.0 + y)))
    if h is not None and h.coefficient is not None and h.power == a - 1.0:
        # remaining x^-1 log^-q tail beyond x = e^umax
        total += h.coefficient * h.power * umax ** (1.0 - h.log_power) / (h.log_power - 1.0)
    return total
