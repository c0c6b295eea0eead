"""Suprema of tail functionals ``(x - shift)^(alpha-1) T(x)^b log(1/T(x))^c``.

Every criterion in the library is a supremum of this shape.  The value is
taken on a log grid; whether the supremum is finite is decided from the
tail asymptotics of the weight whenever they are known, because grid
evidence alone cannot settle an asymptotic question.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Verdict",
    "Trend",
    "SupremumResult",
    "LIMIT_AT_INFINITY",
    "log_grid",
    "tail_supremum",
]

LIMIT_AT_INFINITY = math.inf
_EXP_TOL = 1e-9


class Verdict(str, enum.Enum):
    FINITE = "FINITE"
    INFINITE = "INFINITE"
    INCONCLUSIVE = "INCONCLUSIVE"


class Trend(str, enum.Enum):
    DECAYING = "Decaying"
    BOUNDED = "Bounded"
    GROWING = "Growing"
    UNKNOWN = "Unknown"


@dataclass
class SupremumResult:
    """Outcome of a supremum over the real line or over ``|x| > n``.

    ``argmax`` is :data:`LIMIT_AT_INFINITY` when the supremum is approached
    only as ``|x| -> inf``.  ``provenance`` is ``"closed-form"`` when the
    verdict came from exact tail exponents and ``"numeric"`` otherwise.
    """

    value: float
    argmax: float
    tail_trend: Trend
    verdict: Verdict
    provenance: str = "numeric"
    exponents: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.verdict is Verdict.FINITE:
            assert math.isfinite(self.value)
            assert self.tail_trend in (Trend.DECAYING, Trend.BOUNDED)

    @property
    def finite(self):
        return self.verdict is Verdict.FINITE

    def to_dict(self):
        return {
            "value": self.value if math.isfinite(self.value) else "inf",
            "argmax": self.argmax if math.isfinite(self.argmax) else "inf",
            "tail_trend": self.tail_trend.value,
            "verdict": self.verdict.value,
            "provenance": self.provenance,
        }


def log_grid(lo, hi, per_decade=512):
    """Geometric grid from ``lo`` to ``hi`` inclusive."""
    k = max(2, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
    return np.geomspace(lo, hi, k)


def _classify_exponents(e1, e2):
    if e1 < -_EXP_TOL or (abs(e1) <= _EXP_TOL and e2 < -_EXP_TOL):
        return Trend.DECAYING
    if abs(e1) <= _EXP_TOL and abs(e2) <= _EXP_TOL:
        return Trend.BOUNDED
    return Trend.GROWING


def tail_supremum(w, *, t_power=1.0, log_power=0.0, shift=0.0, n=0.0,
                  prefactor=1.0, inverse=None, inverse_asym=None,
                  per_decade=512, span=1e6):
    """Supremum of a tail functional of the weight ``w``.

    The functional is ``prefactor * (x - shift)^(alpha-1) * T(x)^t_power *
    log(1/T(x))^log_power`` over ``x > n``.  When a vectorised ``inverse``
    is given the factor ``T^b log^c`` is replaced by ``1 / inverse(1 / T(x))``
    and the asymptotic exponents are taken from ``inverse_asym = (b, c,
    coef)``, meaning ``1/inverse(1/T) ~ coef * T^b log(1/T)^c``.

    The grid covers ``[n (1 + 1e-6), span * max(n, 1)]`` (starting at
    ``1e-6`` when ``n = 0``) with ``per_decade`` points per decade.
    """
    a = w.alpha
    lo = n * (1.0 + 1e-6) if n > 0 else 1e-6
    hi = span * max(n, 1.0)
    xs = log_grid(lo, hi, per_decade)
    T = np.asarray(w.tail_on_grid(xs), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.maximum(xs - shift, 0.0) ** (a - 1.0)
        if inverse is not None:
            inv = np.asarray(inverse(1.0 / np.maximum(T, 1e-300)), dtype=float)
            q = np.where(T > 0, base / inv, 0.0)
        else:
            logs = np.log(1.0 / np.maximum(T, 1e-300))
            logs = np.maximum(logs, 0.0)
            q = base * T ** t_power * (logs ** log_power if log_power else 1.0)
    q = prefactor * np.nan_to_num(q, nan=0.0, posinf=0.0)
    i = int(np.argmax(q))
    grid_max, grid_arg = float(q[i]), float(xs[i])

    if inverse is not None:
        b, c, coef = inverse_asym if inverse_asym is not None else (None, None, None)
    else:
        b, c, coef = t_power, log_power, 1.0

    hint = w.hint
    if hint is not None and b is not None:
        p, qlog = hint.power, hint.log_power
        e1 = (a - 1.0) - b * p
        e2 = -b * qlog + c
        trend = _classify_exponents(e1, e2)
        prov = "closed-form"
        limit = 0.0
        if trend is Trend.BOUNDED and hint.coefficient is not None:
            limit = prefactor * coef * hint.coefficient ** b * p ** c
        exps = (e1, e2)
    else:
        trend = _numeric_trend(xs, q)
        prov = "numeric"
        limit = 0.0
        exps = None

    if trend is Trend.GROWING:
        return SupremumResult(math.inf, LIMIT_AT_INFINITY, trend,
                              Verdict.INFINITE, prov, exps)
    if trend is Trend.UNKNOWN:
        return SupremumResult(grid_max, grid_arg, trend,
                              Verdict.INCONCLUSIVE, prov, exps)
    if limit >= grid_max:
        return SupremumResult(limit, LIMIT_AT_INFINITY, trend,
                              Verdict.FINITE, prov, exps)
    return SupremumResult(grid_max, grid_arg, trend, Verdict.FINITE, prov, exps)


def _numeric_trend(xs, q, decades=2.0, tol=0.02):
    # log-log slope over the last decades of the grid
    sel = xs >= xs[-1] / 10.0 ** decades
    qs = q[sel]
    if np.any(qs <= 0):
        return Trend.UNKNOWN
    slope = np.polyfit(np.log(xs[sel]), np.log(qs), 1)[0]
    if slope > tol:
        return Trend.GROWING
    if slope < -tol:
        return Trend.DECAYING
    return Trend.UNKNOWN
