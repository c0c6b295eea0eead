"""Explicit criteria for functional inequalities of ``a(x) Delta^(alpha/2)``.

With ``T(x) = mu((-x, x)^c)`` every inequality reduces to a tail
supremum:

==================  ===================================================
Poincare            ``sup |x|^(alpha-1) T(x) < inf``
log-Sobolev         ``sup |x|^(alpha-1) T(x) log(1/T(x)) < inf``
Nash(eps)           ``sup |x|^(alpha-1) T(x)^((eps-2)/eps) < inf``
interpolation(xi)   ``sup |x|^(alpha-1) T(x) log^xi(1/T(x)) < inf``
super-Poincare      ``sup_{|x|>n} (|x|-n)^(alpha-1) T(x) -> 0``
ergodic             ``mu(R) < inf``
strongly ergodic    ``int |x|^(alpha-1) dmu < inf``
==================  ===================================================

:func:`classify` evaluates all of them for one weight and keeps the
verdicts consistent with ``Nash => log-Sobolev => super-Poincare =>
Poincare``.
"""

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .functionals import (LIMIT_AT_INFINITY, SupremumResult, Trend, Verdict,
                          tail_supremum)
from .green import delta_n, delta_tilde_n, theorem_bound
from .measure import InfiniteMassError, moment_alpha_minus_1
from .orlicz import NFunction, delta_phi
from .special import as_index, constants

__all__ = [
    "SupremumResult",
    "Outcome",
    "CriterionFailsError",
    "CriterionReport",
    "ClassifyOptions",
    "poincare_criterion",
    "logsobolev_criterion",
    "nash_criterion",
    "interpolation_criterion",
    "super_poincare_criterion",
    "spectral_gap_lower",
    "orlicz_poincare_lower",
    "part_form_constant",
    "local_constant",
    "green_bound",
    "super_poincare_rate",
    "classify",
    "entropy",
    "variance",
    "CSV_SCHEMA",
    "CSV_COLUMNS",
]

CSV_SCHEMA = "stablefi-criteria/1"
CSV_COLUMNS = ("schema", "family", "alpha", "gamma", "criterion", "parameter",
               "verdict", "value", "bound", "provenance")

# strongest first; each entry implies the next
_CHAIN = ("logsobolev", "super_poincare", "poincare")


class Outcome(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


class CriterionFailsError(ValueError):
    """A construction needs an inequality that does not hold for the weight."""


def _outcome(res):
    return {Verdict.FINITE: Outcome.HOLDS, Verdict.INFINITE: Outcome.FAILS}.get(
        res.verdict, Outcome.INCONCLUSIVE)


def _check(alpha, w):
    a = as_index(alpha)
    if abs(a - w.alpha) > 1e-12:
        raise ValueError(f"alpha={a} does not match the weight (alpha={w.alpha})")
    return a


def _probability(w):
    if w.finite_mass() is False:
        raise InfiniteMassError("criteria need a probability measure")


# -- the suprema ------------------------------------------------------------

def poincare_criterion(alpha, w, **kw) -> SupremumResult:
    """``sup_x |x|^(alpha-1) T(|x|)``; the Poincare inequality holds iff finite."""
    _check(alpha, w)
    _probability(w)
    return tail_supremum(w, **kw)


def logsobolev_criterion(alpha, w, **kw) -> SupremumResult:
    """``sup_x |x|^(alpha-1) T log(1/T)``; log-Sobolev holds iff finite."""
    _check(alpha, w)
    _probability(w)
    return tail_supremum(w, log_power=1.0, **kw)


def nash_criterion(alpha, w, eps, **kw) -> SupremumResult:
    """``sup_x |x|^(alpha-1) T^((eps-2)/eps)``; Nash(eps) holds iff finite."""
    _check(alpha, w)
    if not eps > 2.0:
        raise ValueError("the Nash exponent needs eps > 2")
    _probability(w)
    return tail_supremum(w, t_power=(eps - 2.0) / eps, **kw)


def interpolation_criterion(alpha, w, xi, **kw) -> SupremumResult:
    """``sup_x |x|^(alpha-1) T log^xi(1/T)`` for ``xi`` in ``(0, 1]``."""
    _check(alpha, w)
    if not 0.0 < xi <= 1.0:
        raise ValueError("xi must lie in (0, 1]")
    _probability(w)
    return tail_supremum(w, log_power=float(xi), **kw)


@dataclass
class SuperPoincareResult:
    outcome: Outcome
    ns: tuple
    values: tuple
    provenance: str
    slope: float = None

    def to_dict(self):
        return {"verdict": self.outcome.value, "n": list(self.ns),
                "delta_tilde": [v if math.isfinite(v) else "inf" for v in self.values],
                "provenance": self.provenance, "slope": self.slope}


def super_poincare_criterion(alpha, w, k_max=10) -> SuperPoincareResult:
    """Decide whether ``sup_{|x|>n} (|x|-n)^(alpha-1) T(|x|) -> 0``.

    The values at ``n = 1, 2, 4, ..., 2^k_max`` are always reported.  For
    weights with known tail exponents the verdict follows from whether
    ``x^(alpha-1) T(x)`` tends to zero; otherwise from the log-log slope of
    the computed values, with INCONCLUSIVE when the slope is too flat to
    separate slow decay from a positive limit.
    """
    a = _check(alpha, w)
    _probability(w)
    ns = tuple(float(2 ** k) for k in range(k_max + 1))
    res = [delta_tilde_n(a, w, n) for n in ns]
    vals = tuple(r.value for r in res)
    if w.hint is not None:
        lim = tail_supremum(w, per_decade=8)
        out = Outcome.HOLDS if lim.tail_trend is Trend.DECAYING else (
            Outcome.FAILS if lim.tail_trend in (Trend.BOUNDED, Trend.GROWING)
            else Outcome.INCONCLUSIVE)
        return SuperPoincareResult(out, ns, vals, "closed-form")
    if any(r.verdict is Verdict.INFINITE for r in res):
        return SuperPoincareResult(Outcome.FAILS, ns, vals, "numeric")
    v = np.array(vals)
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        return SuperPoincareResult(Outcome.INCONCLUSIVE, ns, vals, "numeric")
    tail = slice(len(ns) // 2, None)
    slope = float(np.polyfit(np.log(ns)[tail], np.log(v)[tail], 1)[0])
    out = Outcome.HOLDS if slope < -0.05 else Outcome.INCONCLUSIVE
    return SuperPoincareResult(out, ns, vals, "numeric", slope)


# -- constants and bounds ------------------------------------------------------

def spectral_gap_lower(delta, alpha):
    """Lower bound ``1 / (4 omega delta)`` on the spectral gap."""
    a = as_index(alpha)
    if not (0.0 < delta < math.inf):
        raise ValueError("delta must be finite and positive")
    return 1.0 / (4.0 * constants(a).omega_alpha * delta)


def orlicz_poincare_lower(delta_phi_value, alpha):
    """``(1/(32 omega d), 1/(8 omega d))``; the second bound is for ``Psi = Phi(x^2)``.

    An infinite ``d`` gives ``(0.0, 0.0)``.
    """
    a = as_index(alpha)
    d = float(delta_phi_value)
    if math.isinf(d) and d > 0:
        return 0.0, 0.0
    if not d > 0.0:
        raise ValueError("delta(Phi) must be positive")
    om = constants(a).omega_alpha
    return 1.0 / (32.0 * om * d), 1.0 / (8.0 * om * d)


def part_form_constant(alpha):
    """``6 C / (kappa alpha) + 1``, bounding the truncated energy by the full one."""
    a = as_index(alpha)
    c = constants(a)
    return 6.0 * c.C_alpha / (c.kappa * a) + 1.0


def local_constant(w, n, points=4001):
    """``(sup_{|x|<=n} 1/a)^(1+1/alpha) / (inf_{|x|<=n} 1/a)^2`` on a grid."""
    if n == 0:
        xs = np.array([0.0])
    else:
        half = np.unique(np.concatenate([np.linspace(0.0, n, points // 2),
                                         n * np.geomspace(1e-6, 1.0, points // 4)]))
        xs = np.concatenate([-half[::-1], half])
    inv = 1.0 / np.asarray(w(xs), float)
    return float(inv.max() ** (1.0 + 1.0 / w.alpha) / inv.min() ** 2)


def green_bound(alpha, w, n):
    """``4 c delta_n / (alpha-1)``, with ``delta_n`` from :func:`~stablefi.green.delta_n`."""
    a = _check(alpha, w)
    if n == 0:
        d = tail_supremum(w)
    else:
        d = delta_n(a, w, n)
    return theorem_bound(a, d.value) if d.finite else math.inf


class RateFunction:
    """``r -> 2^(1/alpha) C1 K0(Theta^-1(r / (2 C0))) (1 + r^(-1/alpha))``.

    ``Theta^-1(r) = sup{s >= 0 : Theta(s) >= r}`` is read off a table of
    ``Theta`` with log-log interpolation; beyond the last node a power law
    fitted to the final table points is used.
    """

    def __init__(self, alpha, w, c1, ns, thetas):
        self.alpha = alpha
        self.w = w
        self.c1 = c1
        self.ns = np.asarray(ns, float)
        self.thetas = np.asarray(thetas, float)
        self.c0 = part_form_constant(alpha)
        tail = slice(-6, None)
        self._slope, self._icpt = np.polyfit(np.log(self.ns[tail]),
                                             np.log(self.thetas[tail]), 1)

    def theta_inverse(self, r):
        ns, th = self.ns, self.thetas
        if r > th[0]:
            return 0.0
        if r <= th[-1]:
            if self._slope >= 0:
                return math.inf
            s = math.exp((math.log(r) - self._icpt) / self._slope)
            return max(s, float(ns[-1]))
        # last node with Theta >= r; the table is non-increasing
        j = int(np.nonzero(th >= r)[0][-1])
        if j == len(ns) - 1:
            return float(ns[-1])
        n0, n1, t0, t1 = ns[j], ns[j + 1], th[j], th[j + 1]
        if n0 == 0.0 or t1 <= 0.0 or t0 == t1:
            return float(n0 + (n1 - n0) * (t0 - r) / (t0 - t1)) if t0 != t1 else float(n1)
        frac = math.log(t0 / r) / math.log(t0 / t1)
        return float(math.exp(math.log(n0) + frac * math.log(n1 / n0)))

    def __call__(self, r):
        r = float(r)
        if not r > 0:
            raise ValueError("r must be positive")
        s = self.theta_inverse(r / (2.0 * self.c0))
        if not math.isfinite(s):
            return math.inf
        k0 = local_constant(self.w, s)
        a = self.alpha
        return 2.0 ** (1.0 / a) * self.c1 * k0 * (1.0 + r ** (-1.0 / a))


def super_poincare_rate(alpha, w, c1=1.0, ns=None):
    """Rate function of the super-Poincare inequality.

    ``c1`` is the constant of the local super-Poincare inequality on
    ``[-n, n]``; only its linear effect is modelled, so results hold up to
    that factor.

    Raises
    ------
    CriterionFailsError
        If the super-Poincare criterion does not hold.
    """
    a = _check(alpha, w)
    if not c1 > 0:
        raise ValueError("c1 must be positive")
    if super_poincare_criterion(a, w, k_max=4).outcome is not Outcome.HOLDS:
        raise CriterionFailsError("the super-Poincare criterion does not hold")
    if ns is None:
        ns = np.concatenate([[0.0], np.geomspace(1e-2, 1e4, 49)])
    thetas = np.array([green_bound(a, w, float(n)) for n in ns])
    # Theta is non-increasing in n; remove grid noise
    thetas = np.minimum.accumulate(thetas)
    return RateFunction(a, w, float(c1), ns, thetas)


# -- classification ----------------------------------------------------------

@dataclass
class ClassifyOptions:
    eps: tuple = (4.0,)
    xis: tuple = (0.5, 1.0)
    phi: NFunction = field(default_factory=NFunction.xlog)
    k_max: int = 10
    bounds: bool = True


@dataclass
class CriterionReport:
    """Verdicts, criterion values and constant bounds for one weight."""

    family: str
    alpha: float
    gamma: float
    verdicts: dict
    values: dict
    provenance: dict
    bounds: dict
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict, repr=False)

    def verdict(self, name):
        return self.verdicts[name]

    def to_dict(self):
        def num(v):
            if v is None:
                return None
            return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")

        return {
            "family": self.family, "alpha": self.alpha, "gamma": self.gamma,
            "criteria": {
                k: {"verdict": v.value, "value": num(self.values.get(k)),
                    "provenance": self.provenance.get(k),
                    "bound": num(self.bounds.get(k))}
                for k, v in self.verdicts.items()
            },
            "bounds": {k: num(v) for k, v in self.bounds.items()},
            "notes": list(self.notes),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def csv_rows(self):
        for k, v in self.verdicts.items():
            name, _, param = k.partition(":")
            val = self.values.get(k)
            bnd = self.bounds.get(k)
            yield {
                "schema": CSV_SCHEMA, "family": self.family, "alpha": self.alpha,
                "gamma": "" if self.gamma is None else self.gamma,
                "criterion": name, "parameter": param, "verdict": v.value,
                "value": "" if val is None else val,
                "bound": "" if bnd is None else bnd,
                "provenance": self.provenance.get(k, ""),
            }

    @staticmethod
    def to_csv(reports):
        buf = io.StringIO()
        wr = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
        wr.writeheader()
        for rep in reports:
            for row in rep.csv_rows():
                wr.writerow(row)
        return buf.getvalue()


def _enforce_chain(verdicts, notes):
    chain = [k for k in verdicts if k.startswith("nash:")] + list(_CHAIN)
    for i, strong in enumerate(chain):
        for weak in chain[i + 1:]:
            if strong.startswith("nash:") and weak.startswith("nash:"):
                continue
            if (verdicts.get(strong) is Outcome.HOLDS
                    and verdicts.get(weak) is Outcome.FAILS):
                notes.append(f"{strong} HOLDS but {weak} FAILS; "
                             f"{strong} downgraded to INCONCLUSIVE")
                verdicts[strong] = Outcome.INCONCLUSIVE
    if verdicts.get("poincare") is Outcome.HOLDS and verdicts.get("ergodic") is Outcome.FAILS:
        notes.append("poincare HOLDS on an infinite measure; downgraded")
        verdicts["poincare"] = Outcome.INCONCLUSIVE


def classify(alpha, w, options=None) -> CriterionReport:
    """Evaluate every criterion for ``w`` and attach the constant bounds."""
    a = _check(alpha, w)
    opt = options or ClassifyOptions()
    verdicts, values, prov, bounds, notes, details = {}, {}, {}, {}, [], {}
    names = (["poincare", "super_poincare", "logsobolev"]
             + [f"nash:{e:g}" for e in opt.eps]
             + [f"interpolation:{x:g}" for x in opt.xis])

    mass = w.finite_mass()
    prov_mass = "closed-form" if w.hint is not None else "numeric"
    if mass is None:
        verdicts["ergodic"] = Outcome.INCONCLUSIVE
    else:
        verdicts["ergodic"] = Outcome.HOLDS if mass else Outcome.FAILS
    prov["ergodic"] = prov_mass
    if mass is False:
        # every criterion below presupposes a probability measure
        for k in names + ["strongly_ergodic"]:
            verdicts[k] = Outcome.FAILS
            prov[k] = prov_mass
        notes.append("infinite mass: not ergodic, no inequality can hold")
        return CriterionReport(w.family, a, w.gamma, verdicts, values, prov,
                               bounds, notes, details)

    def record(name, res):
        verdicts[name] = _outcome(res)
        values[name] = res.value
        prov[name] = res.provenance
        details[name] = res.to_dict()

    p = poincare_criterion(a, w)
    record("poincare", p)
    if opt.bounds and p.finite and p.value > 0:
        bounds["poincare"] = spectral_gap_lower(p.value, a)

    spi = super_poincare_criterion(a, w, k_max=opt.k_max)
    verdicts["super_poincare"] = spi.outcome
    values["super_poincare"] = spi.values[-1]
    prov["super_poincare"] = spi.provenance
    details["super_poincare"] = spi.to_dict()

    ls = logsobolev_criterion(a, w)
    record("logsobolev", ls)
    if opt.bounds:
        try:
            dphi = delta_phi(opt.phi, a, w)
            details["delta_phi"] = dphi.to_dict()
            lo, lo_sq = orlicz_poincare_lower(dphi.value, a)
            bounds["orlicz_poincare"] = lo
            bounds["orlicz_poincare_squared"] = lo_sq
            bounds["logsobolev"] = lo_sq
        except ValueError as exc:
            notes.append(f"orlicz bound skipped: {exc}")

    for e in opt.eps:
        record(f"nash:{e:g}", nash_criterion(a, w, e))
    for x in opt.xis:
        record(f"interpolation:{x:g}", interpolation_criterion(a, w, x))

    # strong ergodicity: int |x|^(alpha-1) dmu < inf
    hint = w.hint
    if hint is not None:
        p_, q_ = hint.power, hint.log_power
        finite = p_ > a - 1.0 + 1e-12 or (abs(p_ - (a - 1.0)) <= 1e-12 and q_ > 1.0)
        verdicts["strongly_ergodic"] = Outcome.HOLDS if finite else Outcome.FAILS
        prov["strongly_ergodic"] = "closed-form"
    else:
        m = moment_alpha_minus_1(w)
        verdicts["strongly_ergodic"] = (Outcome.HOLDS if math.isfinite(m)
                                        else Outcome.INCONCLUSIVE)
        prov["strongly_ergodic"] = "numeric"
    if verdicts["strongly_ergodic"] is Outcome.HOLDS:
        values["strongly_ergodic"] = moment_alpha_minus_1(w)

    _enforce_chain(verdicts, notes)
    return CriterionReport(w.family, a, w.gamma, verdicts, values, prov, bounds,
                           notes, details)


# -- spot-check functionals ----------------------------------------------------

def variance(f, w, breakpoints=()):
    """``mu(f^2) - mu(f)^2`` for a probability ``mu``."""
    m1 = w.expect(lambda x: np.asarray(f(x), float), breakpoints)
    m2 = w.expect(lambda x: np.asarray(f(x), float) ** 2, breakpoints)
    return max(m2 - m1 * m1, 0.0)


def entropy(f, w, breakpoints=()):
    """``mu(f log f) - mu(f) log mu(f)`` for positive ``f``."""
    x, wt = w.quadrature_rule(breakpoints)
    fx = np.asarray(f(x), float)
    keep = wt > 0
    if np.any(fx[keep] <= 0):
        raise ValueError("entropy needs a strictly positive function")
    m = float(np.sum(wt[keep] * fx[keep]))
    return float(np.sum(wt[keep] * fx[keep] * np.log(fx[keep]))) - m * math.log(m)
