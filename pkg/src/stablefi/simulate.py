"""Monte Carlo engine for ``dY = sigma(Y-) dX`` driven by a symmetric stable process.

``X`` has characteristic function ``exp(-t |xi|^alpha)`` and
``sigma = a^(1/alpha)``, so ``Y`` has generator ``a(x) Delta^(alpha/2)``.

Random streams are counter-based (Philox) and keyed by ``(seed, block)``
where a block is a fixed group of :data:`BLOCK` consecutive paths; draws are
always made for the full block width, so the randomness of a path depends
only on the seed and its index.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .measure import Weight
from .special import as_index, constants

__all__ = [
    "BLOCK",
    "PathConfig",
    "PathResult",
    "Ensemble",
    "EnsembleStats",
    "KernelReport",
    "AllPathsOverflowedError",
    "TooFewHitsError",
    "stable_increment",
    "stable_standard",
    "stable_tail_constant",
    "block_rng",
    "simulate_path",
    "simulate_ensemble",
    "ergodic_tail_estimate",
    "occupation_trend",
    "occupation_chi2",
    "levy_measure",
    "small_time_kernel_check",
]

BLOCK = 64
OVERFLOW = 1e12


class AllPathsOverflowedError(RuntimeError):
    """Every path of an ensemble hit the overflow guard."""


class TooFewHitsError(RuntimeError):
    """A Monte Carlo probability rests on too few hits to be meaningful."""


# -- sampler ---------------------------------------------------------------------

def stable_standard(alpha, rng, size=None):
    """Symmetric stable draws with characteristic function ``exp(-|xi|^alpha)``.

    Chambers-Mallows-Stuck transformation of a uniform angle and a unit
    exponential.
    """
    a = as_index(alpha)
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    return (np.sin(a * v) / np.cos(v) ** (1.0 / a)
            * (np.cos((1.0 - a) * v) / w) ** ((1.0 - a) / a))


def stable_increment(alpha, dt, rng, size=None):
    """Increment ``X_dt`` of the driving process: ``dt^(1/alpha)`` times a standard draw."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    return dt ** (1.0 / as_index(alpha)) * stable_standard(alpha, rng, size)


def stable_tail_constant(alpha):
    """``lim x^alpha P(|X_1| > x) = 2 Gamma(alpha) sin(pi alpha / 2) / pi``."""
    a = as_index(alpha)
    return 2.0 * math.gamma(a) * math.sin(0.5 * math.pi * a) / math.pi


def block_rng(seed, block):
    """Counter-based generator for block ``block`` of the ensemble with ``seed``."""
    key = np.array([int(seed) & 0xFFFFFFFFFFFFFFFF, int(block)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


# -- configuration ------------------------------------------------------------------

@dataclass(frozen=True)
class PathConfig:
    """Parameters of one Euler run.

    ``horizon = steps * dt``.  The step actually taken at ``y`` is
    ``min(dt, eta^alpha (1+|y|)^alpha / a(y))``: it keeps the jump scale
    ``sigma(y) dt^(1/alpha)`` below ``eta (1+|y|)`` so that the scheme
    stays stable where ``a`` grows faster than ``|y|^alpha``.
    """

    alpha: float
    weight: Weight
    y0: float = 0.0
    dt: float = 0.01
    steps: int = 1000
    seed: int = 0
    eta: float = 0.02
    burn_in: float = 0.1
    record_every: float = None

    def __post_init__(self):
        a = as_index(self.alpha)
        if abs(a - self.weight.alpha) > 1e-12:
            raise ValueError("weight.alpha does not match alpha")
        if not 0 < self.dt <= 0.1:
            raise ValueError("dt must lie in (0, 0.1]")
        if int(self.steps) < 1:
            raise ValueError("steps must be a positive count")
        if not 0 <= self.burn_in < 1:
            raise ValueError("burn_in must lie in [0, 1)")
        if not self.eta > 0:
            raise ValueError("eta must be positive")

    @property
    def horizon(self):
        return self.steps * self.dt

    @property
    def grid_step(self):
        return self.record_every or self.dt


@dataclass
class PathResult:
    """Trajectory sampled on the uniform grid ``times``."""

    times: np.ndarray
    values: np.ndarray
    overflowed: bool
    steps_taken: int


@dataclass
class Ensemble:
    """Post-burn-in samples of many paths on a common uniform time grid.

    ``samples[i]`` holds path ``i``; rows of overflowed paths are NaN from
    the moment of overflow on and are excluded from statistics.
    """

    config: PathConfig
    times: np.ndarray
    samples: np.ndarray
    overflowed: np.ndarray
    steps_taken: np.ndarray

    @property
    def n_paths(self):
        return self.samples.shape[0]

    @property
    def valid(self):
        return ~self.overflowed

    def to_dict(self):
        return {"alpha": self.config.alpha, "seed": self.config.seed,
                "dt": self.config.dt, "horizon": self.config.horizon,
                "n_paths": int(self.n_paths),
                "overflowed": int(self.overflowed.sum()),
                "mean_steps": float(self.steps_taken.mean())}


# -- Euler engine ---------------------------------------------------------------------

_KERNEL = None


def _jit_kernel():
    """Compiled Euler loop for the parametric weight families (built on first use)."""
    global _KERNEL
    if _KERNEL is None:
        import numba

        @numba.njit(cache=True)
        def kernel(z, y, t, nxt, out, over, steps, active, family, scale_a, gamma,
                   alpha, dt0, eta_a, horizon, t0, gstep, overflow):
            n_grid = out.shape[1]
            inv_a = 1.0 / alpha
            for j in range(y.shape[0]):
                if not active[j]:
                    continue
                yj, tj, g = y[j], t[j], nxt[j]
                for k in range(z.shape[0]):
                    ay_ = abs(yj)
                    if family == 0:
                        ay = scale_a * (1.0 + ay_) ** (alpha * gamma)
                    else:
                        ay = scale_a * (1.0 + ay_) ** alpha * math.log(math.e + ay_) ** gamma
                    dt = min(dt0, eta_a * (1.0 + ay_) ** alpha / ay, horizon - tj)
                    tn = tj + dt
                    while g < n_grid and t0 + gstep * g < tn - 1e-12 * horizon:
                        out[j, g] = yj
                        g += 1
                    yj = yj + ay ** inv_a * dt ** inv_a * z[k, j]
                    tj = tn
                    steps[j] += 1
                    if not (abs(yj) <= overflow):
                        over[j] = True
                        active[j] = False
                        break
                    if tn >= horizon * (1.0 - 1e-12):
                        if g < n_grid:
                            out[j, g] = yj
                            g += 1
                        active[j] = False
                        break
                y[j], t[j], nxt[j] = yj, tj, g

        _KERNEL = kernel
    return _KERNEL


def _run_block(cfg, block, n_live, chunk=4096, engine="auto"):
    """Advance the ``BLOCK`` paths of one block; return the recorded grid samples.

    ``engine="jit"`` uses the compiled loop (Poly and Log weights only),
    ``"numpy"`` the vectorised loop over paths, ``"auto"`` picks the
    compiled loop when it applies.
    """
    a = cfg.alpha
    w = cfg.weight
    rng = block_rng(cfg.seed, block)
    horizon = cfg.horizon
    gstep = cfg.grid_step
    t0 = cfg.burn_in * horizon
    n_grid = int(math.floor((horizon - t0) / gstep + 1e-9)) + 1
    grid = t0 + gstep * np.arange(n_grid)

    y = np.full(BLOCK, float(cfg.y0))
    t = np.zeros(BLOCK)
    nxt = np.zeros(BLOCK, dtype=np.int64)  # index of next grid point to record
    out = np.full((BLOCK, n_grid), np.nan)
    over = np.zeros(BLOCK, bool)
    steps = np.zeros(BLOCK, dtype=np.int64)
    active = np.zeros(BLOCK, bool)
    active[:n_live] = True
    eta_a = cfg.eta ** a
    parametric = w.family in ("poly", "log")
    if engine == "jit" and not parametric:
        raise ValueError("the compiled engine supports Poly and Log weights only")
    use_jit = engine == "jit" or (engine == "auto" and parametric)

    while active.any():
        z = stable_standard(a, rng, (chunk, BLOCK))
        if use_jit:
            _jit_kernel()(z, y, t, nxt, out, over, steps, active,
                          0 if w.family == "poly" else 1, w.scale ** a,
                          float(w.gamma), a, cfg.dt, eta_a, horizon, t0, gstep, OVERFLOW)
            continue
        for k in range(chunk):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            yi = y[idx]
            ay = w(yi)
            dt = np.minimum(cfg.dt, eta_a * (1.0 + np.abs(yi)) ** a / ay)
            dt = np.minimum(dt, horizon - t[idx])
            tn = t[idx] + dt
            # record grid points in [t, t+dt): Y is piecewise constant between steps
            while True:
                g = nxt[idx]
                rec = (g < n_grid) & (grid[np.minimum(g, n_grid - 1)] < tn - 1e-12 * horizon)
                if not rec.any():
                    break
                r = idx[rec]
                out[r, nxt[r]] = y[r]
                nxt[r] += 1
            y[idx] = yi + ay ** (1.0 / a) * dt ** (1.0 / a) * z[k, idx]
            t[idx] = tn
            steps[idx] += 1
            bad = ~(np.abs(y[idx]) <= OVERFLOW)
            if bad.any():
                over[idx[bad]] = True
                active[idx[bad]] = False
            done = (tn >= horizon * (1.0 - 1e-12)) & ~bad
            if done.any():
                fin = idx[done]
                # the terminal grid point, if any, takes the final state
                last = nxt[fin] < n_grid
                out[fin[last], nxt[fin[last]]] = y[fin[last]]
                nxt[fin[last]] += 1
                active[fin] = False
    return grid, out[:n_live], over[:n_live], steps[:n_live]


def simulate_ensemble(cfg, n_paths, engine="auto"):
    """Run ``n_paths`` independent Euler paths recorded after the burn-in."""
    n_paths = int(n_paths)
    if n_paths < 1:
        raise ValueError("n_paths must be positive")
    parts = []
    for b in range(-(-n_paths // BLOCK)):
        live = min(BLOCK, n_paths - b * BLOCK)
        parts.append(_run_block(cfg, b, live, engine=engine))
    grid = parts[0][0]
    return Ensemble(cfg, grid,
                    np.concatenate([p[1] for p in parts]),
                    np.concatenate([p[2] for p in parts]),
                    np.concatenate([p[3] for p in parts]))


def simulate_path(cfg, engine="auto"):
    """Single Euler path (path index 0) on the grid ``[0, horizon]``.

    The burn-in setting is ignored; the whole trajectory is returned.
    """
    from dataclasses import replace
    full = replace(cfg, burn_in=0.0)
    grid, out, over, steps = _run_block(full, 0, 1, engine=engine)
    return PathResult(grid, out[0], bool(over[0]), int(steps[0]))


# -- diagnostics ------------------------------------------------------------------------

@dataclass
class EnsembleStats:
    """Occupation estimates of ``mu((-x, x)^c)`` with confidence half-widths.

    ``halfwidth`` is ``z`` times the between-path standard error of the
    per-path time fractions (batch means over independent paths), which
    accounts for time correlation within a path.  ``binomial_sigma`` is
    ``sqrt(p (1-p) / n_paths)``.
    """

    probes: np.ndarray
    estimate: np.ndarray
    stderr: np.ndarray
    halfwidth: np.ndarray
    binomial_sigma: np.ndarray
    n_paths: int
    hist_edges: np.ndarray = field(default=None, repr=False)
    hist_density: np.ndarray = field(default=None, repr=False)

    def to_dict(self):
        return {"probes": self.probes.tolist(), "estimate": self.estimate.tolist(),
                "stderr": self.stderr.tolist(), "halfwidth": self.halfwidth.tolist(),
                "binomial_sigma": self.binomial_sigma.tolist(),
                "n_paths": self.n_paths}

    def csv_rows(self):
        rows = [("probe", "estimate", "stderr", "halfwidth")]
        rows += [(float(p), float(e), float(s), float(h)) for p, e, s, h in
                 zip(self.probes, self.estimate, self.stderr, self.halfwidth)]
        return rows


def _valid_samples(ens):
    ok = ens.valid
    if not ok.any():
        raise AllPathsOverflowedError("all paths overflowed")
    return ens.samples[ok]


def ergodic_tail_estimate(ens, probe_points, z=3.0, bins=None):
    """Fraction of post-burn-in time spent in ``(-x, x)^c`` for each probe ``x``."""
    s = _valid_samples(ens)
    probes = np.atleast_1d(np.asarray(probe_points, float))
    absval = np.abs(s)
    per_path = np.array([(absval >= x).mean(axis=1) for x in probes])  # (probe, path)
    n = s.shape[0]
    est = per_path.mean(axis=1)
    se = per_path.std(axis=1, ddof=1) / math.sqrt(n) if n > 1 else np.full_like(est, np.inf)
    # the whole line: exactly one, not an estimate
    est = np.where(probes <= 0, 1.0, est)
    se = np.where(probes <= 0, 0.0, se)
    binom = np.sqrt(est * (1.0 - est) / n)
    edges = dens = None
    if bins is not None:
        edges = np.asarray(bins, float)
        counts, _ = np.histogram(s.ravel(), edges)
        dens = counts / (s.size * np.diff(edges))
    return EnsembleStats(probes, est, se, z * se, binom, n, edges, dens)


def occupation_trend(ens, bound=1.0, windows=4):
    """Time fraction in ``(-bound, bound)`` over consecutive windows of the grid.

    Returns the per-window fractions and their least-squares slope per
    window; a negative slope means the occupation of the bounded set is
    draining away.
    """
    s = _valid_samples(ens)
    parts = np.array_split(np.abs(s) < bound, windows, axis=1)
    frac = np.array([p.mean() for p in parts])
    slope = float(np.polyfit(np.arange(windows), frac, 1)[0])
    return frac, slope


def _interval_mass(weight, lo, hi):
    """``mu([lo, hi))`` from the tail function for even weights, else by quadrature."""
    if weight.even:
        total = weight.total_mass()

        def cum(x):
            # mu([0, x]) with the sign of x
            if x == 0:
                return 0.0
            half = 0.5 * (total - float(weight.tail(abs(x))))
            return math.copysign(half, x)

        return cum(hi) - cum(lo)
    from scipy.integrate import quad
    return quad(lambda v: float(weight.density(v)), lo, hi, limit=200)[0]


def occupation_chi2(ens, weight, edges):
    """Chi-square of the occupation histogram against ``mu`` on ``edges``.

    The variance of each bin fraction is the between-path variance of the
    per-path fractions; returns ``(chi2, dof, p_value)``.
    """
    from scipy.stats import chi2 as chi2_dist

    s = _valid_samples(ens)
    edges = np.asarray(edges, float)
    per = np.stack([np.histogram(row, edges)[0] / row.size for row in s])
    obs = per.mean(axis=0)
    var = per.var(axis=0, ddof=1) / per.shape[0]
    expect = np.array([_interval_mass(weight, lo, hi)
                       for lo, hi in zip(edges[:-1], edges[1:])]) / weight.total_mass()
    keep = var > 0
    stat = float(np.sum((obs[keep] - expect[keep]) ** 2 / var[keep]))
    dof = int(keep.sum())
    return stat, dof, float(chi2_dist.sf(stat, dof))


# -- small-time kernel ------------------------------------------------------------------

def levy_measure(a_fun, alpha, interval, x=0.0):
    """``nu(x, B) = a(x) C int_B |y - x|^(-1-alpha) dy`` for an interval ``B``."""
    a = as_index(alpha)
    lo, hi = map(float, interval)
    lo, hi = lo - x, hi - x
    if lo <= 0 <= hi:
        raise ValueError("the interval must stay away from the starting point")
    lo, hi = sorted((abs(lo), abs(hi)))
    ax = float(np.asarray(a_fun(np.array([x])) if callable(a_fun) else a_fun).ravel()[0])
    return ax * constants(a).C_alpha * (lo ** (-a) - hi ** (-a)) / a


@dataclass
class KernelReport:
    """Ratios ``P_t(x0, B) / (t nu(x0, B))`` along decreasing ``t``."""

    nu: float
    t: list
    hits: list
    n_paths: int
    probability: list
    ratio: list
    ratio_stderr: list

    def to_dict(self):
        return {"nu": self.nu, "t": self.t, "hits": self.hits,
                "n_paths": self.n_paths, "probability": self.probability,
                "ratio": self.ratio, "ratio_stderr": self.ratio_stderr}


def small_time_kernel_check(a_fun, alpha, interval, t_list=(0.1, 0.03, 0.01),
                            n_paths=10 ** 6, seed=0, x0=0.0, dt=0.01, min_hits=100):
    """Monte Carlo ``P_t(x0, B) / t`` against the Levy kernel ``nu(x0, B)``.

    Each ``t`` uses ``ceil(t / dt)`` Euler steps of equal length.

    Raises
    ------
    TooFewHitsError
        If fewer than ``min_hits`` paths end in ``B`` for some ``t``.
    """
    a = as_index(alpha)
    t_list = [float(t) for t in t_list]
    if any(t2 >= t1 for t1, t2 in zip(t_list, t_list[1:])):
        raise ValueError("t_list must be decreasing")
    lo, hi = sorted(map(float, interval))
    nu = levy_measure(a_fun, a, (lo, hi), x0)

    def afun(y):
        return np.asarray(a_fun(y) if callable(a_fun) else np.full_like(y, a_fun), float)

    hits, probs, ratios, errs = [], [], [], []
    for j, t in enumerate(t_list):
        nsub = max(1, int(math.ceil(t / dt - 1e-9)))
        h = t / nsub
        nblocks = -(-n_paths // BLOCK)
        z = np.concatenate([stable_standard(a, block_rng(seed + 7919 * (j + 1), b), (nsub, BLOCK))
                            for b in range(nblocks)], axis=1)
        y_all = np.full(nblocks * BLOCK, float(x0))
        for k in range(nsub):
            y_all = y_all + (afun(y_all) * h) ** (1.0 / a) * z[k]
        y_all = y_all[:n_paths]
        count = int(np.count_nonzero((y_all > lo) & (y_all < hi)))
        if count < min_hits:
            raise TooFewHitsError(f"only {count} hits at t={t}")
        p = count / n_paths
        hits.append(count)
        probs.append(p)
        ratios.append(p / (t * nu))
        errs.append(math.sqrt(p * (1.0 - p) / n_paths) / (t * nu))
    return KernelReport(nu, t_list, hits, n_paths, probs, ratios, errs)
