"""Command-line interface: ``stablefi analyze|green|orlicz|verify|simulate``.

Settings come from an optional INI file (``--config``) whose ``[common]``
section applies to every command and whose section named after the
command applies to that command only; command-line flags win over the
file.  Every command writes ``<command>.json`` (and, where tabular,
``<command>.csv``) into ``--out``.

Exit status: 0 on success, 1 when a property suite has a failed check or
when ``--strict`` is set and some verdict is INCONCLUSIVE, 2 on
configuration errors.
"""

import argparse
import configparser
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

JSON_SCHEMA = "stablefi-report/1"
COMMANDS = ("analyze", "green", "orlicz", "verify", "simulate")


class ConfigError(ValueError):
    """Invalid configuration value; ``field`` names the offending setting."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


# -- configuration ------------------------------------------------------------------

def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


@dataclass
class RunConfig:
    """Validated settings of one CLI invocation."""

    command: str
    family: str = "poly"
    alpha: float = 1.5
    gammas: list = field(default_factory=lambda: [2.0])
    eps: list = field(default_factory=lambda: [4.0])
    xis: list = field(default_factory=lambda: [0.5, 1.0])
    phi: str = "xlog"
    ns: list = field(default_factory=lambda: [1.0, 2.0, 5.0])
    criteria: list = field(default_factory=list)
    probes: list = field(default_factory=lambda: [0.5, 1.0, 2.0, 5.0])
    seed: int = 0
    out: str = "."
    csv: bool = True
    strict: bool = False
    workers: int = 1
    quick: bool = False
    dt: float = 0.01
    steps: int = 100_000
    paths: int = 64
    eta: float = 0.02
    burn_in: float = 0.1
    kernel: bool = False
    interval: list = field(default_factory=lambda: [1.0, 2.0])
    t_list: list = field(default_factory=lambda: [0.1, 0.03, 0.01])
    kernel_paths: int = 1_000_000

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError("command", f"must be one of {', '.join(COMMANDS)}")
        if self.family not in ("poly", "log"):
            raise ConfigError("family", "must be 'poly' or 'log'")
        if not (1.0 < self.alpha < 2.0):
            raise ConfigError("alpha", "must lie strictly between 1 and 2")
        if not self.gammas:
            raise ConfigError("gamma", "needs at least one value")
        for e in self.eps:
            if not e > 2.0:
                raise ConfigError("eps", "Nash exponents must exceed 2")
        for x in self.xis:
            if not 0.0 < x <= 1.0:
                raise ConfigError("xi", "must lie in (0, 1]")
        for n in self.ns:
            if not n > 0:
                raise ConfigError("n", "must be positive")
        if any(p < 0 for p in self.probes):
            raise ConfigError("probes", "must be non-negative")
        if not 0.0 < self.dt <= 0.1:
            raise ConfigError("dt", "must lie in (0, 0.1]")
        if self.steps < 1 or self.paths < 1 or self.kernel_paths < 1:
            raise ConfigError("steps/paths", "must be positive counts")
        if not self.eta > 0:
            raise ConfigError("eta", "must be positive")
        if not 0.0 <= self.burn_in < 1.0:
            raise ConfigError("burn_in", "must lie in [0, 1)")
        if len(self.interval) != 2:
            raise ConfigError("interval", "needs exactly two endpoints")
        lo, hi = sorted(self.interval)
        if lo <= 0.0 <= hi:
            raise ConfigError("interval", "must not contain the starting point 0")
        if any(b >= a for a, b in zip(self.t_list, self.t_list[1:])):
            raise ConfigError("t_list", "must be decreasing")
        if self.workers < 1:
            raise ConfigError("workers", "must be at least 1")
        from .orlicz import parse_nfunction
        try:
            parse_nfunction(self.phi)
        except Exception as exc:  # noqa: BLE001 - surfaced as a field error
            raise ConfigError("phi", f"cannot parse {self.phi!r}: {exc}") from None
        return self


_LISTS = {"gamma": "gammas", "gammas": "gammas", "eps": "eps", "xi": "xis", "xis": "xis",
          "n": "ns", "ns": "ns", "probes": "probes", "interval": "interval",
          "t_list": "t_list", "criteria": "criteria"}
_INTS = {"seed", "workers", "steps", "paths", "kernel_paths"}
_BOOLS = {"csv", "strict", "quick", "kernel"}
_FLOATS = {"alpha", "dt", "eta", "burn_in"}
_STRS = {"family", "phi", "out"}


def _coerce(key, value):
    key = key.replace("-", "_")
    if key in _LISTS:
        name = _LISTS[key]
        if name == "criteria":
            items = value if isinstance(value, list) else str(value).split(",")
            return name, [v.strip() for v in items if v.strip()]
        try:
            return name, _floats(value)
        except ValueError:
            raise ConfigError(key, f"expected a comma-separated list of numbers, got {value!r}") from None
    try:
        if key in _INTS:
            return key, int(value)
        if key in _FLOATS:
            return key, float(value)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {value!r}") from None
    if key in _BOOLS:
        if isinstance(value, bool):
            return key, value
        v = str(value).strip().lower()
        if v in ("1", "true", "yes", "on"):
            return key, True
        if v in ("0", "false", "no", "off"):
            return key, False
        raise ConfigError(key, f"expected a boolean, got {value!r}")
    if key in _STRS:
        return key, str(value).strip().lower() if key != "out" else str(value)
    raise ConfigError(key, "unknown setting")


def build_config(command, flags, config_path=None):
    """Merge INI settings and flag overrides into a validated :class:`RunConfig`."""
    values = {}
    if config_path:
        parser = configparser.ConfigParser()
        if not parser.read(config_path):
            raise ConfigError("config", f"cannot read {config_path}")
        for section in ("common", command):
            if parser.has_section(section):
                for k, v in parser.items(section):
                    name, val = _coerce(k, v)
                    values[name] = val
    for k, v in flags.items():
        if v is None:
            continue
        name, val = _coerce(k, v)
        values[name] = val
    return RunConfig(command=command, **values).validate()


# -- helpers ------------------------------------------------------------------------

def _weight(cfg, gamma):
    from .measure import Weight
    if cfg.family == "poly":
        return Weight.poly(cfg.alpha, gamma)
    return Weight.log(cfg.alpha, gamma)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else ("-inf" if v < 0 else "nan"))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return obj.value
    return obj


def _write(cfg, payload, rows=None):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    doc = {"schema": JSON_SCHEMA, "command": cfg.command, "seed": cfg.seed,
           "config": _jsonable(asdict(cfg)), **_jsonable(payload)}
    path = out / f"{cfg.command}.json"
    path.write_text(json.dumps(doc, indent=2))
    written = [path]
    if cfg.csv and rows:
        cpath = out / f"{cfg.command}.csv"
        cpath.write_text(rows)
        written.append(cpath)
    return written


def _csv_text(header, rows):
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


# -- commands -----------------------------------------------------------------------

def _analyze_one(args):
    from .criteria import ClassifyOptions, classify
    from .orlicz import parse_nfunction
    cfg, gamma = args
    opts = ClassifyOptions(eps=tuple(cfg.eps), xis=tuple(cfg.xis),
                           phi=parse_nfunction(cfg.phi))
    return classify(cfg.alpha, _weight(cfg, gamma), opts)


def _selected(cfg, key):
    if not cfg.criteria:
        return True
    name = key.partition(":")[0]
    return key in cfg.criteria or name in cfg.criteria


def cmd_analyze(cfg):
    from .criteria import CSV_COLUMNS, Outcome
    jobs = [(cfg, g) for g in cfg.gammas]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            reports = list(pool.map(_analyze_one, jobs))  # input order is kept
    else:
        reports = [_analyze_one(j) for j in jobs]
    docs = []
    rows = []
    inconclusive = False
    for rep in reports:
        d = rep.to_dict()
        d["criteria"] = {k: v for k, v in d["criteria"].items() if _selected(cfg, k)}
        docs.append(d)
        for row in rep.csv_rows():
            key = row["criterion"] + (":" + row["parameter"] if row["parameter"] else "")
            if _selected(cfg, key):
                rows.append([row[c] for c in CSV_COLUMNS])
        for k, v in rep.verdicts.items():
            if _selected(cfg, k) and v is Outcome.INCONCLUSIVE:
                inconclusive = True
        line = ", ".join(f"{k}={v.value}" for k, v in rep.verdicts.items() if _selected(cfg, k))
        print(f"{rep.family} alpha={rep.alpha:g} gamma={rep.gamma:g}: {line}")
    files = _write(cfg, {"reports": docs}, _csv_text(CSV_COLUMNS, rows))
    return (1 if (cfg.strict and inconclusive) else 0), files


def cmd_green(cfg):
    from .green import GreenSample, verify_green_properties
    sample = GreenSample(seed=cfg.seed, ns=tuple(cfg.ns),
                         weights=tuple(_weight(cfg, g) for g in cfg.gammas))
    if cfg.quick:
        sample = GreenSample(n_pairs=200, n_monotone=2000, n_limit=50, n_diagonal=10,
                             seed=cfg.seed, ns=tuple(cfg.ns),
                             weights=sample.weights, n_theorem_x=4)
    rep = verify_green_properties(cfg.alpha, sample)
    rows = [[k, c["value"], c["tolerance"], c["passed"]] for k, c in rep.checks.items()]
    for k, c in rep.checks.items():
        print(f"{k}: {'pass' if c['passed'] else 'FAIL'} (value {c['value']:.3g}, tol {c['tolerance']:.3g})")
    files = _write(cfg, {"report": rep.to_dict()}, _csv_text(["check", "value", "tolerance", "passed"], rows))
    return (0 if rep.passed else 1), files


def cmd_orlicz(cfg):
    from .criteria import orlicz_poincare_lower
    from .orlicz import delta_phi, gauge_norm, orlicz_norm, parse_nfunction
    phi = parse_nfunction(cfg.phi)
    out = []
    rows = []
    for gamma in cfg.gammas:
        w = _weight(cfg, gamma)
        entry = {"family": cfg.family, "alpha": cfg.alpha, "gamma": gamma, "phi": phi.label}
        try:
            res = delta_phi(phi, cfg.alpha, w)
            entry["delta_phi"] = res.to_dict()
            entry["orlicz_poincare_lower"] = list(orlicz_poincare_lower(res.value, cfg.alpha))
        except Exception as exc:  # noqa: BLE001 - reported, not fatal
            entry["delta_phi"] = {"error": str(exc)}
        norms = []
        if w.finite_mass():
            for x in cfg.probes:
                if x <= 0:
                    continue
                ind = (lambda y, x=x: (np.abs(y) >= x).astype(float))
                g = gauge_norm(phi, ind, w, (-x, x))
                o = orlicz_norm(phi, ind, w, (-x, x))
                norms.append({"x": x, "gauge": g, "orlicz": o,
                              "indicator_formula": 1.0 / float(phi.inverse(1.0 / float(w.tail(x))))})
                rows.append([cfg.family, cfg.alpha, gamma, phi.label, x, g, o])
        entry["indicator_norms"] = norms
        out.append(entry)
        d = entry["delta_phi"]
        print(f"{cfg.family} gamma={gamma:g} {phi.label}: delta={d.get('value', d.get('error'))} "
              f"verdict={d.get('verdict', 'error')}")
    files = _write(cfg, {"results": out},
                   _csv_text(["family", "alpha", "gamma", "phi", "x", "gauge", "orlicz"], rows))
    return 0, files


def cmd_verify(cfg):
    from .green import GreenSample, verify_green_properties
    from .suites import SuiteReport, verify_nonlocal_properties, verify_orlicz_properties
    from .measure import Weight
    # the operator bound is exercised on one weight of each family
    weights = (Weight.poly(cfg.alpha, 2.0), Weight.log(cfg.alpha, 1.0))
    if cfg.quick:
        gs = GreenSample(n_pairs=200, n_monotone=2000, n_limit=50, n_diagonal=10,
                         seed=cfg.seed, weights=weights, n_theorem_x=4)
        nl = dict(n_defect=4, n_oracle=2, n_hardy=6, n_lemma=3, n_cross=1)
        n_triples = 10
    else:
        gs = GreenSample(seed=cfg.seed, weights=weights, ns=tuple(cfg.ns))
        nl = {}
        n_triples = 50
    reports = [SuiteReport("green", verify_green_properties(cfg.alpha, gs).checks),
               verify_orlicz_properties(cfg.seed, n_triples),
               verify_nonlocal_properties(cfg.alpha, cfg.seed, **nl)]
    rows = []
    failed = 0
    for rep in reports:
        for k, c in rep.checks.items():
            rows.append([rep.name, k, c["value"], c["tolerance"], c["passed"]])
            failed += not c["passed"]
            print(f"{rep.name}.{k}: {'pass' if c['passed'] else 'FAIL'}")
    print(f"{failed} failed propert{'y' if failed == 1 else 'ies'}")
    files = _write(cfg, {"suites": [r.to_dict() for r in reports], "failed": failed},
                   _csv_text(["suite", "check", "value", "tolerance", "passed"], rows))
    return (1 if failed else 0), files


def cmd_simulate(cfg):
    from .simulate import (PathConfig, ergodic_tail_estimate, simulate_ensemble,
                           small_time_kernel_check)
    w = _weight(cfg, cfg.gammas[0])
    pc = PathConfig(cfg.alpha, w, dt=cfg.dt, steps=cfg.steps, seed=cfg.seed,
                    eta=cfg.eta, burn_in=cfg.burn_in, record_every=max(cfg.dt, 0.1))
    ens = simulate_ensemble(pc, cfg.paths)
    stats = ergodic_tail_estimate(ens, cfg.probes)
    # an infinite measure has no tail to compare with
    exact = [float(w.tail(x)) if w.finite_mass() else None for x in cfg.probes]
    payload = {"ensemble": ens.to_dict(), "tails": stats.to_dict(), "mu_tail": exact}
    for x, e, h, m in zip(stats.probes, stats.estimate, stats.halfwidth, exact):
        print(f"P(|Y| >= {x:g}) ~ {e:.4f} +- {h:.4f}" + ("" if m is None else f"  (mu: {m:.4f})"))
    if cfg.kernel:
        rep = small_time_kernel_check(lambda y: np.ones_like(y), cfg.alpha, tuple(cfg.interval),
                                      tuple(cfg.t_list), cfg.kernel_paths, cfg.seed)
        payload["kernel"] = rep.to_dict()
        for t, r in zip(rep.t, rep.ratio):
            print(f"t={t:g}: P_t(0,B)/(t nu) = {r:.4f}")
    rows = [[float(x), float(e), float(s), float(h)] for x, e, s, h in
            zip(stats.probes, stats.estimate, stats.stderr, stats.halfwidth)]
    files = _write(cfg, payload, _csv_text(["probe", "estimate", "stderr", "halfwidth"], rows))
    return 0, files


HANDLERS = {"analyze": cmd_analyze, "green": cmd_green, "orlicz": cmd_orlicz,
            "verify": cmd_verify, "simulate": cmd_simulate}


# -- argument parsing ---------------------------------------------------------------

def make_parser():
    p = argparse.ArgumentParser(prog="stablefi", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [common] and per-command sections")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory (default: current directory)")
    common.add_argument("--strict", action="store_const", const=True,
                        help="exit 1 when any verdict is INCONCLUSIVE")
    common.add_argument("--no-csv", dest="csv", action="store_const", const=False)
    common.add_argument("--family", choices=("poly", "log"))
    common.add_argument("--alpha", type=float)
    common.add_argument("--gamma", help="comma-separated list of gamma values")
    common.add_argument("--workers", type=int)
    common.add_argument("--quick", action="store_const", const=True,
                        help="reduced sample sizes")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="classify functional inequalities")
    a.add_argument("--eps", help="Nash exponents")
    a.add_argument("--xi", help="interpolation exponents in (0, 1]")
    a.add_argument("--phi", help="N-function: power:R, xlog or xlogxi:XI")
    a.add_argument("--criteria", help="comma-separated subset, e.g. poincare,nash")

    g = sub.add_parser("green", parents=[common], help="Green function property report")
    g.add_argument("--n", help="radii for the operator bound")

    o = sub.add_parser("orlicz", parents=[common], help="Orlicz norms and delta(Phi)")
    o.add_argument("--phi")
    o.add_argument("--probes", help="indicator radii")

    sub.add_parser("verify", parents=[common], help="run all randomised property suites")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo ensembles")
    s.add_argument("--dt", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--paths", type=int)
    s.add_argument("--eta", type=float)
    s.add_argument("--burn-in", type=float)
    s.add_argument("--probes")
    s.add_argument("--kernel", action="store_const", const=True,
                   help="also run the small-time kernel check")
    s.add_argument("--interval")
    s.add_argument("--t-list")
    s.add_argument("--kernel-paths", type=int)
    return p


def main(argv=None):
    parser = make_parser()
    ns = parser.parse_args(argv)
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    try:
        cfg = build_config(ns.command, flags, ns.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    status, files = HANDLERS[cfg.command](cfg)
    for f in files:
        print(f"wrote {f}")
    return status


if __name__ == "__main__":
    sys.exit(main())
