import csv
import io
import json
import math

import numpy as np
import pytest

from stablefi import fractional as fr
from stablefi.criteria import (CSV_COLUMNS, ClassifyOptions, CriterionFailsError,
                               CriterionReport, Outcome, classify, entropy,
                               interpolation_criterion, logsobolev_criterion,
                               nash_criterion, orlicz_poincare_lower, poincare_criterion,
                               spectral_gap_lower, super_poincare_criterion,
                               super_poincare_rate, variance)
from stablefi.measure import TailHint, Weight
from stablefi.special import constants

OMEGA = 1.5957691216057308  # -1/(cos(3 pi/4) Gamma(3/2)) = sqrt(8/pi)


def test_omega_oracle():
    assert OMEGA == pytest.approx(math.sqrt(8 / math.pi), rel=1e-15)
    assert constants(1.5).omega_alpha == pytest.approx(OMEGA, rel=1e-14)


def test_poincare_values():
    r = poincare_criterion(1.5, Weight.poly(1.5, 1.0))
    assert r.finite
    # brute-force grid oracle for sup x^0.5 (1+x)^-0.5 times the normalised tail
    xs = np.geomspace(1e-3, 1e12, 200001)
    w = Weight.poly(1.5, 1.0)
    assert r.value == pytest.approx(float(np.max(xs ** 0.5 * w.tail(xs))), rel=1e-6)
    assert not poincare_criterion(1.5, Weight.poly(1.5, 0.9)).finite
    assert not poincare_criterion(1.5, Weight.log(1.5, -1.0)).finite


def test_logsobolev_values():
    assert logsobolev_criterion(1.5, Weight.poly(1.5, 2.0)).finite
    assert not logsobolev_criterion(1.5, Weight.poly(1.5, 1.0)).finite
    assert logsobolev_criterion(1.5, Weight.log(1.5, 1.0)).finite


def test_nash_values():
    assert nash_criterion(1.5, Weight.poly(1.5, 2.0), 4.0).finite
    assert not nash_criterion(1.5, Weight.poly(1.5, 1.2), 4.0).finite
    assert not nash_criterion(1.5, Weight.log(1.5, 5.0), 4.0).finite


def test_super_poincare_values():
    assert super_poincare_criterion(1.5, Weight.poly(1.5, 1.5)).outcome is Outcome.HOLDS
    assert super_poincare_criterion(1.5, Weight.poly(1.5, 1.0)).outcome is Outcome.FAILS
    assert super_poincare_criterion(1.5, Weight.log(1.5, 0.5)).outcome is Outcome.HOLDS


def test_interpolation_values():
    assert interpolation_criterion(1.5, Weight.log(1.5, 0.5), 0.5).finite
    assert not interpolation_criterion(1.5, Weight.log(1.5, 0.3), 0.5).finite
    for w in (Weight.poly(1.5, 2.0), Weight.poly(1.5, 1.0), Weight.log(1.5, 0.7)):
        assert (interpolation_criterion(1.5, w, 1.0).verdict
                == logsobolev_criterion(1.5, w).verdict)


def test_bounds():
    assert spectral_gap_lower(1.0, 1.5) == pytest.approx(1 / (4 * OMEGA), rel=1e-14)
    assert spectral_gap_lower(1.0, 1.5) == pytest.approx(0.15667, abs=1e-5)
    lo, hi = orlicz_poincare_lower(1.0, 1.5)
    assert lo == pytest.approx(1 / (32 * OMEGA), rel=1e-14)
    assert hi == pytest.approx(1 / (8 * OMEGA), rel=1e-14)
    assert lo == pytest.approx(0.019583, abs=1e-6)
    assert hi == pytest.approx(0.078332, abs=1e-6)
    assert orlicz_poincare_lower(math.inf, 1.5) == (0.0, 0.0)
    assert spectral_gap_lower(1e300, 1.5) < 1e-299
    with pytest.raises(ValueError):
        spectral_gap_lower(math.inf, 1.5)


def test_super_poincare_rate():
    beta = super_poincare_rate(1.5, Weight.poly(1.5, 2.0))
    rs = np.geomspace(1e-3, 1e6, 60)
    vals = np.array([beta(r) for r in rs])
    assert np.all(np.isfinite(vals))
    assert np.all(np.diff(vals) <= 1e-12 * vals[:-1])
    with pytest.raises(CriterionFailsError):
        super_poincare_rate(1.5, Weight.poly(1.5, 1.0))


def test_classify_examples():
    r = classify(1.5, Weight.poly(1.5, 2.0))
    for k in ("ergodic", "poincare", "super_poincare", "logsobolev", "strongly_ergodic",
              "nash:4"):
        assert r.verdict(k) is Outcome.HOLDS, k
    r = classify(1.5, Weight.poly(1.5, 1.0))
    assert r.verdict("poincare") is Outcome.HOLDS
    assert r.verdict("super_poincare") is Outcome.FAILS
    assert r.verdict("logsobolev") is Outcome.FAILS
    r = classify(1.5, Weight.log(1.5, 1.0), ClassifyOptions(eps=(2.5, 4.0, 10.0)))
    for k in ("poincare", "super_poincare", "logsobolev"):
        assert r.verdict(k) is Outcome.HOLDS
    for e in ("2.5", "4", "10"):
        assert r.verdict(f"nash:{e}") is Outcome.FAILS


def test_infinite_mass_all_fail():
    r = classify(1.5, Weight.poly(1.5, 0.5))
    assert set(r.verdicts.values()) == {Outcome.FAILS}


def test_custom_weight_without_hint_inconclusive():
    w = Weight.custom(1.5, lambda x: (1 + np.abs(np.asarray(x, float))) ** 3.0)
    with np.errstate(over="ignore"):
        r = classify(1.5, w, ClassifyOptions(bounds=False))
    assert Outcome.FAILS not in r.verdicts.values()


def test_custom_weight_with_hint_matches_family():
    ref = classify(1.5, Weight.poly(1.5, 2.0))
    hint = TailHint(2.0, 0.0, 2.0)
    w = Weight.custom(1.5, lambda x: (1 + np.abs(np.asarray(x, float))) ** 3.0, hint=hint)
    with np.errstate(over="ignore"):
        r = classify(1.5, w)
    for k in ("poincare", "logsobolev", "nash:4"):
        assert r.verdict(k) is ref.verdict(k)


def test_report_round_trip():
    r = classify(1.5, Weight.poly(1.5, 2.0))
    back = json.loads(r.to_json())
    assert {k: v["verdict"] for k, v in back["criteria"].items()} == {
        k: v.value for k, v in r.verdicts.items()}
    rows = list(csv.DictReader(io.StringIO(CriterionReport.to_csv([r]))))
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert len(rows) == len(r.verdicts)


def test_entropy_variance():
    w = Weight.poly(1.5, 2.0)
    const = lambda x: np.full_like(np.asarray(x, float), 3.0)
    assert variance(const, w) == pytest.approx(0.0, abs=1e-12)
    assert entropy(const, w) == pytest.approx(0.0, abs=1e-12)
    odd = lambda x: 1.0 + np.tanh(np.asarray(x, float))
    assert w.expect(odd) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        entropy(lambda x: np.asarray(x, float), w)


def test_variance_below_poincare_bound():
    a = 1.5
    w = Weight.poly(a, 2.0)
    delta = poincare_criterion(a, w).value
    f = fr.TestFunction.gaussian(1.0)
    var = variance(f, w, f.kinks)
    energy = fr.dirichlet_form(f, f, a)
    assert var <= 4 * constants(a).omega_alpha * delta * energy
