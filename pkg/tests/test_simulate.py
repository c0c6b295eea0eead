import math

import numpy as np
import pytest
from scipy.stats import levy_stable

from stablefi.measure import Weight
from stablefi.simulate import (BLOCK, AllPathsOverflowedError, Ensemble, PathConfig,
                               TooFewHitsError, block_rng, ergodic_tail_estimate,
                               levy_measure, occupation_chi2, occupation_trend,
                               simulate_ensemble, simulate_path, small_time_kernel_check,
                               stable_increment, stable_standard, stable_tail_constant)
from stablefi.special import constants

A = 1.5
N = 10 ** 6


@pytest.fixture(scope="module")
def draws():
    return stable_standard(A, block_rng(11, 0), N)


def test_sign_symmetry(draws):
    m = np.mean(np.sign(draws))
    assert abs(m) <= 3.0 / math.sqrt(N)


@pytest.mark.parametrize("xi", [0.3, 1.0, 2.5])
def test_characteristic_function(draws, xi):
    # E cos(xi X) = exp(-|xi|^alpha); each cos term has variance at most 1/2
    emp = np.mean(np.cos(xi * draws))
    assert emp == pytest.approx(math.exp(-xi ** A), abs=3 * math.sqrt(0.5 / N))


def test_tail_slope_and_constant(draws):
    xs = np.geomspace(10, 1e3, 12)
    tails = np.array([np.mean(np.abs(draws) > x) for x in xs])
    slope = np.polyfit(np.log(xs), np.log(tails), 1)[0]
    assert slope == pytest.approx(-A, abs=0.1)
    # scipy's S1 parametrisation with scale 1 matches exp(-|xi|^alpha)
    ref = 2 * levy_stable.sf(100.0, A, 0.0)
    assert np.mean(np.abs(draws) > 100) == pytest.approx(ref, rel=0.1)
    assert ref * 100 ** A == pytest.approx(stable_tail_constant(A), rel=0.05)


def test_self_similar_quantiles():
    dt = 0.04
    inc = stable_increment(A, dt, block_rng(12, 0), N) / dt ** (1 / A)
    ref = stable_standard(A, block_rng(13, 0), N)
    for q in (0.1, 0.25, 0.75, 0.9):
        # order-statistic standard error through the empirical density
        qa, qb = np.quantile(inc, q), np.quantile(ref, q)
        width = np.quantile(ref, q + 0.005) - np.quantile(ref, q - 0.005)
        dens = 0.01 / width
        se = math.sqrt(q * (1 - q) / N) / dens
        assert abs(qa - qb) <= 3 * math.sqrt(2) * se


def test_increment_validation():
    with pytest.raises(ValueError):
        stable_increment(A, 0.0, block_rng(0, 0))


def test_block_rng_determinism():
    a = block_rng(5, 3).standard_normal(8)
    b = block_rng(5, 3).standard_normal(8)
    c = block_rng(5, 4).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_path_config_validation():
    w = Weight.poly(A, 2.0)
    for bad in (dict(dt=0.0), dict(dt=0.2), dict(steps=0), dict(burn_in=1.0), dict(eta=0.0)):
        with pytest.raises(ValueError):
            PathConfig(A, w, **bad)
    with pytest.raises(ValueError):
        PathConfig(1.2, w)


def test_ensemble_determinism_and_blocks():
    cfg = PathConfig(A, Weight.poly(A, 2.0), steps=2000, seed=3)
    e1 = simulate_ensemble(cfg, BLOCK)
    e2 = simulate_ensemble(cfg, BLOCK)
    e3 = simulate_ensemble(cfg, 2 * BLOCK)
    assert np.array_equal(e1.samples, e2.samples)
    # a path does not depend on the ensemble size
    assert np.array_equal(e1.samples, e3.samples[:BLOCK])
    assert e1.samples.shape == (BLOCK, len(e1.times))


@pytest.mark.parametrize("w", [Weight.poly(A, 2.0), Weight.log(A, 1.0)])
def test_engines_agree(w):
    cfg = PathConfig(A, w, steps=1500, seed=1)
    jit = simulate_ensemble(cfg, 8, engine="jit")
    ref = simulate_ensemble(cfg, 8, engine="numpy")
    assert np.allclose(jit.samples, ref.samples, rtol=1e-10, atol=1e-12)
    assert np.array_equal(jit.steps_taken, ref.steps_taken)


def test_jit_rejects_custom_weight():
    cfg = PathConfig(A, Weight.constant(A), steps=10)
    with pytest.raises(ValueError):
        simulate_ensemble(cfg, 1, engine="jit")


@pytest.mark.parametrize("level", [1.0, 4.0])
def test_constant_coefficient_gives_stable_law(level):
    # with a = level, Y_T is stable with exp(-level T |xi|^alpha)
    cfg = PathConfig(A, Weight.constant(A, level), steps=100, dt=0.01, burn_in=0.0,
                     eta=10.0, seed=2)
    ens = simulate_ensemble(cfg, 20000)
    yT = ens.samples[:, -1]
    for xi in (0.5, 1.0):
        emp = np.mean(np.cos(xi * yT))
        assert emp == pytest.approx(math.exp(-level * cfg.horizon * xi ** A),
                                    abs=3 * math.sqrt(0.5 / yT.size))


def test_simulate_path():
    cfg = PathConfig(A, Weight.poly(A, 2.0), steps=500, seed=4)
    p = simulate_path(cfg)
    assert p.times[0] == 0.0 and p.times[-1] == pytest.approx(cfg.horizon)
    assert p.values[0] == 0.0
    assert np.all(np.isfinite(p.values)) and not p.overflowed


def test_tail_estimate_basics():
    cfg = PathConfig(A, Weight.poly(A, 2.0), steps=5000, seed=0)
    ens = simulate_ensemble(cfg, BLOCK)
    st = ergodic_tail_estimate(ens, [0.0, 1.0], bins=np.linspace(-3, 3, 13))
    assert st.estimate[0] == 1.0 and st.stderr[0] == 0.0
    assert 0 < st.estimate[1] < 1
    assert st.hist_density.shape == (12,)
    rows = list(st.csv_rows())
    assert rows[0][0] == "probe" and len(rows) == 3
    stat, dof, p = occupation_chi2(ens, cfg.weight, np.array([-np.inf, -1, 0, 1, np.inf]))
    assert dof == 4 and 0 <= p <= 1


def test_all_overflowed():
    cfg = PathConfig(A, Weight.poly(A, 2.0), steps=10)
    ens = simulate_ensemble(cfg, 2)
    dead = Ensemble(cfg, ens.times, ens.samples, np.ones(2, bool), ens.steps_taken)
    with pytest.raises(AllPathsOverflowedError):
        ergodic_tail_estimate(dead, [1.0])


def test_infinite_mass_occupation_drains():
    cfg = PathConfig(A, Weight.poly(A, 0.5), steps=100_000, seed=0, burn_in=0.0)
    ens = simulate_ensemble(cfg, BLOCK)
    frac, slope = occupation_trend(ens, bound=1.0, windows=4)
    assert slope < 0
    assert frac[-1] < frac[0]


def test_levy_measure_values():
    one = lambda y: np.ones_like(np.asarray(y, float))
    nu = levy_measure(one, A, (1.0, 2.0))
    assert nu == pytest.approx(constants(A).C_alpha * (2 / 3) * (1 - 2 ** -1.5), rel=1e-14)
    assert levy_measure(one, A, (2.0, 4.0)) == pytest.approx(2 ** -A * nu, rel=1e-14)
    assert levy_measure(one, A, (-2.0, -1.0)) == pytest.approx(nu, rel=1e-14)
    with pytest.raises(ValueError):
        levy_measure(one, A, (-1.0, 1.0))


def test_kernel_check_flags():
    one = lambda y: np.ones_like(np.asarray(y, float))
    with pytest.raises(ValueError):
        small_time_kernel_check(one, A, (1.0, 2.0), t_list=(0.01, 0.1), n_paths=100)
    with pytest.raises(TooFewHitsError):
        small_time_kernel_check(one, A, (1.0, 2.0), t_list=(0.01,), n_paths=1000)


def test_kernel_ratio_moves_toward_one():
    one = lambda y: np.ones_like(np.asarray(y, float))
    rep = small_time_kernel_check(one, A, (1.0, 2.0), n_paths=200_000)
    dist = [abs(r - 1) for r in rep.ratio]
    assert dist[0] > dist[-1]
