"""
Тесты процедуры mFDP: t_max(γ), скорректированные p-значения и отвержения.

Запуск: PYTHONPATH=. pytest tests/test_control.py -v
"""
import math

import numpy as np
import pytest

from mfdp.control import UNBOUNDED, adjusted_pvalues, reject_at, t_max
from mfdp.envelope import CandidateFamilyConfig, build_envelope, improve_envelope
from mfdp.errors import ParameterError
from mfdp.pvalues import ThresholdWindow, count_rejections, ingest


HALF = ThresholdWindow(0.0, 0.5)
FOUR = [0.001, 0.002, 0.003, 0.9]


def _env(values, c=0.0, window=HALF, improved=False):
    p = ingest(values)
    env = build_envelope(p, CandidateFamilyConfig(c=c, window=window))
    return p, (improve_envelope(p, env) if improved else env)


def test_tmax_examples():
    p, env = _env(FOUR)
    assert env.kappa == pytest.approx(0.1)
    assert t_max(p, env, 0.25) == 0.003

    p, env = _env([0.3, 0.9])
    assert t_max(p, env, 0.5) == 0.0


def test_adjusted_examples():
    p, env = _env(FOUR)
    assert adjusted_pvalues(p, env).tolist() == [0.0, 0.0, 0.0, UNBOUNDED]

    p, env = _env([0.6, 0.7, 0.95])
    assert np.all(np.isinf(adjusted_pvalues(p, env)))


def test_reject_at_examples():
    p, env = _env(FOUR)
    report = reject_at(p, env, 0.25)
    assert report.rejected.tolist() == [0, 1, 2]
    assert report.t_max == 0.003
    assert report.fdp_bound_at_tmax == 0.0
    assert report.tdp_lower == 1.0

    report = reject_at(p, env, 0.0)
    assert report.rejected.tolist() == [0, 1, 2]

    p, env = _env([0.3, 0.9])
    report = reject_at(p, env, 0.05)
    assert report.n_rejected == 0
    assert report.t_max == 0.0
    assert report.fdp_bound_at_tmax == 0.0 and report.tdp_lower == 0.0


def test_rejected_indices_follow_input_order():
    p, env = _env([0.9, 0.003, 0.001, 0.002])
    report = reject_at(p, env, 0.25)
    assert report.rejected.tolist() == [1, 2, 3]
    assert math.isinf(report.adjusted[0])


def test_gamma_one_takes_largest_pvalue_in_window(mixed_pvalues):
    window = ThresholdWindow(0.0, 0.1)
    p, env = _env(mixed_pvalues, c=1.0 / 400, window=window, improved=True)
    inside = mixed_pvalues[mixed_pvalues <= window.s2]
    assert t_max(p, env, 1.0) == inside.max()


@pytest.mark.parametrize("gamma", [-0.1, 1.5, float("nan")])
def test_gamma_outside_unit_interval(gamma):
    p, env = _env(FOUR)
    with pytest.raises(ParameterError):
        t_max(p, env, gamma)
    with pytest.raises(ParameterError):
        reject_at(p, env, gamma)


def test_envelope_for_other_data_is_rejected():
    p, env = _env(FOUR)
    with pytest.raises(ParameterError):
        adjusted_pvalues(ingest([0.1, 0.2]), env)


def _naive_adjusted(values, env):
    """Прямой расчёт: min по всем t ∈ 𝕋 ∩ [p_i, 1] из отношения min(B/R, 1), точки - p и скачки B̃."""
    s1, s2 = env.window.s1, env.window.s2
    pts = np.concatenate([[s1], values[(values > s1) & (values <= s2)]])
    if not env.improved:
        pts = np.union1d(pts, env.candidate_jumps())
    bounds = env.values_at(pts).astype(float)
    counts = np.sum(values[:, None] <= pts[None, :], axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(counts == 0, np.where(bounds == 0, 0.0, 1.0), np.minimum(bounds / counts, 1.0))
    out = []
    for v in values:
        if v > s2:
            out.append(math.inf)
        else:
            out.append(float(ratios[pts >= v].min()))
    return np.array(out)


@pytest.mark.parametrize("improved", [False, True])
def test_adjusted_match_naive_scan(rng, improved):
    for _ in range(25):
        m = int(rng.integers(3, 60))
        values = np.concatenate([rng.uniform(size=m // 2) ** 6, rng.uniform(size=m - m // 2)])
        values = np.clip(np.round(values, 4), 1e-4, 1.0)
        window = ThresholdWindow(0.0, 0.2)
        p, env = _env(values, c=1.0 / (2 * m), window=window, improved=improved)
        assert np.allclose(adjusted_pvalues(p, env), _naive_adjusted(values, env), rtol=0, atol=1e-15)


@pytest.mark.parametrize("improved", [False, True])
def test_rejections_consistent_and_monotone_in_gamma(mixed_pvalues, improved):
    """{ad_i <= γ} = {p_i <= t_max(γ)} на сетке γ, число отвержений не убывает."""
    p, env = _env(mixed_pvalues, c=1.0 / 400, window=ThresholdWindow(0.0, 0.1), improved=improved)
    adjusted = adjusted_pvalues(p, env)
    previous = -1
    for gamma in np.linspace(0.0, 1.0, 41):
        report = reject_at(p, env, gamma)
        by_threshold = count_rejections(p, report.t_max) if report.t_max > 0 else 0
        assert report.n_rejected == by_threshold
        assert report.n_rejected == int(np.sum(adjusted <= gamma))
        assert report.n_rejected >= previous
        previous = report.n_rejected


def test_improved_envelope_rejects_at_least_as_much(mixed_pvalues):
    window = ThresholdWindow(0.0, 0.1)
    p, env = _env(mixed_pvalues, c=1.0 / 400, window=window)
    imp = improve_envelope(p, env)
    assert np.all(adjusted_pvalues(p, imp) <= adjusted_pvalues(p, env))
    for gamma in (0.01, 0.05, 0.1):
        assert reject_at(p, imp, gamma).n_rejected >= reject_at(p, env, gamma).n_rejected


def _random_instance(rng):
    m = int(rng.integers(1, 80))
    values = np.concatenate([rng.uniform(size=m // 2) ** 6, rng.uniform(size=m - m // 2)])
    values = np.clip(np.round(values, int(rng.integers(2, 6))), 1e-5, 1.0)
    s1 = float(rng.choice([0.0, rng.uniform(0.0, 0.3)]))
    window = ThresholdWindow(s1, float(rng.uniform(s1 + 0.01, 1.0)))
    c = float(rng.choice([0.0, 1.0 / (2 * m), rng.uniform(0.0, 0.05)]))
    return values, c, window


@pytest.mark.slow
@pytest.mark.parametrize("improved", [False, True])
def test_adjusted_match_naive_scan_on_random_windows(rng, improved):
    """1000 наборов со случайными окнами и c: линейный проход совпадает с прямым расчётом."""
    for _ in range(1000):
        values, c, window = _random_instance(rng)
        p, env = _env(values, c=c, window=window, improved=improved)
        assert np.allclose(adjusted_pvalues(p, env), _naive_adjusted(values, env), rtol=0, atol=1e-15)


@pytest.mark.slow
@pytest.mark.parametrize("improved", [False, True])
def test_rejections_monotone_in_gamma_on_random_instances(rng, improved):
    gammas = np.linspace(0.0, 1.0, 21)
    for _ in range(300):
        values, c, window = _random_instance(rng)
        p, env = _env(values, c=c, window=window, improved=improved)
        adjusted = adjusted_pvalues(p, env)
        counts = [reject_at(p, env, g).n_rejected for g in gammas]
        assert counts == sorted(counts)
        assert counts == [int(np.sum(adjusted <= g)) for g in gammas]
