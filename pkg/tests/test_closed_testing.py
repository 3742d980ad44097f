"""
Тесты ψ-взвешенного closed testing и его совпадения с улучшенной огибающей.

Запуск: PYTHONPATH=. pytest tests/test_closed_testing.py -v
Полные проверки на 1000 примерах помечены slow.
"""
import numpy as np
import pytest

from mfdp.closed_testing import (
    PSI_CONSTANT_ONE,
    PSI_CUSTOM,
    PSI_LINEAR,
    PSI_QUADRATIC,
    brute_force_closed_bound,
    closed_testing_pi0,
    custom_psi,
    generalized_N_bound,
    generalized_V_bound,
    local_test,
    psi_preset,
    verify_equivalence,
)
from mfdp.envelope import CandidateFamilyConfig, build_envelope, improve_envelope
from mfdp.errors import CapacityError, ParameterError, WindowRangeError
from mfdp.estimators import METHOD_CLOSED_TESTING, fixed_threshold_report, median_unbiased_pi0
from mfdp.pvalues import ThresholdWindow, count_rejections, count_upper_tail, ingest


ONE = psi_preset("one")
LINEAR = psi_preset("linear")
QUADRATIC = psi_preset("quadratic")


def test_psi_presets_and_aliases():
    assert ONE.kind == PSI_CONSTANT_ONE
    assert psi_preset("x").kind == PSI_LINEAR
    assert psi_preset(" X2 ").kind == PSI_QUADRATIC
    assert ONE.eval([0.1, 0.3]).tolist() == [1.0, 1.0]
    assert QUADRATIC.eval(0.5) == 0.25
    with pytest.raises(ParameterError):
        psi_preset("cubic")


def test_custom_psi_must_be_non_decreasing():
    psi = custom_psi(lambda x: x ** 3)
    assert psi.kind == PSI_CUSTOM
    with pytest.raises(ParameterError):
        custom_psi(lambda x: -x)
    with pytest.raises(ParameterError):
        custom_psi(lambda x: 1.0 / x)


def test_local_test_examples():
    p = ingest([0.1, 0.9])
    stats = local_test(p, [0, 1], 0.2, ONE)
    assert (stats.w_minus, stats.w_plus, stats.reject) == (1.0, 1.0, False)

    # двоичные дроби, чтобы W⁻ и W⁺ совпали точно
    p = ingest([0.125, 0.875])
    stats = local_test(p, [0, 1], 0.25, LINEAR)
    assert (stats.w_minus, stats.w_plus, stats.reject) == (0.375, 0.375, False)

    stats = local_test(p, [0], 0.25, LINEAR)
    assert stats.reject

    empty = local_test(p, [], 0.25, ONE)
    assert (empty.w_minus, empty.w_plus, empty.reject) == (0.0, 0.0, False)


def test_weights_above_one_half_use_distance_to_one_half():
    """При t > 1/2 p из (1/2, t] идут в W⁻ с весом ψ(p - 1/2), а не с отрицательным."""
    stats = local_test(ingest([0.6]), [0], 0.7, LINEAR)
    assert stats.w_minus == pytest.approx(0.1)
    assert stats.w_plus == pytest.approx(0.1)

    stats = local_test(ingest([0.1, 0.6]), [0, 1], 0.7, LINEAR)
    assert stats.w_minus == pytest.approx(0.5)
    assert stats.w_plus == pytest.approx(0.1)
    assert stats.reject

    root = custom_psi(np.sqrt)
    stats = local_test(ingest([0.6, 0.65]), [0, 1], 0.7, root)
    assert np.isfinite(stats.w_minus)
    assert stats.w_minus == pytest.approx(np.sqrt(0.1) + np.sqrt(0.15))
    assert stats.w_plus == pytest.approx(stats.w_minus)


@pytest.mark.parametrize("psi", [LINEAR, custom_psi(np.sqrt)], ids=["linear", "sqrt"])
def test_generalized_N_above_one_half(psi):
    # W⁺ = ψ(0.1) + ψ(0.15) + ψ(0.4); три наибольших p с p <= t укладываются, четвёртое уже нет
    assert generalized_N_bound(ingest([0.05, 0.6, 0.65, 0.9]), 0.7, psi) == 3


def test_local_test_parameter_checks():
    p = ingest([0.1, 0.9])
    with pytest.raises(ParameterError):
        local_test(p, [0, 5], 0.2, ONE)
    with pytest.raises(ParameterError):
        local_test(p, [0], 1.0, ONE)


def test_linear_psi_at_one_half_is_mean_test(rng):
    """ψ(x) = x, t = 1/2: отвержение ⇔ среднее p в I меньше 1/2."""
    for _ in range(200):
        m = int(rng.integers(1, 12))
        values = rng.integers(1, 1025, size=m) / 1024
        p = ingest(values)
        subset = np.flatnonzero(rng.uniform(size=m) < 0.6)
        if subset.size == 0:
            continue
        stats = local_test(p, subset, 0.5, LINEAR)
        assert stats.reject == (values[subset].mean() < 0.5)


def test_generalized_N_examples():
    assert generalized_N_bound(ingest([0.1, 0.3, 0.85, 0.95]), 0.2, ONE) == 4
    assert generalized_N_bound(ingest([0.01, 0.05, 0.1]), 0.2, ONE) == 0
    assert generalized_N_bound(ingest([0.1, 0.9]), 0.2, QUADRATIC) == 2


def test_generalized_V_examples():
    assert generalized_V_bound(ingest([0.1, 0.4, 0.95]), 0.2, LINEAR) == 1
    assert generalized_V_bound(ingest([0.1, 0.4, 0.6]), 0.2, LINEAR) == 0
    with pytest.raises(ParameterError):
        generalized_V_bound(ingest([0.1, 0.4]), 0.6, ONE)


def test_constant_psi_reduces_to_counting_bounds(mixed_pvalues):
    p = ingest(mixed_pvalues)
    for t in (0.05, 0.1, 0.25, 0.5):
        above = p.m - count_rejections(p, t)
        v_bar = count_upper_tail(p, t)
        assert generalized_N_bound(p, t, ONE) == min(p.m, above + v_bar)
        assert generalized_V_bound(p, t, ONE) == min(fixed_threshold_report(p, t).V_bar, count_rejections(p, t))

        est = closed_testing_pi0(p, t, ONE)
        assert est.method == METHOD_CLOSED_TESTING
        assert est.raw == pytest.approx(min(median_unbiased_pi0(p, t).raw, 1.0))


def _improved(values, c=0.0, window=ThresholdWindow(0.0, 0.45)):
    p = ingest(values)
    return p, improve_envelope(p, build_envelope(p, CandidateFamilyConfig(c=c, window=window)))


def test_brute_force_examples():
    window = ThresholdWindow(0.0, 0.45)
    p, env_prime = _improved([0.01, 0.02, 0.52], window=window)
    assert env_prime.is_zero
    assert brute_force_closed_bound(p, [], env_prime, window) == 0
    # подходят только подмножества из p > s2
    assert brute_force_closed_bound(p, [0, 1, 2], env_prime, window) == 1
    assert brute_force_closed_bound(p, [0, 1], env_prime, window) == 0


def test_brute_force_matches_improved_envelope(rng):
    window = ThresholdWindow(0.0, 0.45)
    values = np.concatenate([rng.uniform(size=5) ** 4, rng.uniform(size=7)])
    p, env_prime = _improved(values, c=1.0 / 24, window=window)
    for t, expected in zip(env_prime.grid_ts, env_prime.grid_values):
        rejected = p.perm[: count_rejections(p, float(t))]
        assert brute_force_closed_bound(p, rejected, env_prime, window) == expected


def test_brute_force_guards():
    window = ThresholdWindow(0.0, 0.45)
    p, env_prime = _improved(np.linspace(0.01, 0.99, 30), window=window)
    with pytest.raises(CapacityError):
        brute_force_closed_bound(p, range(30), env_prime, window)

    p = ingest([0.1, 0.9])
    env = build_envelope(p, CandidateFamilyConfig(c=0.0, window=window))
    with pytest.raises(ParameterError):
        brute_force_closed_bound(p, [0], env, window)

    wide = ThresholdWindow(0.0, 0.6)
    p, env_prime = _improved([0.1, 0.9], window=wide)
    with pytest.raises(WindowRangeError):
        brute_force_closed_bound(p, [0], env_prime, wide)


def test_verify_equivalence_quick():
    report = verify_equivalence(n_instances=30, seed=3)
    assert report.ok, report.details[:3]
    assert report.points_checked >= 30


@pytest.mark.slow
def test_verify_equivalence_thousand_instances():
    report = verify_equivalence(n_instances=1000, seed=0)
    assert report.mismatches == 0, report.details[:3]


def test_verify_equivalence_rejects_wide_window():
    with pytest.raises(WindowRangeError):
        verify_equivalence(n_instances=1, window=ThresholdWindow(0.0, 0.5))


def test_closed_bound_is_monotone_in_index_set(rng):
    """I ⊆ J ⟹ B̄(I) <= B̄(J) на 200 случайных вложенных парах."""
    window = ThresholdWindow(0.0, 0.45)
    for _ in range(200):
        m = int(rng.integers(2, 9))
        values = np.concatenate([rng.uniform(size=m // 2) ** 4, rng.uniform(size=m - m // 2)])
        values = np.clip(values, 1e-12, 1.0)
        c = float(rng.choice([0.0, 1.0 / (2 * m), 0.01]))
        p, env_prime = _improved(values, c=c, window=window)
        J = np.flatnonzero(rng.uniform(size=m) < 0.7)
        I = J[rng.uniform(size=J.size) < 0.5]
        assert brute_force_closed_bound(p, I, env_prime, window) <= brute_force_closed_bound(p, J, env_prime, window)


@pytest.mark.slow
def test_constant_psi_reductions_on_random_instances(rng):
    """ψ ≡ 1 на 1000 наборах: N-граница равна m·π̄0 (с обрезкой), V-граница равна min(R, V̄')."""
    for _ in range(1000):
        m = int(rng.integers(1, 300))
        values = np.concatenate([rng.uniform(size=m // 4) ** 4, rng.uniform(size=m - m // 4)])
        values = np.clip(np.round(values, 3), 0.001, 1.0)
        p = ingest(values)
        t = float(rng.choice([rng.uniform(0.001, 0.999), values[rng.integers(m)], 1.0 - values[rng.integers(m)]]))
        if not 0.0 < t < 1.0:
            continue
        R, v_bar = count_rejections(p, t), count_upper_tail(p, t)
        assert generalized_N_bound(p, t, ONE) == min(p.m, p.m - R + v_bar)
        if t <= 0.5:
            assert generalized_V_bound(p, t, ONE) == min(R, v_bar)
