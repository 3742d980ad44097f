"""
Замер полного пайплайна analyze на 10⁶ отсортированных p-значениях.

Запуск: PYTHONPATH=. pytest tests/test_performance.py -m slow -v
"""
import time

import numpy as np
import pytest

from mfdp.control import adjusted_pvalues
from mfdp.envelope import CandidateFamilyConfig, build_envelope, improve_envelope
from mfdp.pvalues import ThresholdWindow, ingest


def _best_time(values, repeats=3):
    window = ThresholdWindow(0.0, 0.1)
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        p = ingest(values)
        env = improve_envelope(p, build_envelope(p, CandidateFamilyConfig(c=1.0 / (2 * p.m), window=window)))
        adjusted_pvalues(p, env)
        best = min(best, time.perf_counter() - started)
    return best


def _sorted_values(m, rng):
    values = np.concatenate([rng.uniform(size=m // 10) ** 6, rng.uniform(size=m - m // 10)])
    return np.sort(np.clip(values, np.finfo(float).tiny, 1.0))


@pytest.mark.slow
def test_analyze_pipeline_is_linear_after_sorting():
    rng = np.random.default_rng(0)
    small = _best_time(_sorted_values(10**5, rng))
    large = _best_time(_sorted_values(10**6, rng))
    assert large < 1.0
    assert large / small <= 12.0
