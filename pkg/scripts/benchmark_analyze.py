#!/usr/bin/env python3
"""
Замер времени полного пайплайна analyze (огибающая, улучшение, скорректированные
p-значения) на 10⁵ и 10⁶ p-значениях и отношение времён.

После сортировки всё линейно по m, так что отношение должно быть около 10
(не больше 12 с учётом накладных расходов).

Запуск:
  python scripts/benchmark_analyze.py
  python scripts/benchmark_analyze.py --unsorted --repeats 5
"""
import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))

import numpy as np

from mfdp.control import adjusted_pvalues
from mfdp.envelope import CandidateFamilyConfig, build_envelope, improve_envelope
from mfdp.pvalues import ThresholdWindow, ingest


def pipeline_seconds(values: np.ndarray, repeats: int) -> float:
    """Лучшее из repeats время одного прогона."""
    window = ThresholdWindow(0.0, 0.1)
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        p = ingest(values)
        env = build_envelope(p, CandidateFamilyConfig(c=1.0 / (2 * p.m), window=window))
        env = improve_envelope(p, env)
        adjusted_pvalues(p, env)
        best = min(best, time.perf_counter() - started)
    return best


def make_values(m: int, rng: np.random.Generator, presorted: bool) -> np.ndarray:
    # 10% сигнала около нуля, остальное равномерно
    n_signal = m // 10
    values = np.concatenate([rng.uniform(size=n_signal) ** 6, rng.uniform(size=m - n_signal)])
    values = np.clip(values, np.finfo(float).tiny, 1.0)
    return np.sort(values) if presorted else rng.permutation(values)


def main() -> int:
    parser = argparse.ArgumentParser(description="Benchmark the analyze pipeline")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--unsorted", action="store_true", help="подавать неотсортированные p")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    presorted = not args.unsorted

    small = pipeline_seconds(make_values(10**5, rng, presorted), args.repeats)
    large = pipeline_seconds(make_values(10**6, rng, presorted), args.repeats)

    print(f"m=1e5: {small * 1000:.1f} ms")
    print(f"m=1e6: {large * 1000:.1f} ms")
    print(f"ratio: {large / small:.2f}")

    ok = large < 1.0 and large / small <= 12.0
    print("OK" if ok else "SLOW")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
