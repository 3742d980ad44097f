"""
Monte Carlo: частота ошибки огибающей и мощность процедуры в сравнении с BH.

Повторы независимы и считаются чанками в пуле потоков. У каждого повтора свой
Philox-поток (seed, rep), результаты собираются в порядке номеров повторов,
поэтому итог побитово воспроизводим при любом числе потоков.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import numpy as np

from ..config import settings
from ..control import adjusted_pvalues
from ..envelope import CandidateFamilyConfig, EnvelopeCurve, build_envelope, improve_envelope
from ..errors import ParameterError
from ..logger import get_simulation_logger
from ..pvalues import PValueSet
from .baseline import bh_rejections
from .models import McResult, Scenario, TruthMask, binomial_se
from .rng import replicate_rng
from .sampling import sample_pvalues


log = get_simulation_logger()


def _envelope(scn: Scenario, p: PValueSet) -> EnvelopeCurve:
    cfg = CandidateFamilyConfig(c=scn.c_value, window=scn.window)
    env = build_envelope(p, cfg)
    return improve_envelope(p, env) if scn.improved else env


def envelope_violated(p: PValueSet, truth: TruthMask, env: EnvelopeCurve) -> bool:
    """
    Событие {∃t ∈ 𝕋: V(t) > B(t)}. V меняется только в p-значениях, B не убывает,
    поэтому достаточно точек сетки огибающей.
    """
    null_sorted = truth.is_null[p.perm]
    v_cum = np.concatenate(([0], np.cumsum(null_sorted)))
    V = v_cum[env.rejections]
    return bool(np.any(V > env.grid_values))


def _error_replicate(scn: Scenario, rep: int) -> float:
    p, truth = sample_pvalues(scn, replicate_rng(scn.seed, rep))
    return 1.0 if envelope_violated(p, truth, _envelope(scn, p)) else 0.0


def _power_replicate(scn: Scenario, rep: int) -> np.ndarray:
    """Доли отвергнутых ложных гипотез: по одной на γ из gamma_grid, последняя - BH."""
    p, truth = sample_pvalues(scn, replicate_rng(scn.seed, rep))
    n_false = truth.n_false
    env = _envelope(scn, p)

    # ложные гипотезы - первые n_false в исходном порядке
    adjusted_false = adjusted_pvalues(p, env)[:n_false]
    out = np.empty(len(scn.gamma_grid) + 1, dtype=float)
    for k, gamma in enumerate(scn.gamma_grid):
        out[k] = np.count_nonzero(adjusted_false <= gamma) / n_false

    k_bh = bh_rejections(p, scn.bh_alpha)
    false_sorted = ~truth.is_null[p.perm]
    out[-1] = np.count_nonzero(false_sorted[:k_bh]) / n_false
    return out


def _run_chunked(
    scn: Scenario,
    replicate: Callable[[Scenario, int], object],
    workers: Optional[int] = None,
) -> List[object]:
    workers = workers or settings.SIM_WORKERS
    chunk = max(1, settings.SIM_CHUNK_SIZE)
    starts = range(0, scn.reps, chunk)

    def run_chunk(start: int) -> List[object]:
        return [replicate(scn, rep) for rep in range(start, min(start + chunk, scn.reps))]

    if workers <= 1:
        chunks = [run_chunk(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            # map сохраняет порядок чанков
            chunks = list(executor.map(run_chunk, starts))

    return [item for part in chunks for item in part]


def estimate_error_rate(scn: Scenario, workers: Optional[int] = None) -> McResult:
    started = time.monotonic()
    outcomes = np.asarray(_run_chunked(scn, _error_replicate, workers), dtype=float)
    rate = float(outcomes.mean())
    se = binomial_se(rate, scn.reps)

    log.info(
        "[Simulation] error scenario=%s pi0=%s delta=%s reps=%s seed=%s rate=%.4f se=%.4f elapsed=%.1fs",
        scn.label,
        scn.pi0,
        scn.delta,
        scn.reps,
        scn.seed,
        rate,
        se,
        time.monotonic() - started,
    )
    return McResult(reps_used=scn.reps, error_rate=rate, error_se=se)


def estimate_power(scn: Scenario, workers: Optional[int] = None) -> McResult:
    if scn.n_false == 0:
        raise ParameterError(
            f"power is undefined without false hypotheses (pi0={scn.pi0}, m={scn.m})"
        )

    started = time.monotonic()
    rows = np.vstack(_run_chunked(scn, _power_replicate, workers))
    means = rows.mean(axis=0)
    ses = rows.std(axis=0, ddof=1) / np.sqrt(scn.reps)

    gammas = scn.gamma_grid
    result = McResult(
        reps_used=scn.reps,
        power_by_gamma={g: float(means[k]) for k, g in enumerate(gammas)},
        power_se_by_gamma={g: float(ses[k]) for k, g in enumerate(gammas)},
        bh_power={scn.bh_alpha: float(means[-1])},
        bh_power_se={scn.bh_alpha: float(ses[-1])},
    )

    log.info(
        "[Simulation] power scenario=%s pi0=%s delta=%s reps=%s seed=%s power=%s bh=%.4f elapsed=%.1fs",
        scn.label,
        scn.pi0,
        scn.delta,
        scn.reps,
        scn.seed,
        {g: round(v, 4) for g, v in result.power_by_gamma.items()},
        means[-1],
        time.monotonic() - started,
    )
    return result
