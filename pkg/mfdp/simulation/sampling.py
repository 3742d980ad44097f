from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.stats import norm

from ..pvalues import PValueSet, ingest
from .covariance import draw_z, draw_z_dense
from .models import TWO_SIDED, Scenario, TruthMask


# p, обнулившееся при вычислении, заменяем наименьшим положительным нормальным числом
_P_FLOOR = np.finfo(float).tiny


def z_to_pvalues(z: np.ndarray, sidedness: str = TWO_SIDED) -> np.ndarray:
    """Двусторонние p = 2(1 - Φ(|Z|)) или правосторонние p = 1 - Φ(Z), в (0, 1]."""
    z = np.asarray(z, dtype=float)
    if sidedness == TWO_SIDED:
        p = 2.0 * norm.sf(np.abs(z))
    else:
        p = norm.sf(z)
    return np.clip(p, _P_FLOOR, 1.0)


def sample_z(scn: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Z со сдвигом delta на первых n_false координатах."""
    z = draw_z_dense(scn, rng) if scn.dense else draw_z(scn, rng)
    n_false = scn.n_false
    if n_false and scn.delta:
        z[:n_false] += scn.delta
    return z


def sample_pvalues(scn: Scenario, rng: np.random.Generator) -> Tuple[PValueSet, TruthMask]:
    """
    Одна выборка p-значений сценария и маска верных гипотез.
    Ложные гипотезы - первые round((1 - pi0)·m) индексов.
    """
    z = sample_z(scn, rng)
    is_null = np.arange(scn.m) >= scn.n_false
    is_null.setflags(write=False)
    return ingest(z_to_pvalues(z, scn.sidedness)), TruthMask(is_null=is_null)
