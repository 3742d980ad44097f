"""
Benjamini–Hochberg: пошаговая процедура и скорректированные p-значения.
"""
from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..pvalues import PValueSet


def bh_rejections(p: PValueSet, alpha: float) -> int:
    """Наибольшее k с p_(k) <= kα/m; отвергаются k наименьших p-значений."""
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ParameterError(f"alpha must lie in (0,1), got {alpha}")
    m = p.m
    thresholds = np.arange(1, m + 1) * alpha / m
    ok = np.flatnonzero(p.values <= thresholds)
    return int(ok[-1]) + 1 if ok.size else 0


def bh_adjusted(p: PValueSet) -> np.ndarray:
    """
    BH-скорректированные p-значения в исходном порядке:
    min_{j >= k} p_(j)·m/j, обрезанные сверху единицей.
    """
    m = p.m
    scaled = p.values * m / np.arange(1, m + 1)
    adjusted = np.minimum.accumulate(scaled[::-1])[::-1]
    return p.to_original_order(np.minimum(adjusted, 1.0))
