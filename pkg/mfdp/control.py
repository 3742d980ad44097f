"""
Гибкий контроль медианы FDP (mFDP).

Огибающая строится один раз, γ выбирается после просмотра данных:
  - t_max(γ) - наибольшее p_i, для которого существует t ∈ 𝕋 ∩ [p_i, 1] с B(t)/R(t) <= γ
  - adjusted_pvalues - наименьшее γ, при котором гипотеза отвергается
    (UNBOUNDED для p_i > s2)

Отношение B/R считается один раз на сетке огибающей и используется и для t_max,
и для скорректированных p-значений, так что {i: ad_i <= γ} = {i: p_i <= t_max(γ)}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .envelope import EnvelopeCurve, fdp_ratios
from .errors import ParameterError
from .logger import get_logger
from .pvalues import PValueSet, count_rejections


log = get_logger()

UNBOUNDED = math.inf


@dataclass(frozen=True, eq=False)
class MfdpReport:
    """
    Результат процедуры для одного γ.

    rejected:
        исходные (0-based) индексы гипотез с p_i <= t_max, по возрастанию индекса
    fdp_bound_at_tmax:
        одновременная граница FDP отвергнутого множества (0, если ничего не отвергнуто)
    tdp_lower:
        1 - fdp_bound_at_tmax при непустом отвержении, иначе 0
    adjusted:
        mFDP-скорректированные p-значения в исходном порядке (UNBOUNDED = inf)
    """

    gamma: float
    t_max: float
    rejected: np.ndarray
    n_rejected: int
    fdp_bound_at_tmax: float
    tdp_lower: float
    adjusted: np.ndarray


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (0.0 <= gamma <= 1.0):
        raise ParameterError(f"gamma must lie in [0,1], got {gamma}")
    return gamma


def _check_envelope(p: PValueSet, env: EnvelopeCurve) -> None:
    if env.m != p.m:
        raise ParameterError(f"envelope was built for m={env.m}, got m={p.m}")


def t_max(p: PValueSet, env: EnvelopeCurve, gamma: float) -> float:
    """
    Порог отвержения для γ. 0, если допустимого порога нет.
    """
    gamma = _check_gamma(gamma)
    _check_envelope(p, env)

    admissible = np.flatnonzero(fdp_ratios(env) <= gamma)
    if admissible.size == 0:
        return 0.0

    # все p <= T* отвергаются; самое большое из них и есть t_max
    n = int(env.rejections[admissible[-1]])
    return float(p.values[n - 1]) if n > 0 else 0.0


def _adjusted_sorted(p: PValueSet, env: EnvelopeCurve) -> np.ndarray:
    """
    Скорректированные p-значения в порядке сортировки.

    Обратный проход: накопленный минимум отношения B/R от s2 к s1, затем каждому p_i
    достаётся минимум по точкам сетки t >= max(s1, p_i). Все p_i <= s1 делят одно значение.
    """
    ratios = fdp_ratios(env)
    suffix_min = np.minimum.accumulate(ratios[::-1])[::-1]

    s1, s2 = env.window.s1, env.window.s2
    values = p.values
    lo = int(np.searchsorted(values, s1, side="right"))
    hi = int(np.searchsorted(values, s2, side="right"))

    out = np.full(p.m, UNBOUNDED, dtype=float)
    out[:lo] = suffix_min[0]

    inside = values[lo:hi]
    if inside.size:
        # номер точки сетки: 1 + ранг среди различных p-значений окна
        new_value = np.empty(inside.size, dtype=bool)
        new_value[0] = True
        new_value[1:] = inside[1:] != inside[:-1]
        out[lo:hi] = suffix_min[np.cumsum(new_value)]
    return out


def adjusted_pvalues(p: PValueSet, env: EnvelopeCurve) -> np.ndarray:
    """mFDP-скорректированные p-значения в исходном порядке ввода."""
    _check_envelope(p, env)
    return p.to_original_order(_adjusted_sorted(p, env))


def reject_at(p: PValueSet, env: EnvelopeCurve, gamma: float) -> MfdpReport:
    gamma = _check_gamma(gamma)
    _check_envelope(p, env)

    adjusted_sorted = _adjusted_sorted(p, env)
    threshold = t_max(p, env, gamma)
    n_rejected = int(np.count_nonzero(adjusted_sorted <= gamma))

    expected = count_rejections(p, threshold) if threshold > 0 else 0
    if n_rejected != expected:
        log.error(
            "[Control] adjusted/t_max mismatch: gamma=%s t_max=%s by_adjusted=%s by_threshold=%s",
            gamma,
            threshold,
            n_rejected,
            expected,
        )
        raise RuntimeError(
            f"inconsistent rejection sets at gamma={gamma}: {n_rejected} != {expected}"
        )

    if n_rejected > 0:
        fdp_bound = float(adjusted_sorted[n_rejected - 1])
        tdp_lower = 1.0 - fdp_bound
    else:
        fdp_bound = 0.0
        tdp_lower = 0.0

    rejected = np.sort(p.perm[:n_rejected])

    log.info(
        "[Control] gamma=%s t_max=%s rejected=%s fdp_bound=%s improved=%s",
        gamma,
        threshold,
        n_rejected,
        fdp_bound,
        env.improved,
    )

    return MfdpReport(
        gamma=gamma,
        t_max=threshold,
        rejected=rejected,
        n_rejected=n_rejected,
        fdp_bound_at_tmax=fdp_bound,
        tdp_lower=tdp_lower,
        adjusted=p.to_original_order(adjusted_sorted),
    )
