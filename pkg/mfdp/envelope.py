"""
Одновременная 50%-доверительная огибающая B̃ для числа ложных отвержений V(t), t ∈ 𝕋.

Семейство кандидатов по умолчанию: B^κ(t) = ⌊(t + c)/κ⌋, κ ∈ (0, ∞].
B̃ = B^{κ_max}, где κ_max - наибольшее κ, при котором B^κ(t) >= V̄'(t) на всём окне.
Улучшение: B̃'(t) = R(t) - max{[R(l) - B̃(l)]⁺ : l ∈ 𝕋, l <= t}.

Сетка вычислений кривой - {s1} ∪ {p_i ∈ (s1, s2]}: между соседними точками сетки R(t)
постоянна, поэтому B̃' и отношение B̃/R достаточно знать в этих точках.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .config import settings
from .errors import ParameterError, WindowRangeError
from .logger import get_logger
from .pvalues import PValueSet, ThresholdWindow, count_rejections, count_upper_tail


log = get_logger()

KAPPA_INFINITE = math.inf

# Относительный допуск floor: (u + c) / ((u + c) / n) в double может дать n - 1ulp
_FLOOR_SLACK = 1e-12


@dataclass(frozen=True)
class CandidateFamilyConfig:
    """Параметры семейства B^κ: константа c >= 0 и окно 𝕋."""

    c: float
    window: ThresholdWindow

    def __post_init__(self) -> None:
        c = float(self.c)
        if not math.isfinite(c) or c < 0.0:
            raise ParameterError(f"c must be a finite number >= 0, got {self.c}")
        object.__setattr__(self, "c", c)

    @classmethod
    def default_for(cls, m: int, window: Optional[ThresholdWindow] = None) -> "CandidateFamilyConfig":
        """c = 1/(2m) - значение по умолчанию, фиксируется до анализа данных."""
        if window is None:
            window = ThresholdWindow(settings.ENVELOPE_WINDOW_START, settings.ENVELOPE_WINDOW_END)
        return cls(c=1.0 / (2 * m), window=window)


@dataclass(frozen=True, eq=False)
class EnvelopeCurve:
    """
    Ступенчатая непрерывная справа кривая на окне 𝕋.

    kappa:
        κ_max (KAPPA_INFINITE - огибающая тождественно 0)
    c, window:
        параметры семейства, из которого построена кривая
    grid_ts:
        сетка вычислений по возрастанию: s1 и различные p-значения из (s1, s2]
    grid_values:
        значения кривой в точках grid_ts
    rejections:
        R(t) в точках grid_ts
    improved:
        True - это B̃', False - B̃
    degenerate:
        кандидат κ = 0 отброшен (p-значения ровно 1 при c = 0 и s1 = 0)
    m:
        число гипотез
    """

    kappa: float
    c: float
    window: ThresholdWindow
    grid_ts: np.ndarray
    grid_values: np.ndarray
    rejections: np.ndarray
    improved: bool
    degenerate: bool
    m: int

    @property
    def is_zero(self) -> bool:
        return not bool(self.grid_values.any())

    def values_at(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < self.window.s1 or ts.max() > self.window.s2):
            raise WindowRangeError(
                f"threshold outside window [{self.window.s1}, {self.window.s2}]"
            )
        if not self.improved:
            return _candidate_values(self.kappa, self.c, ts)
        # B̃' меняется только в точках сетки
        idx = np.searchsorted(self.grid_ts, ts, side="right") - 1
        return self.grid_values[idx]

    def value_at(self, t: float) -> int:
        return int(self.values_at(np.array([t]))[0])

    def candidate_jumps(self) -> np.ndarray:
        """Точки скачков B̃ внутри окна: t = jκ - c. Не больше ENVELOPE_MAX_JUMPS штук."""
        if math.isinf(self.kappa):
            return np.empty(0, dtype=float)

        s1, s2 = self.window.s1, self.window.s2
        j_lo = max(1, math.ceil((s1 + self.c) / self.kappa))
        j_hi = math.floor((s2 + self.c) / self.kappa)
        if j_hi < j_lo:
            return np.empty(0, dtype=float)

        count = j_hi - j_lo + 1
        if count > settings.ENVELOPE_MAX_JUMPS:
            log.warning(
                "[Envelope] candidate jumps truncated: total=%s cap=%s kappa=%s",
                count,
                settings.ENVELOPE_MAX_JUMPS,
                self.kappa,
            )
            j_hi = j_lo + settings.ENVELOPE_MAX_JUMPS - 1

        ts = np.arange(j_lo, j_hi + 1, dtype=float) * self.kappa - self.c
        return ts[(ts >= s1) & (ts <= s2)]


def _candidate_values(kappa: float, c: float, ts: np.ndarray) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    if math.isinf(kappa):
        return np.zeros(ts.shape, dtype=np.int64)
    return np.floor((ts + c) / kappa * (1.0 + _FLOOR_SLACK)).astype(np.int64)


def candidate_bound(kappa: float, c: float, t: float) -> int:
    """B^κ(t) = ⌊(t + c)/κ⌋, 0 при κ = ∞."""
    if math.isnan(kappa) or kappa <= 0:
        raise ParameterError(f"kappa must be > 0, got {kappa}")
    if c < 0 or t < 0:
        raise ParameterError(f"t and c must be >= 0, got t={t} c={c}")
    return int(_candidate_values(kappa, c, np.array([t]))[0])


def _kappa_max(p: PValueSet, cfg: CandidateFamilyConfig) -> Tuple[float, bool]:
    """
    κ_max = κ_0 ∧ min{κ_i : 1 - p_i ∈ 𝕋}:
      κ_i = (1 - p_i + c) / |{j: p_j >= p_i}|,  κ_0 = (s1 + c) / V̄'(s1),
    нулевой знаменатель - ∞. Возвращает (κ_max, degenerate).
    """
    s1, s2 = cfg.window.s1, cfg.window.s2
    tails = p.tails

    lo = int(np.searchsorted(tails, s1, side="left"))
    hi = int(np.searchsorted(tails, s2, side="right"))
    u = tails[lo:hi]

    candidates = []
    if u.size:
        # |{j: 1 - p_j <= u_i}|: индекс последнего элемента группы равных u плюс 1,
        # один обратный проход
        k = u.size
        ends = np.empty(k, dtype=bool)
        ends[-1] = True
        ends[:-1] = u[1:] != u[:-1]
        last = np.where(ends, np.arange(k), k)[::-1]
        last = np.minimum.accumulate(last)[::-1]
        counts = lo + last + 1
        candidates.append((u + cfg.c) / counts)

    v0 = count_upper_tail(p, s1)
    if v0 > 0:
        candidates.append(np.array([(s1 + cfg.c) / v0]))

    if not candidates:
        return KAPPA_INFINITE, False

    kappas = np.concatenate(candidates)
    positive = kappas > 0.0
    degenerate = not bool(positive.all())
    if not positive.any():
        return KAPPA_INFINITE, degenerate
    return float(kappas[positive].min()), degenerate


def kappa_max(p: PValueSet, cfg: CandidateFamilyConfig) -> float:
    """Наибольшее κ, при котором B^κ(t) >= V̄'(t) для всех t ∈ 𝕋."""
    return _kappa_max(p, cfg)[0]


def evaluation_grid(p: PValueSet, window: ThresholdWindow) -> np.ndarray:
    """{s1} ∪ различные p-значения из (s1, s2], по возрастанию."""
    lo = int(np.searchsorted(p.values, window.s1, side="right"))
    hi = int(np.searchsorted(p.values, window.s2, side="right"))
    inside = p.values[lo:hi]
    if inside.size > 1:
        keep = np.empty(inside.size, dtype=bool)
        keep[0] = True
        keep[1:] = inside[1:] != inside[:-1]
        inside = inside[keep]
    grid = np.empty(inside.size + 1, dtype=float)
    grid[0] = window.s1
    grid[1:] = inside
    return grid


def build_envelope(p: PValueSet, cfg: CandidateFamilyConfig) -> EnvelopeCurve:
    kappa, degenerate = _kappa_max(p, cfg)
    if degenerate:
        log.warning(
            "[Envelope] kappa=0 candidate discarded (p-values equal to 1 with c=0 at s1=0): m=%s kappa=%s",
            p.m,
            kappa,
        )

    grid = evaluation_grid(p, cfg.window)
    values = _candidate_values(kappa, cfg.c, grid)
    rejections = count_rejections(p, grid)

    for arr in (grid, values, rejections):
        arr.setflags(write=False)

    log.debug(
        "[Envelope] m=%s kappa=%s c=%s window=[%s,%s] grid=%s degenerate=%s",
        p.m,
        kappa,
        cfg.c,
        cfg.window.s1,
        cfg.window.s2,
        grid.size,
        degenerate,
    )

    return EnvelopeCurve(
        kappa=kappa,
        c=cfg.c,
        window=cfg.window,
        grid_ts=grid,
        grid_values=values,
        rejections=rejections,
        improved=False,
        degenerate=degenerate,
        m=p.m,
    )


def improve_envelope(p: PValueSet, env: EnvelopeCurve) -> EnvelopeCurve:
    """B̃' - один прямой проход с накопленным максимумом избытка [R - B̃]⁺."""
    if env.improved:
        raise ParameterError("envelope is already improved")
    if env.m != p.m:
        raise ParameterError(f"envelope was built for m={env.m}, got m={p.m}")

    R = env.rejections
    surplus = np.maximum(R - env.grid_values, 0)
    improved = R - np.maximum.accumulate(surplus)
    improved.setflags(write=False)

    return replace(env, grid_values=improved, improved=True)


def fdp_ratios(env: EnvelopeCurve) -> np.ndarray:
    """
    min(B/R, 1) в точках сетки. При R = 0: 0, если B = 0, иначе 1.
    """
    R = env.rejections
    B = env.grid_values
    out = np.where(B == 0, 0.0, 1.0)
    pos = R > 0
    out[pos] = np.minimum(B[pos] / R[pos], 1.0)
    return out


def fdp_envelope_at(p: PValueSet, env: EnvelopeCurve, t: float) -> float:
    """Одновременная граница FDP(t) <= min(B(t)/R(t), 1)."""
    if not env.window.contains(t):
        raise WindowRangeError(
            f"t={t} outside window [{env.window.s1}, {env.window.s2}]"
        )
    b = env.value_at(t)
    r = count_rejections(p, t)
    if r == 0:
        return 0.0 if b == 0 else 1.0
    return min(b / r, 1.0)


def envelope_table(
    p: PValueSet,
    env: EnvelopeCurve,
    env_prime: Optional[EnvelopeCurve] = None,
) -> pd.DataFrame:
    """
    Данные для графика огибающей: точки сетки и скачки B̃ на окне.

    Колонки: t, R, B_tilde, B_tilde_prime, fdp_bound, tdp_lower.
    fdp_bound считается по B̃', если он передан, иначе по B̃.
    """
    if env.improved:
        raise ParameterError("envelope_table expects the unimproved envelope first")
    if env_prime is None:
        env_prime = improve_envelope(p, env)

    ts = np.union1d(env.grid_ts, env.candidate_jumps())
    R = count_rejections(p, ts)
    b = env.values_at(ts)
    b_prime = env_prime.values_at(ts)

    fdp = np.where(b_prime == 0, 0.0, 1.0)
    pos = R > 0
    fdp[pos] = np.minimum(b_prime[pos] / R[pos], 1.0)
    tdp = np.where(pos, 1.0 - fdp, 0.0)

    return pd.DataFrame(
        {
            "t": ts,
            "R": R,
            "B_tilde": b,
            "B_tilde_prime": b_prime,
            "fdp_bound": fdp,
            "tdp_lower": tdp,
        }
    )
