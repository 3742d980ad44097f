"""
Оценки при фиксированном пороге (не одновременные):

  - storey_pi0            - π̂0' = |{p > λ}| / (m(1-λ))
  - median_unbiased_pi0   - π̄0' = (|{p > t}| + |{p >= 1-t}|) / m, медианно-несмещённая
  - fixed_threshold_report - V̄(t), верхняя граница FDP и нижняя граница TDP при пороге t

Связь параметров: t = 1 - λ. При t = λ = 0.5 обе оценки π0 совпадают.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .logger import get_logger
from .pvalues import PValueSet, count_rejections, count_upper_tail


log = get_logger()

METHOD_STOREY = "storey"
METHOD_MEDIAN_UNBIASED = "median_unbiased"
METHOD_CLOSED_TESTING = "closed_testing"


@dataclass(frozen=True)
class Pi0Estimate:
    """
    Оценка доли верных нулевых гипотез π0.

    raw:
        значение формулы без обрезки (может быть > 1)
    clamped:
        min(raw, 1)
    method:
        storey / median_unbiased / closed_testing
    tuning:
        λ для storey, t для остальных
    """

    raw: float
    clamped: float
    method: str
    tuning: float

    @classmethod
    def from_raw(cls, raw: float, method: str, tuning: float) -> "Pi0Estimate":
        return cls(raw=float(raw), clamped=min(float(raw), 1.0), method=method, tuning=float(tuning))


@dataclass(frozen=True)
class FixedThresholdReport:
    t: float
    R: int
    V_bar: int
    fdp_bound: float
    tdp_lower: float
    S_lower: int

    @property
    def fdp_ratio(self) -> float:
        """V̄/R без обрезки до 1 (0 при R = 0)."""
        return self.V_bar / self.R if self.R > 0 else 0.0


def _check_open_unit(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 < value < 1.0):
        raise ParameterError(f"{name} must lie in (0,1), got {value}")
    return value


def storey_pi0(p: PValueSet, lam: float) -> Pi0Estimate:
    """Оценка Шведера–Спьётволла–Стори. Строгое неравенство p > λ."""
    lam = _check_open_unit("lambda", lam)
    above = p.m - count_rejections(p, lam)
    raw = above / (p.m * (1.0 - lam))
    return Pi0Estimate.from_raw(raw, METHOD_STOREY, lam)


def median_unbiased_pi0(p: PValueSet, t: float) -> Pi0Estimate:
    """
    Медианно-несмещённая оценка π0: P(π̄0 >= π0) >= 1/2 при равномерных
    (или стохастически больших) нулевых p-значениях.
    """
    t = _check_open_unit("t", t)
    above = p.m - count_rejections(p, t)
    raw = (above + count_upper_tail(p, t)) / p.m
    return Pi0Estimate.from_raw(raw, METHOD_MEDIAN_UNBIASED, t)


def fixed_threshold_report(p: PValueSet, t: float) -> FixedThresholdReport:
    """
    Граница FDP при одном заранее выбранном пороге t.

    V̄(t) = |{p >= 1-t}| - медианно-несмещённая верхняя граница числа ложных
    отвержений V(t). FDP(t) <= V̄/R с вероятностью не меньше 1/2.
    """
    t = _check_open_unit("t", t)
    R = count_rejections(p, t)
    V_bar = count_upper_tail(p, t)

    if R > 0:
        fdp_bound = min(V_bar / R, 1.0)
        S_lower = R - min(V_bar, R)
        tdp_lower = S_lower / R
    else:
        fdp_bound = 0.0
        S_lower = 0
        tdp_lower = 0.0

    log.info(
        "[FixedThreshold] m=%s t=%s R=%s V_bar=%s fdp_bound=%s",
        p.m,
        t,
        R,
        V_bar,
        fdp_bound,
    )

    return FixedThresholdReport(
        t=t,
        R=R,
        V_bar=V_bar,
        fdp_bound=fdp_bound,
        tdp_lower=tdp_lower,
        S_lower=S_lower,
    )
