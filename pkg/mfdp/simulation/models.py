from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..pvalues import ThresholdWindow


STRUCTURE_IN = "IN"
STRUCTURE_HO = "HO"
STRUCTURE_BL = "BL"
STRUCTURE_NE = "NE"
STRUCTURES = (STRUCTURE_IN, STRUCTURE_HO, STRUCTURE_BL, STRUCTURE_NE)

TWO_SIDED = "two_sided"
RIGHT_SIDED = "right_sided"


class Scenario(BaseModel):
    """
    Конфигурация одного сценария Monte Carlo.

    structure:
        IN - независимые Z
        HO - одна общая корреляция rho
        BL - n_blocks независимых блоков с корреляцией rho внутри
        NE - n_blocks блоков: rho_within внутри, rho_between между блоками
    delta:
        сдвиг, добавляемый к первым round((1 - pi0)·m) статистикам
    c:
        None -> 1/(2m)
    improved:
        считать по улучшенной огибающей B̃' вместо B̃
    dense:
        генерировать Z через полную матрицу ковариаций (эталонный сэмплер, O(m²))
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(1000, ge=1)
    pi0: float = Field(1.0, ge=0.0, le=1.0)
    delta: float = 0.0
    structure: str = STRUCTURE_IN
    rho: float = 0.0
    n_blocks: int = Field(1, ge=1)
    rho_within: float = 0.0
    rho_between: float = 0.0
    sidedness: str = TWO_SIDED
    reps: int = Field(10000, ge=100)
    seed: int = Field(0, ge=0)
    window_start: float = 0.0
    window_end: float = 0.1
    c: Optional[float] = Field(None, ge=0.0)
    gamma_grid: Tuple[float, ...] = (0.01, 0.05, 0.1)
    bh_alpha: float = Field(0.05, gt=0.0, lt=1.0)
    improved: bool = False
    dense: bool = False

    @field_validator("structure")
    @classmethod
    def _structure(cls, v: str) -> str:
        v = v.strip().upper()
        if v not in STRUCTURES:
            raise ValueError(f"structure must be one of {', '.join(STRUCTURES)}, got {v!r}")
        return v

    @field_validator("sidedness")
    @classmethod
    def _sidedness(cls, v: str) -> str:
        v = v.strip().lower().replace("-", "_")
        if v not in (TWO_SIDED, RIGHT_SIDED):
            raise ValueError(f"sidedness must be {TWO_SIDED} or {RIGHT_SIDED}, got {v!r}")
        return v

    @field_validator("gamma_grid")
    @classmethod
    def _gammas(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not v:
            raise ValueError("gamma_grid must not be empty")
        for g in v:
            if not (0.0 <= g <= 1.0):
                raise ValueError(f"gamma must lie in [0,1], got {g}")
        return tuple(sorted(set(v)))

    @model_validator(mode="after")
    def _consistency(self) -> "Scenario":
        # окно проверяется конструктором ThresholdWindow
        ThresholdWindow(self.window_start, self.window_end)

        # ленивый импорт: covariance импортирует модели
        from .covariance import check_structure

        check_structure(self)
        return self

    @property
    def window(self) -> ThresholdWindow:
        return ThresholdWindow(self.window_start, self.window_end)

    @property
    def c_value(self) -> float:
        return 1.0 / (2 * self.m) if self.c is None else float(self.c)

    @property
    def n_false(self) -> int:
        return int(round((1.0 - self.pi0) * self.m))

    @property
    def label(self) -> str:
        if self.structure == STRUCTURE_IN:
            return "IN"
        if self.structure == STRUCTURE_NE:
            return f"NE:{self.rho_between:g}"
        return f"{self.structure}:{self.rho:g}"


@dataclass(frozen=True, eq=False)
class TruthMask:
    """is_null[i] - гипотеза i (исходный порядок) верна."""

    is_null: np.ndarray

    @property
    def n_null(self) -> int:
        return int(np.count_nonzero(self.is_null))

    @property
    def n_false(self) -> int:
        return int(self.is_null.size - self.n_null)


@dataclass(frozen=True)
class McResult:
    """
    Итог Monte Carlo.

    error_rate / error_se:
        частота события {∃t ∈ 𝕋: V(t) > B(t)} и её стандартная ошибка sqrt(r(1-r)/reps)
    power_by_gamma / power_se_by_gamma:
        средняя доля отвергнутых ложных гипотез для каждого γ и стандартная ошибка среднего
    bh_power:
        то же для Benjamini–Hochberg, ключ - α
    """

    reps_used: int
    error_rate: Optional[float] = None
    error_se: Optional[float] = None
    power_by_gamma: Dict[float, float] = field(default_factory=dict)
    power_se_by_gamma: Dict[float, float] = field(default_factory=dict)
    bh_power: Dict[float, float] = field(default_factory=dict)
    bh_power_se: Dict[float, float] = field(default_factory=dict)


def binomial_se(rate: float, reps: int) -> float:
    return math.sqrt(rate * (1.0 - rate) / reps)
