"""
Готовые сценарии: строки таблиц ошибки и мощности и разбор имён пресетов для CLI.

Имена пресетов: in, ho:<rho>, bl:<rho>, ne[:<rho_between>].
BL - 5 независимых блоков, NE - 50 блоков по 20 (ρw = 0.5, ρb = -0.01), правосторонние p.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from ..errors import ParameterError
from .models import (
    RIGHT_SIDED,
    STRUCTURE_BL,
    STRUCTURE_HO,
    STRUCTURE_IN,
    STRUCTURE_NE,
    TWO_SIDED,
    Scenario,
)


BL_BLOCKS = 5
NE_BLOCKS = 50
NE_RHO_WITHIN = 0.5
NE_RHO_BETWEEN = -0.01

TABLE_M = 1000
TABLE_WINDOW = (0.0, 0.1)
TABLE_C = 0.0005
TABLE_GAMMAS = (0.01, 0.05, 0.1)
TABLE1_DELTA = 3.0
TABLE2_PI0 = 0.9


@dataclass(frozen=True)
class Table1Row:
    pi0: float
    preset: str
    expected_error: float


@dataclass(frozen=True)
class Table2Row:
    preset: str
    delta: float
    expected_power: Tuple[float, float, float]
    expected_bh: float


TABLE1_ROWS: Tuple[Table1Row, ...] = (
    Table1Row(1.0, "in", 0.499),
    Table1Row(1.0, "ho:0.2", 0.334),
    Table1Row(1.0, "ho:0.5", 0.266),
    Table1Row(1.0, "ho:0.9", 0.330),
    Table1Row(1.0, "bl:0.5", 0.335),
    Table1Row(1.0, "bl:0.9", 0.351),
    Table1Row(1.0, "ne", 0.500),
    Table1Row(0.95, "in", 0.498),
    Table1Row(0.95, "ho:0.2", 0.336),
    Table1Row(0.95, "ho:0.5", 0.266),
    Table1Row(0.95, "ho:0.9", 0.327),
    Table1Row(0.95, "bl:0.5", 0.338),
    Table1Row(0.95, "bl:0.9", 0.343),
    Table1Row(0.95, "ne", 0.501),
)

TABLE2_ROWS: Tuple[Table2Row, ...] = (
    Table2Row("in", 2.0, (0.043, 0.045, 0.084), 0.059),
    Table2Row("in", 3.0, (0.224, 0.431, 0.557), 0.495),
    Table2Row("in", 4.0, (0.538, 0.848, 0.901), 0.878),
    Table2Row("ho:0.5", 2.0, (0.066, 0.102, 0.139), 0.099),
    Table2Row("ho:0.5", 3.0, (0.216, 0.393, 0.505), 0.466),
    Table2Row("ho:0.5", 4.0, (0.513, 0.854, 0.916), 0.860),
    Table2Row("bl:0.8", 2.0, (0.057, 0.123, 0.175), 0.127),
    Table2Row("bl:0.8", 3.0, (0.235, 0.436, 0.533), 0.476),
    Table2Row("bl:0.8", 4.0, (0.553, 0.818, 0.877), 0.839),
    Table2Row("ne", 2.0, (0.068, 0.100, 0.171), 0.120),
    Table2Row("ne", 3.0, (0.281, 0.539, 0.666), 0.600),
    Table2Row("ne", 4.0, (0.593, 0.895, 0.940), 0.919),
)


def _parse_rho(name: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ParameterError(f"bad correlation in scenario preset {name!r}") from None


def preset_fields(name: str) -> Dict[str, Any]:
    """Поля Scenario, задающие структуру зависимости пресета."""
    text = name.strip().lower()
    kind, _, arg = text.partition(":")

    if kind == "in":
        if arg:
            raise ParameterError(f"preset 'in' takes no parameter, got {name!r}")
        return {"structure": STRUCTURE_IN, "sidedness": TWO_SIDED}

    if kind in ("ho", "bl"):
        if not arg:
            raise ParameterError(f"preset {kind!r} needs a correlation, e.g. {kind}:0.5")
        fields: Dict[str, Any] = {
            "structure": STRUCTURE_HO if kind == "ho" else STRUCTURE_BL,
            "rho": _parse_rho(name, arg),
            "sidedness": TWO_SIDED,
        }
        if kind == "bl":
            fields["n_blocks"] = BL_BLOCKS
        return fields

    if kind == "ne":
        return {
            "structure": STRUCTURE_NE,
            "n_blocks": NE_BLOCKS,
            "rho_within": NE_RHO_WITHIN,
            "rho_between": _parse_rho(name, arg) if arg else NE_RHO_BETWEEN,
            "sidedness": RIGHT_SIDED,
        }

    raise ParameterError(f"unknown scenario preset {name!r}, expected in | ho:<rho> | bl:<rho> | ne")


def make_scenario(preset: str, **overrides: Any) -> Scenario:
    fields = preset_fields(preset)
    fields.update(overrides)
    return Scenario(**fields)


def _table_defaults(reps: int, seed: int) -> Dict[str, Any]:
    return {
        "m": TABLE_M,
        "reps": reps,
        "seed": seed,
        "window_start": TABLE_WINDOW[0],
        "window_end": TABLE_WINDOW[1],
        "c": TABLE_C,
        "gamma_grid": TABLE_GAMMAS,
    }


def table1_scenarios(reps: int, seed: int) -> List[Tuple[Table1Row, Scenario]]:
    """Сценарии таблицы ошибки. Для pi0 < 1 сигнал Δ = 3; сид строки = seed + номер строки."""
    out = []
    for k, row in enumerate(TABLE1_ROWS):
        delta = TABLE1_DELTA if row.pi0 < 1.0 else 0.0
        scn = make_scenario(row.preset, pi0=row.pi0, delta=delta, **_table_defaults(reps, seed + k))
        out.append((row, scn))
    return out


def table2_scenarios(reps: int, seed: int) -> List[Tuple[Table2Row, Scenario]]:
    out = []
    for k, row in enumerate(TABLE2_ROWS):
        scn = make_scenario(
            row.preset, pi0=TABLE2_PI0, delta=row.delta, **_table_defaults(reps, seed + k)
        )
        out.append((row, scn))
    return out
