"""
Контейнер p-значений, окно порогов 𝕋 и два счётчика, на которых построено всё остальное:

    R(t)  = |{i: p_i <= t}|        - число отвергнутых гипотез при пороге t
    V̄'(t) = |{i: p_i >= 1 - t}|    - точечная 50%-верхняя граница для V(t)

После сортировки оба счётчика - бинарный поиск, O(log m).
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from .errors import CsvFormatError, PValueValidationError, WindowRangeError


@dataclass(frozen=True)
class ThresholdWindow:
    """
    Окно порогов 𝕋=[s1, s2], 0 <= s1 < s2 <= 1.

    Для проверки эквивалентности с closed testing нужно s2 < 0.5 -
    это не требуется глобально, а только проверяется там, где нужно (below_half).
    """

    s1: float = 0.0
    s2: float = 0.1

    def __post_init__(self) -> None:
        s1, s2 = float(self.s1), float(self.s2)
        if not (math.isfinite(s1) and math.isfinite(s2)):
            raise WindowRangeError(f"window bounds must be finite, got [{s1}, {s2}]")
        if not (0.0 <= s1 < s2 <= 1.0):
            raise WindowRangeError(f"window must satisfy 0 <= s1 < s2 <= 1, got [{s1}, {s2}]")
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "s2", s2)

    def contains(self, t: float) -> bool:
        return self.s1 <= t <= self.s2

    @property
    def below_half(self) -> bool:
        return self.s2 < 0.5


@dataclass(frozen=True, eq=False)
class PValueSet:
    """
    Отсортированные p-значения и индекс исходного порядка.

    values:
        p-значения по возрастанию (read-only массив)
    perm:
        perm[k] - исходный (0-based) индекс k-го по величине p-значения
    """

    values: np.ndarray
    perm: np.ndarray

    @property
    def m(self) -> int:
        return int(self.values.shape[0])

    @cached_property
    def tails(self) -> np.ndarray:
        """1 - p по возрастанию. V̄'(t) считается как |{i: 1 - p_i <= t}|."""
        arr = 1.0 - self.values[::-1]
        arr.setflags(write=False)
        return arr

    @cached_property
    def original(self) -> np.ndarray:
        """p-значения в исходном порядке ввода."""
        out = np.empty_like(self.values)
        out[self.perm] = self.values
        out.setflags(write=False)
        return out

    def to_original_order(self, sorted_values: np.ndarray) -> np.ndarray:
        """Переставляет массив, выровненный по отсортированным p, обратно в порядок ввода."""
        out = np.empty_like(sorted_values)
        out[self.perm] = sorted_values
        return out


def ingest(raw: Union[Sequence[float], np.ndarray]) -> PValueSet:
    """
    Проверка и сортировка входного вектора p-значений.
    Ошибка называет первый (1-based) индекс с недопустимым значением.
    Сортировка стабильная - perm детерминирован при совпадающих p.
    """
    arr = np.array(raw, dtype=float).ravel()
    if arr.size == 0:
        raise PValueValidationError("no p-values given")

    finite = np.isfinite(arr)
    if not finite.all():
        idx = int(np.flatnonzero(~finite)[0])
        raise PValueValidationError(f"p-value at index {idx + 1} is not finite")

    outside = (arr <= 0.0) | (arr > 1.0)
    if outside.any():
        idx = int(np.flatnonzero(outside)[0])
        raise PValueValidationError(f"p-value at index {idx + 1} outside (0,1]")

    if arr.size == 1 or bool(np.all(arr[1:] >= arr[:-1])):
        # уже отсортировано - без argsort
        perm = np.arange(arr.size)
        values = arr
    else:
        perm = np.argsort(arr, kind="stable")
        values = arr[perm]

    values.setflags(write=False)
    perm.setflags(write=False)
    return PValueSet(values=values, perm=perm)


def count_rejections(p: PValueSet, t):
    """R(t) = |{i: p_i <= t}|. Принимает скаляр или массив порогов."""
    res = np.searchsorted(p.values, t, side="right")
    if np.ndim(res) == 0:
        return int(res)
    return res


def count_upper_tail(p: PValueSet, t):
    """V̄'(t) = |{i: p_i >= 1 - t}|. Принимает скаляр или массив порогов."""
    res = np.searchsorted(p.tails, t, side="right")
    if np.ndim(res) == 0:
        return int(res)
    return res


# ===== CSV / TSV =====

def _detect_separator(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                return "\t" if "\t" in line else ","
    return ","


_PARSER_LINE = re.compile(r"\bline (\d+)")


def _parser_error_text(err: Exception) -> str:
    # pandas пишет номер строки файла внутри текста: "Expected 1 fields in line 3, saw 2"
    text = " ".join(str(err).split())
    found = _PARSER_LINE.search(text)
    if found:
        return f"line {found.group(1)}: {text}"
    return text


def _cell_text(cell) -> str:
    # пустая строка файла приходит из pandas как NaN даже при keep_default_na=False
    if cell is None or (isinstance(cell, float) and math.isnan(cell)):
        return ""
    return str(cell).strip()


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except (TypeError, ValueError):
        return False
    return True


def read_pvalue_csv(path: str, column: Optional[Union[str, int]] = None) -> PValueSet:
    """
    Читает p-значения из одной колонки CSV/TSV.

    Заголовок определяется автоматически: если выбранная ячейка первой непустой строки
    не число - это заголовок. column - имя колонки (нужен заголовок) или 0-based индекс;
    по умолчанию первая колонка. Пустые строки пропускаются, ошибки содержат номер строки файла.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"input file not found: {path}")

    sep = _detect_separator(path)
    try:
        df = pd.read_csv(
            path,
            sep=sep,
            header=None,
            dtype=str,
            skip_blank_lines=False,
            keep_default_na=False,
        )
    except pd.errors.EmptyDataError as e:
        raise CsvFormatError("line 1: file is empty") from e
    except pd.errors.ParserError as e:
        raise CsvFormatError(_parser_error_text(e)) from e

    # строка df с номером i - это строка файла i + 1
    rows = []
    for i, row in enumerate(df.itertuples(index=False, name=None)):
        cells = [_cell_text(c) for c in row]
        if any(cells):
            rows.append((i + 1, cells))
    if not rows:
        raise CsvFormatError("line 1: no data rows")

    first_line, first_cells = rows[0]
    if isinstance(column, str) and column.isdigit():
        column = int(column)

    has_header = isinstance(column, str) or not _is_number(
        first_cells[column if isinstance(column, int) and column < len(first_cells) else 0]
    )

    if isinstance(column, str):
        if column not in first_cells:
            raise CsvFormatError(f"line {first_line}: column {column!r} not found in header")
        col_idx = first_cells.index(column)
    else:
        col_idx = 0 if column is None else column
        if col_idx < 0 or col_idx >= len(first_cells):
            raise CsvFormatError(
                f"line {first_line}: column index {col_idx} out of range ({len(first_cells)} columns)"
            )

    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise CsvFormatError(f"line {first_line}: header without data rows")

    values = np.empty(len(data_rows), dtype=float)
    for k, (lineno, cells) in enumerate(data_rows):
        cell = cells[col_idx] if col_idx < len(cells) else ""
        if not _is_number(cell):
            raise CsvFormatError(f"line {lineno}: cannot parse {cell!r} as a p-value")
        v = float(cell)
        if not math.isfinite(v) or v <= 0.0 or v > 1.0:
            raise CsvFormatError(f"line {lineno}: p-value {cell} outside (0,1]")
        values[k] = v

    return ingest(values)
