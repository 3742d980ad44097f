"""
Форматирование выходных файлов: CSV с одной строкой заголовка и JSON-зеркало.
Числа с плавающей точкой - OUTPUT_FLOAT_DIGITS значащих цифр (по умолчанию 17,
обратное чтение даёт тот же double), бесконечность - строка "Inf".
"""
import json
import math
import os
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from .config import settings

INF_TEXT = "Inf"


def fmt_float(value: float) -> str:
    value = float(value)
    if math.isinf(value):
        return INF_TEXT if value > 0 else "-" + INF_TEXT
    if math.isnan(value):
        return "NaN"
    return format(value, f".{settings.OUTPUT_FLOAT_DIGITS}g")


def fmt_value(value: Any) -> str:
    """Одна ячейка CSV: bool/int как есть, float через fmt_float."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return fmt_float(value) if not math.isfinite(value) else value
    return value


def frame_records(df: pd.DataFrame) -> List[Dict[str, Any]]:
    """Строки таблицы для JSON: inf заменяется на "Inf", numpy-типы - на python."""
    columns = list(df.columns)
    return [
        {col: _json_value(v) for col, v in zip(columns, row)}
        for row in df.itertuples(index=False, name=None)
    ]


def render_csv(df: pd.DataFrame) -> str:
    return df.map(fmt_value).to_csv(index=False, lineterminator="\n")


def write_csv(df: pd.DataFrame, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(render_csv(df))
    return path


def write_json(document: Dict[str, Any], path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(document, ensure_ascii=False, indent=2))
        f.write("\n")
    return path
