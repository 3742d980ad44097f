"""
Тесты контейнера p-значений, счётчиков R(t) и V̄'(t) и чтения CSV.

Запуск: PYTHONPATH=. pytest tests/test_pvalues.py -v
"""
import numpy as np
import pytest

from mfdp.errors import CsvFormatError, PValueValidationError, WindowRangeError
from mfdp.pvalues import (
    ThresholdWindow,
    count_rejections,
    count_upper_tail,
    ingest,
    read_pvalue_csv,
)


def test_ingest_sorts_and_keeps_permutation():
    p = ingest([0.9, 0.1])
    assert p.values.tolist() == [0.1, 0.9]
    assert p.perm.tolist() == [1, 0]
    assert p.original.tolist() == [0.9, 0.1]


def test_ingest_singleton():
    p = ingest([0.5])
    assert p.m == 1
    assert p.values.tolist() == [0.5]


def test_ingest_rejects_zero_with_index():
    with pytest.raises(PValueValidationError, match=r"p-value at index 1 outside \(0,1\]"):
        ingest([0.0, 0.2])


@pytest.mark.parametrize(
    "raw,message",
    [
        ([0.2, float("nan")], "index 2 is not finite"),
        ([0.2, 0.3, float("inf")], "index 3 is not finite"),
        ([0.2, 1.5], r"index 2 outside \(0,1\]"),
        ([0.2, -0.1], r"index 2 outside \(0,1\]"),
        ([], "no p-values given"),
    ],
)
def test_ingest_validation_errors(raw, message):
    with pytest.raises(PValueValidationError, match=message):
        ingest(raw)


def test_ingest_accepts_one_and_stable_ties():
    p = ingest([1.0, 0.3, 0.3, 0.2])
    assert p.values.tolist() == [0.2, 0.3, 0.3, 1.0]
    # равные p сохраняют исходный порядок
    assert p.perm.tolist() == [3, 1, 2, 0]


def test_to_original_order_inverts_sorting(mixed_pvalues):
    p = ingest(mixed_pvalues)
    assert np.array_equal(p.to_original_order(p.values), mixed_pvalues)


def test_count_rejections_examples():
    assert count_rejections(ingest([0.1, 0.3, 0.85, 0.95]), 0.2) == 1
    assert count_rejections(ingest([0.2, 0.2, 0.9]), 0.2) == 2
    assert count_rejections(ingest([0.4, 1.0, 0.7]), 1.0) == 3


def test_count_upper_tail_examples():
    assert count_upper_tail(ingest([0.1, 0.85, 0.95]), 0.2) == 2
    assert count_upper_tail(ingest([0.5]), 0.5) == 1
    # при t = 0 считаются только p, равные 1
    assert count_upper_tail(ingest([0.3, 1.0, 1.0]), 0.0) == 2
    assert count_upper_tail(ingest([0.3, 0.99]), 0.0) == 0


def test_counters_match_linear_scan(mixed_pvalues):
    """Бинарный поиск против прямого подсчёта на порогах, совпадающих с p-значениями."""
    p = ingest(mixed_pvalues)
    ts = np.concatenate([[0.0, 0.5, 1.0], mixed_pvalues[:50], 1.0 - mixed_pvalues[:50]])
    for t in ts:
        assert count_rejections(p, t) == int(np.sum(mixed_pvalues <= t))
        assert count_upper_tail(p, t) == int(np.sum((1.0 - mixed_pvalues) <= t))


def test_counters_accept_arrays():
    p = ingest([0.1, 0.3, 0.85, 0.95])
    assert count_rejections(p, np.array([0.0, 0.2, 0.9])).tolist() == [0, 1, 3]
    assert count_upper_tail(p, np.array([0.0, 0.2, 0.9])).tolist() == [0, 2, 4]


def test_threshold_window_validation():
    w = ThresholdWindow(0.0, 0.1)
    assert w.contains(0.1) and not w.contains(0.2)
    assert w.below_half
    assert not ThresholdWindow(0.2, 0.5).below_half
    for s1, s2 in [(0.2, 0.1), (0.1, 0.1), (-0.1, 0.2), (0.0, 1.5), (0.0, float("nan"))]:
        with pytest.raises(WindowRangeError):
            ThresholdWindow(s1, s2)


# ===== CSV =====

def test_read_csv_with_header(write_lines):
    path = write_lines("p.csv", ["pvalue", "0.2", "0.1", "0.7"])
    p = read_pvalue_csv(path)
    assert p.original.tolist() == [0.2, 0.1, 0.7]


def test_read_csv_without_header_skips_blank_lines(write_lines):
    path = write_lines("p.csv", ["0.2", "", "0.1"])
    p = read_pvalue_csv(path)
    assert p.original.tolist() == [0.2, 0.1]


def test_read_tsv_by_column_name(write_lines):
    path = write_lines("p.tsv", ["gene\tp", "a\t0.3", "b\t0.04"])
    p = read_pvalue_csv(path, column="p")
    assert p.original.tolist() == [0.3, 0.04]


def test_read_csv_by_column_index(write_lines):
    path = write_lines("p.csv", ["id,p", "1,0.3", "2,0.04"])
    assert read_pvalue_csv(path, column=1).original.tolist() == [0.3, 0.04]
    assert read_pvalue_csv(path, column="1").original.tolist() == [0.3, 0.04]


def test_read_csv_errors_carry_line_number(write_lines):
    bad_text = write_lines("bad1.csv", ["p", "0.1", "abc"])
    with pytest.raises(CsvFormatError, match="^line 3:"):
        read_pvalue_csv(bad_text)

    bad_range = write_lines("bad2.csv", ["0.1", "1.5"])
    with pytest.raises(CsvFormatError, match="^line 2:.*outside"):
        read_pvalue_csv(bad_range)

    no_column = write_lines("bad3.csv", ["id,p", "1,0.3"])
    with pytest.raises(CsvFormatError, match="not found"):
        read_pvalue_csv(no_column, column="q")


def test_read_csv_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_pvalue_csv(str(tmp_path / "missing.csv"))


def test_read_csv_ragged_row_reports_file_line(write_lines):
    """Лишнее поле в строке: pandas падает при разборе, номер строки берётся из его сообщения."""
    ragged = write_lines("ragged.csv", ["0.1", "0.2", "0.3,0.4"])
    with pytest.raises(CsvFormatError, match=r"^line 3: "):
        read_pvalue_csv(ragged)


@pytest.mark.slow
def test_counters_match_linear_scan_on_random_instances(rng):
    """1000 случайных наборов с повторами, пороги: случайные, сами p, 1 - p и края."""
    for _ in range(1000):
        m = int(rng.integers(1, 500))
        values = np.round(rng.uniform(size=m), int(rng.integers(2, 6)))
        values = np.clip(values, 1e-6, 1.0)
        p = ingest(values)
        ts = np.concatenate([[0.0, 1.0], rng.uniform(size=20), values[:10], 1.0 - values[:10]])
        assert count_rejections(p, ts).tolist() == [int(np.sum(values <= t)) for t in ts]
        assert count_upper_tail(p, ts).tolist() == [int(np.sum((1.0 - values) <= t)) for t in ts]
