"""Pytest fixtures и env для тестов (логи во временную директорию)."""
import os
import tempfile

import numpy as np
import pytest

# logger читает LOG_DIR при первом импорте mfdp, поэтому задаём его до импорта тестовых модулей
os.environ.setdefault("LOG_DIR", tempfile.mkdtemp(prefix="mfdp_test_logs_"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def mixed_pvalues(rng):
    """200 p-значений: 40 сдвинутых к нулю, остальные равномерные, с повторами после округления."""
    signal = rng.uniform(size=40) ** 5
    null = rng.uniform(size=160)
    values = np.concatenate([signal, null])
    values = np.round(values, 3)
    values[values <= 0.0] = 0.001
    rng.shuffle(values)
    return values


@pytest.fixture
def write_lines(tmp_path):
    """Пишет строки в файл во временной директории и возвращает путь."""

    def _write(name, lines):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    return _write
