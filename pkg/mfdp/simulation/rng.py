"""
Счётчиковый генератор (Philox) на каждый повтор.

Поток повтора rep определяется только парой (seed, rep): ключ Philox = seed,
старшее слово счётчика = rep. Поэтому результат не зависит ни от числа потоков,
ни от порядка выполнения чанков.
"""
from __future__ import annotations

import numpy as np

from ..errors import ParameterError


_MAX_KEY = 2**128


def replicate_rng(seed: int, rep: int) -> np.random.Generator:
    if not (0 <= seed < _MAX_KEY):
        raise ParameterError(f"seed must lie in [0, 2**128), got {seed}")
    if not (0 <= rep < 2**64):
        raise ParameterError(f"replicate index out of range: {rep}")
    bitgen = np.random.Philox(key=seed, counter=[0, 0, 0, rep])
    return np.random.Generator(bitgen)
