"""
Closed testing с ψ-взвешенным локальным тестом.

Локальный тест пересечения H_I отвергает, если W⁻_I > W⁺_I, где
    W⁻_I = Σ ψ(|1/2 - p_i|) по {i ∈ I: p_i <= t},
    W⁺_I = Σ ψ(|p_i - 1/2|) по {i ∈ I: p_i >= 1 - t}.
При ψ ≡ 1 получаются оценки V̄ и π̄0 из estimators, при ψ(x) = x и t = 1/2 -
тест «среднее p-значений в I меньше 1/2».

brute_force_closed_bound - экспоненциальный перебор подмножеств, нужен только
как оракул: на окне внутри [0, 1/2) он совпадает с B̃'(t) при I = R(t).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from .config import settings
from .envelope import CandidateFamilyConfig, EnvelopeCurve, build_envelope, improve_envelope
from .errors import CapacityError, ParameterError, WindowRangeError
from .estimators import METHOD_CLOSED_TESTING, Pi0Estimate
from .logger import get_closed_testing_logger
from .pvalues import PValueSet, ThresholdWindow, count_rejections, ingest


log = get_closed_testing_logger()

PSI_CONSTANT_ONE = "constant_one"
PSI_LINEAR = "linear"
PSI_QUADRATIC = "quadratic"
PSI_CUSTOM = "custom"

# Сетка проверки монотонности пользовательской ψ на [0, 1/2]
_PSI_CHECK_GRID = np.linspace(0.0, 0.5, 1001)


@dataclass(frozen=True)
class PsiWeight:
    """Неубывающая на [0, 1/2] весовая функция ψ, вычисляется векторно."""

    kind: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.asarray(self.func(x), dtype=float) * np.ones_like(x)


def _one(x: np.ndarray) -> np.ndarray:
    return np.ones_like(x)


def _linear(x: np.ndarray) -> np.ndarray:
    return x


def _quadratic(x: np.ndarray) -> np.ndarray:
    return x * x


_PRESETS = {
    PSI_CONSTANT_ONE: _one,
    PSI_LINEAR: _linear,
    PSI_QUADRATIC: _quadratic,
}

# Короткие имена для CLI
PSI_ALIASES = {
    "one": PSI_CONSTANT_ONE,
    "constant": PSI_CONSTANT_ONE,
    "constant_one": PSI_CONSTANT_ONE,
    "linear": PSI_LINEAR,
    "x": PSI_LINEAR,
    "quadratic": PSI_QUADRATIC,
    "x2": PSI_QUADRATIC,
}


def psi_preset(name: str) -> PsiWeight:
    kind = PSI_ALIASES.get(name.strip().lower())
    if kind is None:
        raise ParameterError(
            f"unknown psi preset {name!r}, expected one of: {', '.join(sorted(PSI_ALIASES))}"
        )
    return PsiWeight(kind=kind, func=_PRESETS[kind])


def custom_psi(func: Callable[[np.ndarray], np.ndarray]) -> PsiWeight:
    """Пользовательская ψ; монотонность проверяется на сетке из 1001 точки."""
    psi = PsiWeight(kind=PSI_CUSTOM, func=func)
    sampled = psi.eval(_PSI_CHECK_GRID)
    if not np.all(np.isfinite(sampled)):
        raise ParameterError("custom psi returned non-finite values on [0, 1/2]")
    if np.any(np.diff(sampled) < 0):
        raise ParameterError("custom psi must be non-decreasing on [0, 1/2]")
    return psi


@dataclass(frozen=True)
class LocalTestStats:
    w_minus: float
    w_plus: float
    reject: bool


@dataclass(frozen=True)
class EquivalenceReport:
    """Итог проверки B̃'(t) == B̄(R(t)) на случайных примерах."""

    instances: int
    points_checked: int
    mismatches: int
    details: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def _check_t(t: float, upper: float = 1.0, inclusive_upper: bool = False) -> float:
    t = float(t)
    ok_upper = t <= upper if inclusive_upper else t < upper
    if not (0.0 < t and ok_upper):
        bracket = "]" if inclusive_upper else ")"
        raise ParameterError(f"t must lie in (0,{upper}{bracket}, got {t}")
    return t


def _index_array(p: PValueSet, I: Iterable[int]) -> np.ndarray:
    idx = np.unique(np.asarray(list(I), dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= p.m):
        raise ParameterError(f"index set must be within 0..{p.m - 1}")
    return idx


def _weights(psi: PsiWeight, values: np.ndarray) -> np.ndarray:
    # ψ берётся от расстояния до 1/2, аргумент всегда в [0, 1/2]
    w = psi.eval(np.abs(0.5 - values))
    if not np.all(np.isfinite(w)):
        raise ParameterError("psi returned non-finite weights")
    return w


def _w_minus_terms(values: np.ndarray, t: float, psi: PsiWeight) -> np.ndarray:
    return np.where(values <= t, _weights(psi, values), 0.0)


def _w_plus(values: np.ndarray, t: float, psi: PsiWeight) -> float:
    # p >= 1 - t считается как 1 - p <= t, тем же способом, что и V̄'
    upper = values[(1.0 - values) <= t]
    return float(_weights(psi, upper).sum()) if upper.size else 0.0


def local_test(p: PValueSet, I: Iterable[int], t: float, psi: PsiWeight) -> LocalTestStats:
    """
    Локальный тест δ(I) = 1(W⁻_I > W⁺_I). I - исходные 0-based индексы гипотез.
    """
    t = _check_t(t)
    idx = _index_array(p, I)
    if idx.size == 0:
        return LocalTestStats(w_minus=0.0, w_plus=0.0, reject=False)

    values = p.original[idx]
    w_minus = float(_w_minus_terms(values, t, psi).sum())
    w_plus = _w_plus(values, t, psi)
    return LocalTestStats(w_minus=w_minus, w_plus=w_plus, reject=w_minus > w_plus)


def _largest_a(terms_desc: np.ndarray, w_plus: float) -> int:
    """max{a >= 1: Σ первых a слагаемых <= W⁺}, 0 если таких a нет."""
    if terms_desc.size == 0:
        return 0
    ok = np.flatnonzero(np.cumsum(terms_desc) <= w_plus)
    return int(ok[-1]) + 1 if ok.size else 0


def generalized_N_bound(p: PValueSet, t: float, psi: PsiWeight) -> int:
    """
    Медианно-несмещённая верхняя граница числа верных гипотез N:
    max{a: W⁻ по a наибольшим p-значениям <= W⁺ по всем гипотезам}.
    """
    t = _check_t(t)
    desc = p.values[::-1]
    return _largest_a(_w_minus_terms(desc, t, psi), _w_plus(p.values, t, psi))


def generalized_V_bound(p: PValueSet, t: float, psi: PsiWeight) -> int:
    """
    ψ-обобщение V̄(t): a пробегает 1..R(t), Q_a - a наибольших среди отвергнутых p-значений.
    """
    t = _check_t(t, upper=0.5, inclusive_upper=True)
    R = count_rejections(p, t)
    rejected_desc = p.values[:R][::-1]
    terms = _weights(psi, rejected_desc)
    return _largest_a(terms, _w_plus(p.values, t, psi))


def closed_testing_pi0(p: PValueSet, t: float, psi: PsiWeight) -> Pi0Estimate:
    """π0 по ψ-взвешенному closed testing: generalized_N_bound / m."""
    n_bound = generalized_N_bound(p, t, psi)
    return Pi0Estimate.from_raw(n_bound / p.m, METHOD_CLOSED_TESTING, t)


def brute_force_closed_bound(
    p: PValueSet,
    I: Iterable[int],
    env_prime: EnvelopeCurve,
    window: ThresholdWindow,
) -> int:
    """
    B̄(I) = max{|A|: A ⊆ I, R_A(t) <= B̃'(t) для всех t ∈ 𝕋}, пустой максимум - 0.

    Подмножества перебираются в порядке кода Грея: соседние отличаются одним элементом,
    так что счётчики R_A на сетке обновляются одним сложением.
    """
    if not env_prime.improved:
        raise ParameterError("brute_force_closed_bound expects the improved envelope")
    if not window.below_half:
        raise WindowRangeError(f"closed testing needs s2 < 0.5, got s2={window.s2}")
    if window != env_prime.window:
        raise WindowRangeError("window differs from the envelope window")

    idx = _index_array(p, I)
    n = int(idx.size)
    if n > settings.CLOSED_TESTING_MAX_SET:
        raise CapacityError(
            f"|I|={n} exceeds the subset enumeration limit {settings.CLOSED_TESTING_MAX_SET}; "
            "use the improved envelope value instead"
        )
    if n == 0:
        return 0

    grid = env_prime.grid_ts
    bound = env_prime.grid_values
    rows = (p.original[idx][:, None] <= grid[None, :]).astype(np.int64)

    counts = np.zeros(grid.size, dtype=np.int64)
    member = np.zeros(n, dtype=bool)
    size = 0
    best = 0
    for k in range(1, 1 << n):
        bit = (k & -k).bit_length() - 1
        if member[bit]:
            counts -= rows[bit]
            size -= 1
        else:
            counts += rows[bit]
            size += 1
        member[bit] = not member[bit]
        if size > best and bool(np.all(counts <= bound)):
            best = size
    return best


def _random_instance(rng: np.random.Generator, m: int) -> np.ndarray:
    # смесь равномерных и сдвинутых к нулю p-значений, чтобы огибающая была нетривиальной
    n_signal = int(rng.integers(0, m + 1))
    signal = rng.uniform(size=n_signal) ** 4
    null = rng.uniform(size=m - n_signal)
    values = np.concatenate([signal, null])
    values = np.clip(values, np.finfo(float).tiny, 1.0)
    rng.shuffle(values)
    return values


def verify_equivalence(
    n_instances: int = 200,
    seed: int = 0,
    m_min: int = 5,
    m_max: int = 10,
    window: Optional[ThresholdWindow] = None,
) -> EquivalenceReport:
    """
    Сравнивает B̃'(t) с перебором B̄(R(t)) во всех точках сетки огибающей
    на n_instances случайных примерах (c выбирается из {0, 1/(2m), 0.01}).
    """
    if window is None:
        window = ThresholdWindow(0.0, 0.45)
    if not window.below_half:
        raise WindowRangeError(f"closed testing needs s2 < 0.5, got s2={window.s2}")
    if n_instances < 1 or m_min < 1 or m_max < m_min:
        raise ParameterError(
            f"invalid verification sizes: n_instances={n_instances} m=[{m_min},{m_max}]"
        )

    rng = np.random.default_rng(seed)
    points = 0
    details: List[str] = []

    for k in range(n_instances):
        m = int(rng.integers(m_min, m_max + 1))
        p = ingest(_random_instance(rng, m))
        c = float(rng.choice([0.0, 1.0 / (2 * m), 0.01]))
        env_prime = improve_envelope(p, build_envelope(p, CandidateFamilyConfig(c=c, window=window)))

        for t, expected in zip(env_prime.grid_ts, env_prime.grid_values):
            rejected = p.perm[: count_rejections(p, float(t))]
            got = brute_force_closed_bound(p, rejected, env_prime, window)
            points += 1
            if got != int(expected):
                details.append(
                    f"instance={k} m={m} c={c} t={t!r}: closed={got} improved={int(expected)}"
                )

    report = EquivalenceReport(
        instances=n_instances,
        points_checked=points,
        mismatches=len(details),
        details=tuple(details),
    )

    if report.ok:
        log.info(
            "[ClosedTesting] equivalence ok: instances=%s points=%s seed=%s",
            n_instances,
            points,
            seed,
        )
    else:
        log.warning(
            "[ClosedTesting] equivalence mismatches=%s of points=%s seed=%s first=%s",
            report.mismatches,
            points,
            seed,
            details[0],
        )
    return report
