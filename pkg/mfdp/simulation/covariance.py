"""
Структуры зависимости Z-статистик (единичные дисперсии).

    IN: Σ = I
    HO: Σ = (1-ρ)I + ρJ
    BL: блочно-диагональная, внутри блока HO(ρ), блоки независимы
    NE: внутри блока ρw, между блоками ρb (обычно отрицательная)

Генерация через факторы, O(m) на одну выборку:
    HO/BL: Z_i = √ρ·G_b + √(1-ρ)·ε_i
    NE:    Z_i = √ρw·F_b + √(1-ρw)·ε_i, где F_1..F_K - единичные дисперсии с
           корреляцией r = ρb/ρw: F_b = (E_b - λ·Ē)/√(1+y), y = r/(1-r), λ = 1 - √(1+K·y)

Собственные значения Σ известны в явном виде, поэтому PSD проверяется без O(m³).
Полная матрица и многомерное нормальное через Холецкого - эталон для сверки.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import ScenarioError
from .models import STRUCTURE_BL, STRUCTURE_HO, STRUCTURE_IN, STRUCTURE_NE, Scenario


_EIG_TOL = 1e-12


def block_sizes(scn: Scenario) -> int:
    """Размер блока для BL/NE (m делится на n_blocks нацело)."""
    return scn.m // scn.n_blocks


def eigenvalues(scn: Scenario) -> np.ndarray:
    """Различные собственные значения матрицы корреляций сценария."""
    m = scn.m
    if scn.structure == STRUCTURE_IN:
        return np.array([1.0])
    if scn.structure == STRUCTURE_HO:
        return np.array([1.0 - scn.rho, 1.0 + (m - 1) * scn.rho])
    n = block_sizes(scn)
    if scn.structure == STRUCTURE_BL:
        return np.array([1.0 - scn.rho, 1.0 + (n - 1) * scn.rho])

    k = scn.n_blocks
    rw, rb = scn.rho_within, scn.rho_between
    return np.array(
        [
            1.0 - rw,
            1.0 + (n - 1) * rw - n * rb,
            1.0 + (n - 1) * rw + n * (k - 1) * rb,
        ]
    )


def check_structure(scn: Scenario) -> None:
    """
    Проверяет, что матрица корреляций корректна (PSD) и факторная конструкция существует.
    ScenarioError с описанием причины.
    """
    if scn.structure in (STRUCTURE_BL, STRUCTURE_NE) and scn.m % scn.n_blocks != 0:
        raise ScenarioError(f"m={scn.m} is not divisible by n_blocks={scn.n_blocks}")

    if scn.structure in (STRUCTURE_HO, STRUCTURE_BL) and not (0.0 <= scn.rho <= 1.0):
        raise ScenarioError(f"{scn.structure} needs 0 <= rho <= 1, got rho={scn.rho}")

    if scn.structure == STRUCTURE_NE:
        rw, rb = scn.rho_within, scn.rho_between
        if not (0.0 < rw <= 1.0):
            raise ScenarioError(f"NE needs 0 < rho_within <= 1, got {rw}")
        if not (-1.0 <= rb <= rw):
            raise ScenarioError(f"NE needs -1 <= rho_between <= rho_within, got {rb}")
        if scn.n_blocks > 1 and rb / rw < -1.0 / (scn.n_blocks - 1):
            raise ScenarioError(
                f"NE between-block factor does not exist: rho_between/rho_within={rb / rw} "
                f"< -1/(n_blocks-1)"
            )

    eig = eigenvalues(scn)
    if eig.min() < -_EIG_TOL:
        raise ScenarioError(
            f"correlation matrix of {scn.label} is not positive semi-definite "
            f"(smallest eigenvalue {eig.min():.6g})"
        )


def _ne_factors(k: int, r: float, rng: np.random.Generator) -> np.ndarray:
    """K стандартных нормальных с попарной корреляцией r."""
    e = rng.standard_normal(k)
    if k == 1 or r == 0.0:
        return e
    y = r / (1.0 - r) if r < 1.0 else math.inf
    if math.isinf(y):
        return np.full(k, e[0])
    lam = 1.0 - math.sqrt(max(1.0 + k * y, 0.0))
    return (e - lam * e.mean()) / math.sqrt(1.0 + y)


def draw_z(scn: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Одна выборка Z ~ N(0, Σ) факторным способом."""
    m = scn.m
    if scn.structure == STRUCTURE_IN:
        return rng.standard_normal(m)

    if scn.structure == STRUCTURE_HO:
        g = rng.standard_normal()
        eps = rng.standard_normal(m)
        return math.sqrt(scn.rho) * g + math.sqrt(1.0 - scn.rho) * eps

    n = block_sizes(scn)
    if scn.structure == STRUCTURE_BL:
        g = np.repeat(rng.standard_normal(scn.n_blocks), n)
        eps = rng.standard_normal(m)
        return math.sqrt(scn.rho) * g + math.sqrt(1.0 - scn.rho) * eps

    rw = scn.rho_within
    f = np.repeat(_ne_factors(scn.n_blocks, scn.rho_between / rw, rng), n)
    eps = rng.standard_normal(m)
    return math.sqrt(rw) * f + math.sqrt(1.0 - rw) * eps


def dense_correlation(scn: Scenario) -> np.ndarray:
    """Полная m×m матрица корреляций сценария."""
    m = scn.m
    if scn.structure == STRUCTURE_IN:
        return np.eye(m)
    if scn.structure == STRUCTURE_HO:
        out = np.full((m, m), scn.rho)
    else:
        block = np.arange(m) // block_sizes(scn)
        same = block[:, None] == block[None, :]
        if scn.structure == STRUCTURE_BL:
            out = np.where(same, scn.rho, 0.0)
        else:
            out = np.where(same, scn.rho_within, scn.rho_between)
    np.fill_diagonal(out, 1.0)
    return out


def draw_z_dense(scn: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Эталонный сэмплер: многомерное нормальное через разложение Холецкого."""
    cov = dense_correlation(scn)
    try:
        return rng.multivariate_normal(np.zeros(scn.m), cov, method="cholesky")
    except np.linalg.LinAlgError as e:
        raise ScenarioError(
            f"dense sampler needs a positive definite matrix for {scn.label}: {e}"
        ) from e
