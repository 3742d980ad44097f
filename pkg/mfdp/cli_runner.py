"""
Командная строка mfdp.

    python -m mfdp analyze pvalues.csv --gamma 0.05 --gamma 0.1 --out-dir out/
    python -m mfdp estimate pvalues.csv --lambda 0.8
    python -m mfdp envelope pvalues.csv --c 0.001 --t-max-window 0.2
    python -m mfdp simulate --scenario ho:0.5 --pi0 1 --reps 1000 --seed 7
    python -m mfdp simulate --table 2 --reps 10000
    python -m mfdp verify-equivalence --instances 200

Коды выхода: 0 - успех, 1 - verify-equivalence нашёл расхождения,
2 - ошибка входных данных или параметров, 3 - ошибка ввода-вывода.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .closed_testing import closed_testing_pi0, psi_preset, verify_equivalence
from .config import settings
from .control import reject_at
from .envelope import (
    CandidateFamilyConfig,
    EnvelopeCurve,
    build_envelope,
    envelope_table,
    improve_envelope,
)
from .estimators import (
    METHOD_CLOSED_TESTING,
    METHOD_MEDIAN_UNBIASED,
    METHOD_STOREY,
    median_unbiased_pi0,
    storey_pi0,
)
from .formatting import fmt_float, frame_records, write_csv, write_json
from .logger import get_logger
from .pvalues import PValueSet, ThresholdWindow, read_pvalue_csv
from .simulation.baseline import bh_rejections
from .simulation.models import STRUCTURE_IN, STRUCTURE_NE, McResult, Scenario
from .simulation.presets import make_scenario, table1_scenarios, table2_scenarios
from .simulation.runner import estimate_error_rate, estimate_power


log = get_logger()

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_IO = 3

SUBCOMMANDS = ("analyze", "estimate", "envelope", "simulate", "verify-equivalence")
METHODS = (METHOD_STOREY, METHOD_MEDIAN_UNBIASED, METHOD_CLOSED_TESTING)

# окно по умолчанию для проверки эквивалентности: closed testing требует s2 < 0.5
EQUIVALENCE_WINDOW = (0.0, 0.45)


class RunConfig(BaseModel):
    """Параметры одного запуска CLI после разбора аргументов."""

    model_config = ConfigDict(frozen=True)

    subcommand: str
    input_path: Optional[str] = None
    column: Optional[str] = None
    window_start: Optional[float] = None
    window_end: Optional[float] = None
    c: Optional[float] = Field(None, ge=0.0)
    gammas: Optional[Tuple[float, ...]] = None
    lam: Optional[float] = None
    t: Optional[float] = None
    psi: Optional[str] = None
    method: Optional[str] = None
    improve: bool = True
    scenarios: Tuple[str, ...] = ()
    pi0: float = Field(1.0, ge=0.0, le=1.0)
    delta: float = 0.0
    reps: int = Field(settings.SIM_DEFAULT_REPS, ge=1)
    seed: int = Field(settings.SIM_DEFAULT_SEED, ge=0)
    table: Optional[int] = None
    improved_sim: bool = False
    dense: bool = False
    instances: int = Field(200, ge=1)
    m_min: int = Field(5, ge=1)
    m_max: int = Field(10, ge=1)
    out_dir: str = "."
    json_output: bool = False

    @field_validator("subcommand")
    @classmethod
    def _subcommand(cls, v: str) -> str:
        if v not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {v!r}")
        return v

    @field_validator("gammas")
    @classmethod
    def _gammas(cls, v: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        if v is None:
            return None
        if not v:
            raise ValueError("at least one gamma is required")
        for g in v:
            if not (0.0 <= g <= 1.0):
                raise ValueError(f"gamma must lie in [0,1], got {g}")
        return tuple(sorted(set(v)))

    @field_validator("method")
    @classmethod
    def _method(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in METHODS:
            raise ValueError(f"method must be one of {', '.join(METHODS)}, got {v!r}")
        return v

    @field_validator("table")
    @classmethod
    def _table(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v not in (1, 2):
            raise ValueError(f"table must be 1 or 2, got {v}")
        return v

    @model_validator(mode="after")
    def _consistency(self) -> "RunConfig":
        if self.subcommand in ("analyze", "estimate", "envelope") and not self.input_path:
            raise ValueError(f"{self.subcommand} needs an input CSV file")
        if self.subcommand == "simulate" and not self.scenarios and self.table is None:
            raise ValueError("simulate needs --scenario or --table")
        if self.m_max < self.m_min:
            raise ValueError(f"m_max={self.m_max} is smaller than m_min={self.m_min}")
        # проверка окна тем же конструктором, что использует библиотека
        self.window()
        return self

    def window(self) -> ThresholdWindow:
        if self.subcommand == "verify-equivalence":
            s1, s2 = EQUIVALENCE_WINDOW
        else:
            s1, s2 = settings.ENVELOPE_WINDOW_START, settings.ENVELOPE_WINDOW_END
        return ThresholdWindow(
            s1 if self.window_start is None else self.window_start,
            s2 if self.window_end is None else self.window_end,
        )

    def gamma_list(self) -> Tuple[float, ...]:
        return self.gammas or (settings.CONTROL_DEFAULT_GAMMA,)

    def family_for(self, m: int) -> CandidateFamilyConfig:
        """c = 1/(2m) считается после чтения данных, если не задан явно."""
        c = 1.0 / (2 * m) if self.c is None else self.c
        return CandidateFamilyConfig(c=c, window=self.window())

    def out_path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)


# ===== analyze / envelope =====

def _envelopes(cfg: RunConfig, p: PValueSet) -> Tuple[EnvelopeCurve, EnvelopeCurve]:
    env = build_envelope(p, cfg.family_for(p.m))
    return env, improve_envelope(p, env)


def analyze_frames(cfg: RunConfig, p: PValueSet) -> Dict[str, Any]:
    """
    Таблицы analyze: скорректированные p-значения (исходный порядок),
    сводка по γ и данные огибающей. Для процедуры используется B̃' (или B̃ при improve=False).
    """
    env, env_prime = _envelopes(cfg, p)
    used = env_prime if cfg.improve else env

    reports = [reject_at(p, used, g) for g in cfg.gamma_list()]

    adjusted = pd.DataFrame(
        {
            "index": np.arange(1, p.m + 1),
            "p_value": p.original,
            "adjusted": reports[0].adjusted,
        }
    )
    summary = pd.DataFrame(
        {
            "gamma": [r.gamma for r in reports],
            "t_max": [r.t_max for r in reports],
            "n_rejected": [r.n_rejected for r in reports],
            "fdp_bound": [r.fdp_bound_at_tmax for r in reports],
            "tdp_lower": [r.tdp_lower for r in reports],
            # BH при α = γ; γ = 0 или 1 вне области BH
            "bh_rejections": [
                bh_rejections(p, r.gamma) if 0.0 < r.gamma < 1.0 else (p.m if r.gamma >= 1.0 else 0)
                for r in reports
            ],
        }
    )
    return {
        "env": used,
        "adjusted": adjusted,
        "summary": summary,
        "envelope": envelope_table(p, env, env_prime),
    }


def _envelope_meta(env: EnvelopeCurve) -> Dict[str, Any]:
    return {
        "m": env.m,
        "kappa": env.kappa if np.isfinite(env.kappa) else fmt_float(env.kappa),
        "c": env.c,
        "window": [env.window.s1, env.window.s2],
        "improved": env.improved,
        "degenerate": env.degenerate,
    }


def _cmd_analyze(cfg: RunConfig) -> int:
    p = read_pvalue_csv(cfg.input_path, cfg.column)
    frames = analyze_frames(cfg, p)

    write_csv(frames["adjusted"], cfg.out_path("adjusted.csv"))
    write_csv(frames["summary"], cfg.out_path("summary.csv"))
    write_csv(frames["envelope"], cfg.out_path("envelope.csv"))

    if cfg.json_output:
        write_json(
            {
                "envelope_meta": _envelope_meta(frames["env"]),
                "adjusted": frame_records(frames["adjusted"]),
                "summary": frame_records(frames["summary"]),
                "envelope": frame_records(frames["envelope"]),
            },
            cfg.out_path("analyze.json"),
        )

    for row in frames["summary"].itertuples(index=False):
        print(
            f"gamma={fmt_float(row.gamma)} t_max={fmt_float(row.t_max)} "
            f"rejected={row.n_rejected} fdp_bound={fmt_float(row.fdp_bound)} bh={row.bh_rejections}"
        )
    log.info(
        "[CLI] analyze input=%s m=%s gammas=%s out_dir=%s",
        cfg.input_path,
        p.m,
        list(cfg.gamma_list()),
        cfg.out_dir,
    )
    return EXIT_OK


def _cmd_envelope(cfg: RunConfig) -> int:
    p = read_pvalue_csv(cfg.input_path, cfg.column)
    env, env_prime = _envelopes(cfg, p)
    table = envelope_table(p, env, env_prime)

    write_csv(table, cfg.out_path("envelope.csv"))
    if cfg.json_output:
        write_json(
            {"envelope_meta": _envelope_meta(env), "envelope": frame_records(table)},
            cfg.out_path("envelope.json"),
        )

    print(f"kappa={fmt_float(env.kappa)} points={len(table)} degenerate={env.degenerate}")
    log.info("[CLI] envelope input=%s m=%s points=%s", cfg.input_path, p.m, len(table))
    return EXIT_OK


# ===== estimate =====

def estimate_frame(cfg: RunConfig, p: PValueSet) -> pd.DataFrame:
    method = cfg.method
    if method is None:
        if cfg.psi is not None:
            method = METHOD_CLOSED_TESTING
        elif cfg.lam is not None:
            method = METHOD_STOREY
        else:
            method = METHOD_MEDIAN_UNBIASED

    if method == METHOD_STOREY:
        est = storey_pi0(p, 0.5 if cfg.lam is None else cfg.lam)
    elif method == METHOD_MEDIAN_UNBIASED:
        est = median_unbiased_pi0(p, 0.5 if cfg.t is None else cfg.t)
    else:
        psi = psi_preset(cfg.psi or "one")
        est = closed_testing_pi0(p, 0.5 if cfg.t is None else cfg.t, psi)

    return pd.DataFrame(
        {
            "method": [est.method],
            "tuning": [est.tuning],
            "raw": [est.raw],
            "clamped": [est.clamped],
        }
    )


def _cmd_estimate(cfg: RunConfig) -> int:
    p = read_pvalue_csv(cfg.input_path, cfg.column)
    frame = estimate_frame(cfg, p)
    write_csv(frame, cfg.out_path("estimate.csv"))
    if cfg.json_output:
        write_json({"estimate": frame_records(frame)}, cfg.out_path("estimate.json"))

    row = frame.iloc[0]
    print(
        f"method={row['method']} tuning={fmt_float(row['tuning'])} "
        f"raw={fmt_float(row['raw'])} clamped={fmt_float(row['clamped'])}"
    )
    log.info("[CLI] estimate input=%s m=%s method=%s", cfg.input_path, p.m, row["method"])
    return EXIT_OK


# ===== simulate =====

def _scenario_rho(scn: Scenario) -> float:
    if scn.structure == STRUCTURE_IN:
        return 0.0
    if scn.structure == STRUCTURE_NE:
        return scn.rho_between
    return scn.rho


def _simulation_row(scn: Scenario, error: Optional[McResult], power: Optional[McResult]) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "setting": scn.structure,
        "rho": _scenario_rho(scn),
        "pi0": scn.pi0,
        "delta": scn.delta,
        "reps": scn.reps,
        "seed": scn.seed,
        "error_rate": error.error_rate if error else "",
        "error_se": error.error_se if error else "",
    }
    for g in scn.gamma_grid:
        row[f"power_{g:g}"] = power.power_by_gamma[g] if power else ""
    row[f"bh_{scn.bh_alpha:g}"] = power.bh_power[scn.bh_alpha] if power else ""
    return row


def simulation_frame(cfg: RunConfig) -> pd.DataFrame:
    rows: List[Dict[str, Any]] = []
    sim_fields = {"improved": cfg.improved_sim, "dense": cfg.dense}

    if cfg.table == 1:
        for row, scn in table1_scenarios(cfg.reps, cfg.seed):
            scn = scn.model_copy(update=sim_fields)
            out = _simulation_row(scn, estimate_error_rate(scn), None)
            out["expected_error"] = row.expected_error
            rows.append(out)
    elif cfg.table == 2:
        for row, scn in table2_scenarios(cfg.reps, cfg.seed):
            scn = scn.model_copy(update=sim_fields)
            out = _simulation_row(scn, None, estimate_power(scn))
            for g, expected in zip(scn.gamma_grid, row.expected_power):
                out[f"expected_{g:g}"] = expected
            out["expected_bh"] = row.expected_bh
            rows.append(out)
    else:
        for k, preset in enumerate(cfg.scenarios):
            overrides: Dict[str, Any] = {
                "pi0": cfg.pi0,
                "delta": cfg.delta,
                "reps": cfg.reps,
                "seed": cfg.seed + k,
                "c": cfg.c,
                **sim_fields,
            }
            if cfg.gammas is not None:
                overrides["gamma_grid"] = cfg.gammas
            if cfg.window_start is not None:
                overrides["window_start"] = cfg.window_start
            if cfg.window_end is not None:
                overrides["window_end"] = cfg.window_end
            scn = make_scenario(preset, **overrides)
            error = estimate_error_rate(scn)
            power = estimate_power(scn) if scn.n_false > 0 else None
            rows.append(_simulation_row(scn, error, power))

    return pd.DataFrame(rows)


def _cmd_simulate(cfg: RunConfig) -> int:
    frame = simulation_frame(cfg)
    write_csv(frame, cfg.out_path("simulation.csv"))
    if cfg.json_output:
        write_json({"simulation": frame_records(frame)}, cfg.out_path("simulation.json"))

    print(frame.to_string(index=False))
    log.info("[CLI] simulate rows=%s reps=%s seed=%s", len(frame), cfg.reps, cfg.seed)
    return EXIT_OK


# ===== verify-equivalence =====

def _cmd_verify(cfg: RunConfig) -> int:
    report = verify_equivalence(
        n_instances=cfg.instances,
        seed=cfg.seed,
        m_min=cfg.m_min,
        m_max=cfg.m_max,
        window=cfg.window(),
    )
    if cfg.json_output:
        write_json(
            {
                "instances": report.instances,
                "points_checked": report.points_checked,
                "mismatches": report.mismatches,
                "details": list(report.details),
            },
            cfg.out_path("verify_equivalence.json"),
        )

    status = "PASS" if report.ok else "FAIL"
    print(
        f"{status}: instances={report.instances} points={report.points_checked} "
        f"mismatches={report.mismatches}"
    )
    for line in report.details[:10]:
        print(f"  {line}")
    return EXIT_OK if report.ok else EXIT_MISMATCH


_HANDLERS = {
    "analyze": _cmd_analyze,
    "estimate": _cmd_estimate,
    "envelope": _cmd_envelope,
    "simulate": _cmd_simulate,
    "verify-equivalence": _cmd_verify,
}


def run(cfg: RunConfig) -> int:
    """Выполняет подкоманду. Ошибки переводятся в код выхода и пишутся в лог."""
    try:
        return _HANDLERS[cfg.subcommand](cfg)
    except ValueError as e:
        log.exception("[CLI] %s failed: invalid input: %s", cfg.subcommand, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        log.exception("[CLI] %s failed: I/O error: %s", cfg.subcommand, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


# ===== argparse =====

def _gamma_list(raw: Optional[List[str]]) -> Optional[Tuple[float, ...]]:
    if not raw:
        return None
    out: List[float] = []
    for chunk in raw:
        for part in chunk.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                out.append(float(part))
            except ValueError:
                raise ValueError(f"bad gamma value {part!r}") from None
    return tuple(out)


def _add_window_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-min", dest="window_start", type=float, default=None, help="s1, нижняя граница окна порогов")
    parser.add_argument("--t-max-window", dest="window_end", type=float, default=None, help="s2, верхняя граница окна порогов")


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", default=".", help="каталог для выходных файлов")
    parser.add_argument("--json", dest="json_output", action="store_true", help="дублировать вывод в JSON")


def _add_input_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input_path", help="CSV/TSV с p-значениями")
    parser.add_argument("--column", default=None, help="имя или 0-based номер колонки")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfdp",
        description="Median FDP control from p-values: envelopes, adjusted p-values, simulations.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    analyze = sub.add_parser("analyze", help="adjusted p-values, rejections per gamma, envelope data")
    _add_input_args(analyze)
    _add_window_args(analyze)
    analyze.add_argument("--gamma", action="append", default=None, help="γ, можно повторять или через запятую")
    analyze.add_argument("--c", type=float, default=None, help="константа c семейства (по умолчанию 1/(2m))")
    analyze.add_argument("--no-improve", dest="improve", action="store_false", help="использовать B̃ вместо B̃'")
    _add_common_args(analyze)

    estimate = sub.add_parser("estimate", help="pi0 estimates at a fixed threshold")
    _add_input_args(estimate)
    estimate.add_argument("--lambda", dest="lam", type=float, default=None, help="λ для оценки Стори")
    estimate.add_argument("--t", type=float, default=None, help="порог t для медианно-несмещённой оценки")
    estimate.add_argument("--psi", default=None, help="ψ для closed testing: one | linear | quadratic")
    estimate.add_argument("--method", choices=METHODS, default=None)
    _add_common_args(estimate)

    envelope = sub.add_parser("envelope", help="envelope plot data")
    _add_input_args(envelope)
    _add_window_args(envelope)
    envelope.add_argument("--c", type=float, default=None)
    _add_common_args(envelope)

    simulate = sub.add_parser("simulate", help="Monte Carlo error rate and power")
    simulate.add_argument("--scenario", dest="scenarios", action="append", default=None, help="in | ho:<rho> | bl:<rho> | ne")
    simulate.add_argument("--table", type=int, default=None, help="1 - таблица ошибки, 2 - таблица мощности")
    simulate.add_argument("--pi0", type=float, default=1.0)
    simulate.add_argument("--delta", type=float, default=0.0)
    simulate.add_argument("--reps", type=int, default=settings.SIM_DEFAULT_REPS)
    simulate.add_argument("--seed", type=int, default=settings.SIM_DEFAULT_SEED)
    simulate.add_argument("--gamma", action="append", default=None)
    simulate.add_argument("--c", type=float, default=None)
    simulate.add_argument("--improved", dest="improved_sim", action="store_true", help="считать по B̃'")
    simulate.add_argument("--dense", action="store_true", help="эталонный сэмплер через полную ковариацию")
    _add_window_args(simulate)
    _add_common_args(simulate)

    verify = sub.add_parser("verify-equivalence", help="check B̃'(t) against brute-force closed testing")
    verify.add_argument("--instances", type=int, default=200)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--m-min", type=int, default=5)
    verify.add_argument("--m-max", type=int, default=10)
    _add_window_args(verify)
    _add_common_args(verify)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None}
    gammas = _gamma_list(fields.pop("gamma", None))
    if gammas is not None:
        fields["gammas"] = gammas
    if "scenarios" in fields:
        fields["scenarios"] = tuple(fields["scenarios"])
    return RunConfig(**fields)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as e:
        log.error("[CLI] invalid arguments: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
