"""
mfdp - контроль медианы доли ложных открытий (mFDP) по вектору p-значений.

Основной сценарий:

    p = ingest(values)
    env = build_envelope(p, CandidateFamilyConfig.default_for(p.m))
    env = improve_envelope(p, env)
    report = reject_at(p, env, gamma=0.05)
"""
from .closed_testing import (
    EquivalenceReport,
    LocalTestStats,
    PsiWeight,
    brute_force_closed_bound,
    closed_testing_pi0,
    custom_psi,
    generalized_N_bound,
    generalized_V_bound,
    local_test,
    psi_preset,
    verify_equivalence,
)
from .control import UNBOUNDED, MfdpReport, adjusted_pvalues, reject_at, t_max
from .envelope import (
    KAPPA_INFINITE,
    CandidateFamilyConfig,
    EnvelopeCurve,
    build_envelope,
    candidate_bound,
    envelope_table,
    fdp_envelope_at,
    improve_envelope,
    kappa_max,
)
from .errors import (
    CapacityError,
    CsvFormatError,
    MfdpError,
    ParameterError,
    PValueValidationError,
    ScenarioError,
    WindowRangeError,
)
from .estimators import (
    FixedThresholdReport,
    Pi0Estimate,
    fixed_threshold_report,
    median_unbiased_pi0,
    storey_pi0,
)
from .pvalues import (
    PValueSet,
    ThresholdWindow,
    count_rejections,
    count_upper_tail,
    ingest,
    read_pvalue_csv,
)

__all__ = [
    "KAPPA_INFINITE",
    "UNBOUNDED",
    "CandidateFamilyConfig",
    "CapacityError",
    "CsvFormatError",
    "EnvelopeCurve",
    "EquivalenceReport",
    "FixedThresholdReport",
    "LocalTestStats",
    "MfdpError",
    "MfdpReport",
    "PValueSet",
    "PValueValidationError",
    "ParameterError",
    "Pi0Estimate",
    "PsiWeight",
    "ScenarioError",
    "ThresholdWindow",
    "WindowRangeError",
    "adjusted_pvalues",
    "brute_force_closed_bound",
    "build_envelope",
    "candidate_bound",
    "closed_testing_pi0",
    "count_rejections",
    "count_upper_tail",
    "custom_psi",
    "envelope_table",
    "fdp_envelope_at",
    "fixed_threshold_report",
    "generalized_N_bound",
    "generalized_V_bound",
    "improve_envelope",
    "ingest",
    "kappa_max",
    "local_test",
    "median_unbiased_pi0",
    "psi_preset",
    "read_pvalue_csv",
    "reject_at",
    "storey_pi0",
    "t_max",
    "verify_equivalence",
]
