from .baseline import bh_adjusted, bh_rejections
from .models import McResult, Scenario, TruthMask
from .presets import TABLE1_ROWS, TABLE2_ROWS, make_scenario, preset_fields
from .runner import envelope_violated, estimate_error_rate, estimate_power
from .sampling import sample_pvalues, z_to_pvalues

__all__ = [
    "McResult",
    "Scenario",
    "TABLE1_ROWS",
    "TABLE2_ROWS",
    "TruthMask",
    "bh_adjusted",
    "bh_rejections",
    "envelope_violated",
    "estimate_error_rate",
    "estimate_power",
    "make_scenario",
    "preset_fields",
    "sample_pvalues",
    "z_to_pvalues",
]
