from src.race.device import DEFAULT_PARAMS, DeviceParams, calibrate_current_model
from src.race.margin import safety_check, static_margin, worst_case_margin
from src.race.yield_mc import monte_carlo_yield

__all__ = [
    "DeviceParams",
    "DEFAULT_PARAMS",
    "calibrate_current_model",
    "static_margin",
    "worst_case_margin",
    "safety_check",
    "monte_carlo_yield",
]
