from src.logic.boolfn import TruthTable, evaluate, is_positive_unate, support
from src.logic.threshold import NOT_THRESHOLD, ThresholdFunction, count_threshold_functions, identify

__all__ = [
    "TruthTable",
    "evaluate",
    "support",
    "is_positive_unate",
    "ThresholdFunction",
    "identify",
    "count_threshold_functions",
    "NOT_THRESHOLD",
]
