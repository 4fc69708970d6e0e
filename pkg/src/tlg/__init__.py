from src.tlg.slots import CellVariant, DifferentialSpec, Slot, VtClass, eval_diff
from src.tlg.mapping import map_threshold_function, map_truth_table, xor3_macro
from src.tlg.obfuscate import ObfuscationKey, attacker_candidates, obfuscate_instance, obfuscation_space

__all__ = [
    "CellVariant",
    "DifferentialSpec",
    "Slot",
    "VtClass",
    "eval_diff",
    "map_threshold_function",
    "map_truth_table",
    "xor3_macro",
    "ObfuscationKey",
    "obfuscate_instance",
    "obfuscation_space",
    "attacker_candidates",
]
