"""
Margens estáticas da corrida diferencial em corrente (µA) e verificação de
segurança da ofuscação. Cada slot conduzindo contribui com a corrente da sua
classe de Vt; a margem é a soma à esquerda menos a soma à direita.
"""
import math
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import ContractError
from src.logic.boolfn import MAX_VARS
from src.race.device import DEFAULT_PARAMS, DeviceParams
from src.structlog_support import get_structlog_logger
from src.tlg.obfuscate import InstanceKey, apply_key
from src.tlg.slots import CellVariant, DifferentialSpec, Slot, side_conduction

logger = get_structlog_logger(component="race")


def _resolve(spec: DifferentialSpec, key: Optional[InstanceKey]) -> DifferentialSpec:
    return apply_key(spec, key) if key is not None else spec


def slot_currents(slots: Sequence[Slot], params: DeviceParams) -> np.ndarray:
    return np.array([params.current(s.vt) for s in slots], dtype=float)


def static_margin(
    spec: DifferentialSpec,
    assignment: Mapping[str, int],
    params: DeviceParams = DEFAULT_PARAMS,
    key: Optional[InstanceKey] = None,
    decoy_assignment: Optional[Mapping[str, int]] = None,
) -> float:
    """Margem com correntes nominais; positiva sse a saída é 1, zero é empate."""
    spec = _resolve(spec, key)
    values = dict(assignment)
    values.update(decoy_assignment or {})
    missing = [net for net in spec.nets() if net not in values]
    if missing:
        raise ContractError(f"Unresolved signal references: {', '.join(missing)}")
    left = sum(params.current(s.vt) for s in spec.left if s.conducts(values))
    right = sum(params.current(s.vt) for s in spec.right if s.conducts(values))
    margin = left - right
    if margin == 0:
        logger.warning("Empate de corrente na corrida", assignment=values)
    return margin


def margin_table(
    spec: DifferentialSpec,
    params: DeviceParams = DEFAULT_PARAMS,
    key: Optional[InstanceKey] = None,
    variables: Optional[Sequence[str]] = None,
) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Margem nominal para cada atribuição de todas as nets (entradas e decoys)."""
    spec = _resolve(spec, key)
    variables = tuple(spec.variables() if variables is None else variables)
    if len(variables) > MAX_VARS:
        raise ContractError(f"Spec has {len(variables)} variables, margin sweep limit is {MAX_VARS}")
    left = slot_currents(spec.left, params) @ side_conduction(spec.left, variables)
    right = slot_currents(spec.right, params) @ side_conduction(spec.right, variables)
    return variables, left - right


def worst_case_margin(
    spec: DifferentialSpec,
    params: DeviceParams = DEFAULT_PARAMS,
    key: Optional[InstanceKey] = None,
) -> float:
    """Menor |margem| sobre todas as atribuições de entradas e decoys."""
    _, margins = margin_table(spec, params, key)
    return float(np.min(np.abs(margins)))


@dataclass(frozen=True)
class SafetyResult:
    variant: CellVariant
    safe: bool
    max_safe_k: int
    floor: float

    @property
    def verdict(self) -> str:
        return "SAFE" if self.safe else "UNSAFE"

    def to_dict(self) -> Dict[str, object]:
        return {
            "variant": self.variant.name,
            "n": self.variant.n,
            "k": self.variant.k,
            "verdict": self.verdict,
            "max_safe_k": self.max_safe_k,
            "margin_floor_ua": self.floor,
        }


def max_safe_k(params: DeviceParams = DEFAULT_PARAMS) -> int:
    return math.ceil(params.i_low / params.i_high) - 1


def safety_check(variant: Union[CellVariant, int], params: DeviceParams = DEFAULT_PARAMS) -> SafetyResult:
    """
    SAFE sse ``k * iHigh < iLow``: nem o desbalanceamento máximo dos decoys vence
    a margem lógica mínima de um slot LOW.
    """
    if isinstance(variant, int):
        variant = CellVariant(0, variant)
    floor = params.i_low - variant.k * params.i_high
    result = SafetyResult(variant, floor > 0, max_safe_k(params), floor)
    logger.debug("Verificação de segurança", variant=variant.name, verdict=result.verdict)
    return result
