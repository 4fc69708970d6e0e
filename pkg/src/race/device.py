"""
Parâmetros de dispositivo e modelo de corrente dos transistores de entrada.

A corrente de pico segue uma lei alpha-power de dois pontos,
``I = K * (Vdd - |Vt|) ** alpha``, ajustada pelas correntes de calibração das
classes LVT e HVT. Abaixo do corte (overdrive negativo) a corrente é zero.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict

import numpy as np

from src.errors import ContractError
from src.tlg.slots import VtClass


class VtFlavor(str, Enum):
    LVT = "LVT"
    SVT = "SVT"
    HVT = "HVT"


@dataclass(frozen=True)
class VtDistribution:
    mean: float
    sigma: float

    @property
    def magnitude(self) -> float:
        return abs(self.mean)


def _table_distributions() -> Dict[VtFlavor, VtDistribution]:
    # pMOS, 25C
    return {
        VtFlavor.LVT: VtDistribution(-0.280, 0.0195),
        VtFlavor.SVT: VtDistribution(-0.433, 0.0228),
        VtFlavor.HVT: VtDistribution(-0.604, 0.0217),
    }


# classe lógica do slot -> sabor de transistor usado na célula
SLOT_FLAVOR = {VtClass.LOW: VtFlavor.LVT, VtClass.HIGH: VtFlavor.HVT}


@dataclass(frozen=True)
class DeviceParams:
    """Correntes em µA, tensões em V."""
    vdd: float = 1.1
    distributions: Dict[VtFlavor, VtDistribution] = field(default_factory=_table_distributions)
    i_low: float = 15.3
    i_high: float = 4.54

    def __post_init__(self):
        if self.i_low <= 0 or self.i_high <= 0:
            raise ContractError(f"Calibration currents must be positive: {self.i_low}, {self.i_high}")
        if self.vdd <= 0:
            raise ContractError(f"Supply voltage must be positive, got {self.vdd}")
        missing = [f.value for f in (VtFlavor.LVT, VtFlavor.HVT) if f not in self.distributions]
        if missing:
            raise ContractError(f"Missing Vt distributions: {', '.join(missing)}")

    @property
    def ratio(self) -> float:
        return self.i_low / self.i_high

    def current(self, vt: VtClass) -> float:
        """Corrente nominal de um slot conduzindo."""
        return self.i_low if vt is VtClass.LOW else self.i_high

    def distribution(self, vt: VtClass) -> VtDistribution:
        return self.distributions[SLOT_FLAVOR[vt]]


DEFAULT_PARAMS = DeviceParams()


@dataclass(frozen=True)
class CurrentModel:
    alpha: float
    k: float
    vdd: float

    def current(self, vt):
        """Aceita escalar ou array de Vt (sinal ignorado)."""
        overdrive = np.clip(self.vdd - np.abs(vt), 0.0, None)
        return self.k * overdrive ** self.alpha


def calibrate_current_model(params: DeviceParams = DEFAULT_PARAMS) -> CurrentModel:
    low = params.distributions[VtFlavor.LVT].magnitude
    high = params.distributions[VtFlavor.HVT].magnitude
    ov_low, ov_high = params.vdd - low, params.vdd - high
    if ov_low <= 0 or ov_high <= 0:
        raise ContractError(f"Calibration points below cutoff: overdrive {ov_low:.3f} V, {ov_high:.3f} V")
    if math.isclose(ov_low, ov_high):
        raise ContractError("Calibration points have the same overdrive")
    if math.isclose(params.i_low, params.i_high):
        raise ContractError("Calibration currents are equal; alpha would be 0")
    alpha = math.log(params.i_low / params.i_high) / math.log(ov_low / ov_high)
    if alpha <= 0:
        raise ContractError(f"Calibration gives non-positive alpha {alpha:.4f}")
    return CurrentModel(alpha=alpha, k=params.i_low / ov_low ** alpha, vdd=params.vdd)
