"""
Proxy de potência dinâmica a partir da atividade simulada: trocas de nets CMOS
mais um custo fixo por avaliação de TLG, que não depende dos dados.
"""
from dataclasses import dataclass
from typing import Dict

import numpy as np

from src.errors import ContractError
from src.sim.simulator import Activity


@dataclass(frozen=True)
class PowerProxy:
    cmos_toggles: int
    tlg_evaluations: int
    tlg_cost: float
    tlg_proxy: float
    tlg_cycle_variance: float
    cycles: int
    lanes: int

    @property
    def total(self) -> float:
        return self.cmos_toggles + self.tlg_proxy

    def to_dict(self) -> Dict[str, object]:
        return {
            "cmos_toggles": self.cmos_toggles,
            "tlg_evaluations": self.tlg_evaluations,
            "tlg_cost": self.tlg_cost,
            "tlg_proxy": self.tlg_proxy,
            "tlg_cycle_variance": self.tlg_cycle_variance,
            "total": self.total,
            "cycles": self.cycles,
            "lanes": self.lanes,
        }


def power_proxy(activity: Activity, tlg_cost: float = 1.0) -> PowerProxy:
    if tlg_cost < 0:
        raise ContractError(f"TLG cost must be non-negative, got {tlg_cost}")
    per_cycle = activity.tlg_per_cycle.astype(float) * tlg_cost
    variance = float(np.var(per_cycle)) if per_cycle.size else 0.0
    return PowerProxy(
        cmos_toggles=int(activity.per_cycle.sum()),
        tlg_evaluations=activity.tlg_evaluations,
        tlg_cost=tlg_cost,
        tlg_proxy=tlg_cost * activity.tlg_evaluations,
        tlg_cycle_variance=variance,
        cycles=activity.cycles,
        lanes=activity.lanes,
    )
