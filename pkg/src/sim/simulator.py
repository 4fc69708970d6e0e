"""
Simulação ciclo a ciclo de netlists mistos CMOS + TLG, vetorizada em lanes.

Cada lane é uma simulação independente; todos os valores são vetores booleanos
numpy de comprimento ``lanes``. Em cada ciclo: aplica as entradas, avalia as
portas em ordem topológica, registra as saídas primárias e então atualiza flops
e TLGs (a TLG registra a saída da corrida diferencial sob a chave). Estado
inicial: zero (flops com init 1 começam em 1).
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from src.errors import ContractError, KeyRequiredError, TieViolationError
from src.netlist.model import Netlist
from src.structlog_support import get_structlog_logger
from src.tlg.mapping import evaluate_stages
from src.tlg.obfuscate import ObfuscationKey, apply_key
from src.tlg.slots import DifferentialSpec

logger = get_structlog_logger(component="simulator")


@dataclass
class Activity:
    """
    Contadores de atividade. ``per_cycle`` soma apenas as nets CMOS; a troca na
    saída de uma TLG é cobrada no custo fixo da avaliação.
    """
    toggles: Dict[str, int]
    per_cycle: np.ndarray
    tlg_evaluations: int
    tlg_per_cycle: np.ndarray
    tlg_nets: Set[str]
    cycles: int
    lanes: int

    def cmos_toggles(self) -> int:
        return sum(count for net, count in self.toggles.items() if net not in self.tlg_nets)


@dataclass
class SimResult:
    outputs: np.ndarray
    output_names: Tuple[str, ...]
    activity: Activity
    history: Dict[str, List[bool]] = field(default_factory=dict)

    def trace(self, lane: int = 0) -> List[Dict[str, int]]:
        return [
            {name: int(self.outputs[t, lane, j]) for j, name in enumerate(self.output_names)}
            for t in range(self.outputs.shape[0])
        ]


class Simulator:
    def __init__(self, nl: Netlist, key: Optional[ObfuscationKey] = None):
        self.nl = nl
        self.gates = nl.topo_gates()
        self.stages: Dict[str, List[Tuple[str, DifferentialSpec]]] = {}
        for inst in nl.tlgs.values():
            resolved = []
            for stage_name, stage in inst.named_stages():
                spec = stage.spec
                if stage.variant.k:
                    entry = key.get(stage_name) if key is not None else None
                    if entry is None:
                        raise KeyRequiredError(f"TLG stage '{stage_name}' is obfuscated and no key entry was given")
                    spec = apply_key(spec, entry)
                resolved.append((stage.output, spec))
            self.stages[inst.name] = resolved

    def run(self, stimulus: np.ndarray, record_lane: Optional[int] = None) -> SimResult:
        """
        ``stimulus`` tem forma (ciclos, lanes, entradas) na ordem de ``nl.inputs``.
        Com ``record_lane`` o valor de toda net daquela lane é guardado por ciclo.
        """
        nl = self.nl
        stimulus = np.asarray(stimulus, dtype=bool)
        if stimulus.ndim != 3 or stimulus.shape[2] != len(nl.inputs):
            raise ContractError(
                f"Stimulus must have shape (cycles, lanes, {len(nl.inputs)}), got {stimulus.shape}"
            )
        cycles, lanes = stimulus.shape[0], stimulus.shape[1]
        state: Dict[str, np.ndarray] = {
            flop.q: np.full(lanes, flop.init == 1, dtype=bool) for flop in nl.flops.values()
        }
        state.update({inst.q: np.zeros(lanes, dtype=bool) for inst in nl.tlgs.values()})
        outputs = np.zeros((cycles, lanes, len(nl.outputs)), dtype=bool)
        previous: Dict[str, np.ndarray] = {}
        toggles: Dict[str, int] = {}
        per_cycle = np.zeros(cycles, dtype=np.int64)
        tlg_per_cycle = np.zeros(cycles, dtype=np.int64)
        history: Dict[str, List[bool]] = {}
        zeros = np.zeros(lanes, dtype=bool)
        tlg_nets = {inst.q for inst in nl.tlgs.values()}

        for t in range(cycles):
            values: Dict[str, np.ndarray] = {net: stimulus[t, :, j] for j, net in enumerate(nl.inputs)}
            values.update(state)
            for gate in self.gates:
                values[gate.output] = gate.evaluate([values[i] for i in gate.inputs], lanes)
            for j, net in enumerate(nl.outputs):
                outputs[t, :, j] = values[net]

            for net, value in values.items():
                count = int(np.count_nonzero(value != previous.get(net, zeros)))
                toggles[net] = toggles.get(net, 0) + count
                if net not in tlg_nets:
                    per_cycle[t] += count
            previous = values
            if record_lane is not None:
                for net, value in values.items():
                    history.setdefault(net, []).append(bool(value[record_lane]))

            following = {flop.q: values[flop.d] for flop in nl.flops.values()}
            for name, stages in self.stages.items():
                try:
                    results = evaluate_stages(stages, values, lanes)
                except TieViolationError as exc:
                    raise TieViolationError(
                        f"Tie in TLG '{name}' at cycle {t} on {len(exc.lanes or [])} lane(s)",
                        instance=name, cycle=t, lanes=exc.lanes,
                    ) from exc
                following[stages[-1][0]] = results[stages[-1][0]]
            tlg_per_cycle[t] = len(self.stages) * lanes
            state = following

        activity = Activity(
            toggles=toggles,
            per_cycle=per_cycle,
            tlg_evaluations=int(tlg_per_cycle.sum()),
            tlg_per_cycle=tlg_per_cycle,
            tlg_nets=tlg_nets,
            cycles=cycles,
            lanes=lanes,
        )
        logger.debug("Simulação concluída", cycles=cycles, lanes=lanes, tlg_evaluations=activity.tlg_evaluations)
        return SimResult(outputs, tuple(nl.outputs), activity, history)


def simulate(
    nl: Netlist,
    stimulus: np.ndarray,
    key: Optional[ObfuscationKey] = None,
    record_lane: Optional[int] = None,
) -> SimResult:
    return Simulator(nl, key).run(stimulus, record_lane)
