"""
Verificação de equivalência sequencial por simulação.

Os dois netlists partem do mesmo estado de reset e recebem o mesmo estímulo;
entradas e saídas são casadas por nome. No modo exaustivo toda sequência de
``depth`` vetores é aplicada, seguida de ciclos de espera que esvaziam o
pipeline; no modo aleatório cada lane é um fluxo com semente fixa.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.errors import ContractError, InterfaceMismatchError, TieViolationError
from src.netlist.model import MAX_FLUSH, Netlist
from src.sim.simulator import Simulator
from src.sim.stimulus import DEFAULT_TOGGLE_PROBABILITY, exhaustive_sequences, hold_cycles, toggle_stimulus
from src.structlog_support import get_structlog_logger
from src.tlg.obfuscate import ObfuscationKey

logger = get_structlog_logger(component="equiv")

DEFAULT_BATCH_LANES = 8192


class Verdict(str, Enum):
    EQUIVALENT = "EQUIVALENT"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


@dataclass
class Counterexample:
    cycle: int
    lane: int
    inputs: List[Dict[str, int]]
    expected: Dict[str, int]
    actual: Dict[str, int]
    reason: str = "mismatch"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cycle": self.cycle,
            "lane": self.lane,
            "reason": self.reason,
            "inputs": self.inputs,
            "expected": self.expected,
            "actual": self.actual,
        }


@dataclass
class EquivalenceResult:
    verdict: Verdict
    mode: str
    cycles: int
    lanes: int
    flush: int
    seed: Optional[int] = None
    counterexample: Optional[Counterexample] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.verdict is Verdict.EQUIVALENT

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "mode": self.mode,
            "cycles": self.cycles,
            "lanes": self.lanes,
            "flush": self.flush,
            "seed": self.seed,
            "counterexample": self.counterexample.to_dict() if self.counterexample else None,
        }


def check_interface(a: Netlist, b: Netlist) -> None:
    if set(a.inputs) != set(b.inputs) or len(a.inputs) != len(b.inputs):
        raise InterfaceMismatchError(
            f"Primary inputs differ: {sorted(set(a.inputs) ^ set(b.inputs))}"
        )
    if set(a.outputs) != set(b.outputs) or len(a.outputs) != len(b.outputs):
        raise InterfaceMismatchError(
            f"Primary outputs differ: {sorted(set(a.outputs) ^ set(b.outputs))}"
        )


def build_stimulus(
    n_inputs: int,
    mode: str,
    depth: int,
    vectors: int,
    seed: int,
    probability: float,
    lanes: int,
    flush: int,
) -> np.ndarray:
    if mode == "exhaustive":
        stimulus = exhaustive_sequences(n_inputs, depth)
    elif mode == "random":
        if vectors < 1:
            raise ContractError(f"Random mode needs at least one vector, got {vectors}")
        lanes = max(1, min(lanes, vectors))
        stimulus = toggle_stimulus(n_inputs, math.ceil(vectors / lanes), lanes, probability, seed)
    else:
        raise ContractError(f"Unknown verification mode '{mode}'")
    return hold_cycles(stimulus, flush)


class _Comparison:
    def __init__(self, a: Netlist, b: Netlist, key_a, key_b, stimulus: np.ndarray):
        self.a = a
        self.b = b
        self.sim_a = Simulator(a, key_a)
        self.sim_b = Simulator(b, key_b)
        self.stimulus = stimulus
        position = {net: j for j, net in enumerate(a.inputs)}
        self.b_columns = [position[net] for net in b.inputs]
        out_position = {net: j for j, net in enumerate(b.outputs)}
        self.b_outputs = [out_position[net] for net in a.outputs]

    def _vector(self, stimulus: np.ndarray, cycle: int, lane: int) -> Dict[str, int]:
        return {net: int(stimulus[cycle, lane, j]) for j, net in enumerate(self.a.inputs)}

    def _outputs(self, outputs: np.ndarray, cycle: int, lane: int) -> Dict[str, int]:
        return {net: int(outputs[cycle, lane, j]) for j, net in enumerate(self.a.outputs)}

    def run(self, start: int, stop: int) -> Optional[Counterexample]:
        stimulus = self.stimulus[:, start:stop]
        expected = self.sim_a.run(stimulus).outputs
        try:
            actual = self.sim_b.run(stimulus[:, :, self.b_columns]).outputs[:, :, self.b_outputs]
        except TieViolationError as exc:
            cycle, lane = exc.cycle or 0, (exc.lanes or [0])[0]
            return Counterexample(
                cycle, start + lane,
                [self._vector(stimulus, t, lane) for t in range(cycle + 1)],
                self._outputs(expected, cycle, lane), {}, reason="tie",
            )
        mismatch = np.argwhere(np.any(expected != actual, axis=2))
        if mismatch.size == 0:
            return None
        cycle, lane = (int(v) for v in mismatch[0])
        return Counterexample(
            cycle, start + lane,
            [self._vector(stimulus, t, lane) for t in range(cycle + 1)],
            self._outputs(expected, cycle, lane),
            self._outputs(actual, cycle, lane),
        )


def check_equivalence(
    a: Netlist,
    b: Netlist,
    key_a: Optional[ObfuscationKey] = None,
    key_b: Optional[ObfuscationKey] = None,
    mode: str = "exhaustive",
    depth: int = 2,
    vectors: int = 100_000,
    seed: int = 42,
    probability: float = DEFAULT_TOGGLE_PROBABILITY,
    lanes: int = 256,
    threads: Optional[int] = None,
    batch_lanes: int = DEFAULT_BATCH_LANES,
) -> EquivalenceResult:
    """
    Compara ``a`` (referência) com ``b`` ciclo a ciclo. Um empate numa TLG de
    ``b`` conta como contraexemplo; em ``a`` ele se propaga como erro.
    """
    check_interface(a, b)
    flush = min(max(a.sequential_depth(), b.sequential_depth()), MAX_FLUSH)
    stimulus = build_stimulus(len(a.inputs), mode, depth, vectors, seed, probability, lanes, flush)
    cycles, total_lanes = stimulus.shape[0], stimulus.shape[1]
    comparison = _Comparison(a, b, key_a, key_b, stimulus)

    batches: List[Tuple[int, int]] = [
        (start, min(start + batch_lanes, total_lanes)) for start in range(0, total_lanes, batch_lanes)
    ]
    if threads and threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(lambda span: comparison.run(*span), batches))
    else:
        found = [comparison.run(*span) for span in batches]

    failures = [cex for cex in found if cex is not None]
    counterexample = min(failures, key=lambda c: (c.cycle, c.lane)) if failures else None
    verdict = Verdict.COUNTEREXAMPLE if counterexample else Verdict.EQUIVALENT
    result = EquivalenceResult(
        verdict, mode, cycles, total_lanes, flush,
        seed=seed if mode == "random" else None,
        counterexample=counterexample,
    )
    logger.info("Verificação concluída", verdict=verdict.value, mode=mode, cycles=cycles,
                lanes=total_lanes, flush=flush)
    return result
