"""
Netlist sequencial em nível de portas: portas primitivas, flops tipo D e
instâncias TLG (uma ou duas camadas de células diferenciais que se comportam
como um flop disparado por borda).

Cada célula é indexada pela net que ela dirige; uma net tem exatamente um driver.
"""
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from src.errors import CombinationalLoopError, ContractError, MultipleDriversError, NetlistError
from src.logic.boolfn import TruthTable, input_patterns, pack_bits
from src.tlg.slots import CellVariant, DifferentialSpec

MAX_FLUSH = 8


class GateKind(str, Enum):
    BUF = "BUF"
    INV = "INV"
    AND2 = "AND2"
    NAND2 = "NAND2"
    OR2 = "OR2"
    NOR2 = "NOR2"
    XOR2 = "XOR2"
    XNOR2 = "XNOR2"
    MAJ3 = "MAJ3"
    CONST0 = "CONST0"
    CONST1 = "CONST1"
    LUT = "LUT"


# tabela-verdade de cada primitiva (variável 1 = primeira entrada = LSB)
KIND_TABLES: Dict[GateKind, TruthTable] = {
    GateKind.CONST0: TruthTable(0, 0),
    GateKind.CONST1: TruthTable(0, 1),
    GateKind.BUF: TruthTable(1, 0b10),
    GateKind.INV: TruthTable(1, 0b01),
    GateKind.AND2: TruthTable(2, 0x8),
    GateKind.NAND2: TruthTable(2, 0x7),
    GateKind.OR2: TruthTable(2, 0xE),
    GateKind.NOR2: TruthTable(2, 0x1),
    GateKind.XOR2: TruthTable(2, 0x6),
    GateKind.XNOR2: TruthTable(2, 0x9),
    GateKind.MAJ3: TruthTable(3, 0xE8),
}

_KERNELS: Dict[GateKind, Callable[..., np.ndarray]] = {
    GateKind.BUF: lambda a: a,
    GateKind.INV: lambda a: ~a,
    GateKind.AND2: lambda a, b: a & b,
    GateKind.NAND2: lambda a, b: ~(a & b),
    GateKind.OR2: lambda a, b: a | b,
    GateKind.NOR2: lambda a, b: ~(a | b),
    GateKind.XOR2: lambda a, b: a ^ b,
    GateKind.XNOR2: lambda a, b: ~(a ^ b),
    GateKind.MAJ3: lambda a, b, c: (a & b) | (a & c) | (b & c),
}


def recognize(table: TruthTable) -> GateKind:
    for kind, known in KIND_TABLES.items():
        if known == table:
            return kind
    return GateKind.LUT


@dataclass(frozen=True)
class Gate:
    output: str
    kind: GateKind
    inputs: Tuple[str, ...] = ()
    table: Optional[TruthTable] = None

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if self.kind is GateKind.LUT:
            if self.table is None or self.table.var_count != len(self.inputs):
                raise ContractError(f"LUT '{self.output}' needs a table over its {len(self.inputs)} inputs")
        else:
            arity = KIND_TABLES[self.kind].var_count
            if len(self.inputs) != arity:
                raise ContractError(f"{self.kind.value} '{self.output}' takes {arity} inputs, got {len(self.inputs)}")
            if self.table is not None:
                raise ContractError("Only LUT gates carry an explicit table")

    @classmethod
    def from_table(cls, output: str, inputs: Sequence[str], table: TruthTable) -> "Gate":
        kind = recognize(table) if table.var_count <= 3 else GateKind.LUT
        return cls(output, kind, tuple(inputs), table if kind is GateKind.LUT else None)

    def truth_table(self) -> TruthTable:
        return self.table if self.kind is GateKind.LUT else KIND_TABLES[self.kind]

    def evaluate(self, values: Sequence[np.ndarray], lanes: int) -> np.ndarray:
        if self.kind is GateKind.CONST0:
            return np.zeros(lanes, dtype=bool)
        if self.kind is GateKind.CONST1:
            return np.ones(lanes, dtype=bool)
        kernel = _KERNELS.get(self.kind)
        if kernel is not None:
            return kernel(*values)
        index = np.zeros(lanes, dtype=np.int64)
        for j, value in enumerate(values):
            index |= value.astype(np.int64) << j
        return self.table.to_array()[index]


@dataclass(frozen=True)
class Flop:
    q: str
    d: str
    clock: Optional[str] = None
    init: int = 0


@dataclass(frozen=True)
class TlgStage:
    """Nível de TLG como aparece no netlist: só a estrutura visível (sem classes de Vt)."""
    output: str
    spec: DifferentialSpec
    variant: CellVariant

    def __post_init__(self):
        visible = self.spec.visible()
        object.__setattr__(self, "spec", DifferentialSpec(visible.left, visible.right, (), self.variant.n))


@dataclass(frozen=True)
class TlgInstance:
    """
    Instância TLG: a saída do último nível é registrada (``q``); saídas de níveis
    intermediários são nets internas avaliadas no mesmo ciclo.
    """
    name: str
    stages: Tuple[TlgStage, ...]
    clock: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if not self.stages:
            raise ContractError(f"TLG instance '{self.name}' has no stages")

    @property
    def q(self) -> str:
        return self.stages[-1].output

    @property
    def internal_nets(self) -> Tuple[str, ...]:
        return tuple(stage.output for stage in self.stages[:-1])

    def stage_name(self, index: int) -> str:
        return self.name if len(self.stages) == 1 else f"{self.name}.{index}"

    def named_stages(self) -> List[Tuple[str, TlgStage]]:
        return [(self.stage_name(i), stage) for i, stage in enumerate(self.stages)]

    def input_nets(self) -> Tuple[str, ...]:
        internal = set(self.internal_nets)
        seen: Dict[str, None] = {}
        for stage in self.stages:
            for net in stage.spec.nets():
                if net not in internal:
                    seen.setdefault(net)
        return tuple(seen)

    @property
    def obfuscated(self) -> bool:
        return any(stage.variant.k > 0 for stage in self.stages)


@dataclass
class Netlist:
    name: str = "top"
    inputs: List[str] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)
    gates: Dict[str, Gate] = field(default_factory=dict)
    flops: Dict[str, Flop] = field(default_factory=dict)
    tlgs: Dict[str, TlgInstance] = field(default_factory=dict)
    keyfile: Optional[str] = None

    # -- construção -----------------------------------------------------------

    def _claim(self, net: str, line: Optional[int] = None) -> None:
        taken = (
            net in self.gates or net in self.flops or net in self.inputs
            or any(net == inst.q or net in inst.internal_nets for inst in self.tlgs.values())
        )
        if taken:
            raise MultipleDriversError(net, line)

    def add_input(self, net: str, line: Optional[int] = None) -> None:
        self._claim(net, line)
        self.inputs.append(net)

    def add_gate(self, gate: Gate, line: Optional[int] = None) -> Gate:
        self._claim(gate.output, line)
        self.gates[gate.output] = gate
        return gate

    def add_flop(self, flop: Flop, line: Optional[int] = None) -> Flop:
        self._claim(flop.q, line)
        self.flops[flop.q] = flop
        return flop

    def add_tlg(self, inst: TlgInstance, line: Optional[int] = None) -> TlgInstance:
        if inst.name in self.tlgs:
            raise NetlistError(f"Duplicate TLG instance '{inst.name}'")
        for stage in inst.stages:
            self._claim(stage.output, line)
        self.tlgs[inst.name] = inst
        return inst

    def copy(self) -> "Netlist":
        return Netlist(self.name, list(self.inputs), list(self.outputs), dict(self.gates),
                       dict(self.flops), dict(self.tlgs), self.keyfile)

    # -- consultas --------------------------------------------------------------

    def drivers(self) -> Dict[str, str]:
        """net -> tipo de driver ("input", "gate", "flop", "tlg", "tlg-internal")."""
        table: Dict[str, str] = {net: "input" for net in self.inputs}
        table.update({net: "gate" for net in self.gates})
        table.update({net: "flop" for net in self.flops})
        for inst in self.tlgs.values():
            table.update({net: "tlg-internal" for net in inst.internal_nets})
            table[inst.q] = "tlg"
        return table

    def tlg_by_q(self) -> Dict[str, TlgInstance]:
        return {inst.q: inst for inst in self.tlgs.values()}

    def sources(self) -> Set[str]:
        """Nets que iniciam a lógica combinacional: entradas primárias e saídas registradas."""
        return set(self.inputs) | set(self.flops) | {inst.q for inst in self.tlgs.values()}

    def readers(self) -> Dict[str, List[Tuple[str, str]]]:
        table: Dict[str, List[Tuple[str, str]]] = {}
        for gate in self.gates.values():
            for net in gate.inputs:
                table.setdefault(net, []).append(("gate", gate.output))
        for flop in self.flops.values():
            table.setdefault(flop.d, []).append(("flop", flop.q))
        for inst in self.tlgs.values():
            for net in inst.input_nets():
                table.setdefault(net, []).append(("tlg", inst.name))
        for net in self.outputs:
            table.setdefault(net, []).append(("output", net))
        return table

    def sweep_dead_cells(self) -> int:
        """Remove portas sem leitores até o ponto fixo; retorna quantas saíram."""
        removed = 0
        while True:
            readers = self.readers()
            dead = [net for net in self.gates if net not in readers]
            if not dead:
                return removed
            for net in dead:
                del self.gates[net]
            removed += len(dead)

    def nets(self) -> Set[str]:
        nets = set(self.drivers())
        nets.update(self.readers())
        return nets

    def clocks(self) -> Set[Optional[str]]:
        return {f.clock for f in self.flops.values()} | {t.clock for t in self.tlgs.values()}

    def comb_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for gate in self.gates.values():
            graph.add_node(gate.output)
            for net in gate.inputs:
                graph.add_edge(net, gate.output)
        return graph

    def topo_gates(self) -> List[Gate]:
        graph = self.comb_graph()
        try:
            order = list(nx.topological_sort(graph))
        except nx.NetworkXUnfeasible:
            cycle = nx.find_cycle(graph)
            raise CombinationalLoopError([edge[0] for edge in cycle] + [cycle[-1][1]])
        return [self.gates[net] for net in order if net in self.gates]

    def check(self) -> None:
        """Valida drivers únicos, referências resolvidas e ausência de laço combinacional."""
        driven = self.drivers()
        undriven = sorted(net for net in self.readers() if net not in driven)
        if undriven:
            raise NetlistError("Undriven nets: " + ", ".join(undriven))
        self.topo_gates()

    def transitive_fanin(self, nets: Iterable[str]) -> Set[str]:
        """Nets alcançadas voltando pelas portas, incluindo as fontes encontradas."""
        seen: Set[str] = set()
        stack = list(nets)
        while stack:
            net = stack.pop()
            if net in seen:
                continue
            seen.add(net)
            gate = self.gates.get(net)
            if gate is not None:
                stack.extend(gate.inputs)
        return seen

    def sequential_depth(self) -> int:
        """Maior número de elementos registrados num caminho entrada -> saída (limitado a MAX_FLUSH)."""
        sources = self.sources()
        elements: Dict[str, Tuple[str, ...]] = {f.q: (f.d,) for f in self.flops.values()}
        elements.update({t.q: t.input_nets() for t in self.tlgs.values()})
        graph = nx.DiGraph()
        graph.add_node("@in")
        graph.add_node("@out")

        def origin(net: str) -> str:
            return net if net in elements else "@in"

        for q, nets in elements.items():
            graph.add_node(q)
            for src in self.transitive_fanin(nets) & sources:
                graph.add_edge(origin(src), q)
        for net in self.outputs:
            for src in self.transitive_fanin([net]) & sources:
                graph.add_edge(origin(src), "@out")
        if not nx.is_directed_acyclic_graph(graph):
            return MAX_FLUSH
        depth: Dict[str, int] = {}
        for node in nx.topological_sort(graph):
            best = max((depth[p] for p in graph.predecessors(node)), default=0)
            depth[node] = best + (1 if node in elements else 0)
        return min(depth["@out"], MAX_FLUSH)


@dataclass
class NetlistStats:
    cells: Dict[str, int]
    combinational: int
    sequential: int
    flops: int
    tlgs: int
    tlgs_by_variant: Dict[str, int]
    nets: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "cells": dict(sorted(self.cells.items())),
            "combinational": self.combinational,
            "sequential": self.sequential,
            "flops": self.flops,
            "tlgs": self.tlgs,
            "tlgs_by_variant": dict(sorted(self.tlgs_by_variant.items())),
            "nets": self.nets,
        }


def netlist_stats(nl: Netlist) -> NetlistStats:
    kinds = Counter(gate.kind.value for gate in nl.gates.values())
    variants = Counter(stage.variant.name for inst in nl.tlgs.values() for stage in inst.stages)
    return NetlistStats(
        cells=dict(kinds),
        combinational=len(nl.gates),
        sequential=len(nl.flops) + len(nl.tlgs),
        flops=len(nl.flops),
        tlgs=len(nl.tlgs),
        tlgs_by_variant=dict(variants),
        nets=len(nl.nets()),
    )


def cone_truth_table(nl: Netlist, leaves: Sequence[str], root: str) -> TruthTable:
    """Função da net ``root`` sobre ``leaves`` (variável j+1 = leaves[j])."""
    pts = input_patterns(len(leaves))
    lanes = pts.shape[0]
    values: Dict[str, np.ndarray] = {net: pts[:, j] for j, net in enumerate(leaves)}

    def value(net: str) -> np.ndarray:
        if net in values:
            return values[net]
        gate = nl.gates.get(net)
        if gate is None:
            raise ContractError(f"Leaves do not cut net '{net}' from the sources of '{root}'")
        stack = [(net, False)]
        while stack:
            current, expanded = stack.pop()
            if current in values:
                continue
            g = nl.gates.get(current)
            if g is None:
                raise ContractError(f"Leaves do not cut net '{current}' from the sources of '{root}'")
            if expanded:
                values[current] = g.evaluate([values[i] for i in g.inputs], lanes)
            else:
                stack.append((current, True))
                stack.extend((i, False) for i in g.inputs if i not in values)
        return values[net]

    return TruthTable(len(leaves), pack_bits(value(root)))
