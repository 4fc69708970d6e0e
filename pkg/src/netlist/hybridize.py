"""
Hibridização: cada flop cujo cone de entrada tem um corte que é função de limiar
(ou XOR3, com a macro habilitada) é fundido com esse cone numa única instância TLG
ofuscada. A análise por flop é independente e pode rodar em threads; a mutação
do netlist acontece numa fase única, em ordem de nome do flop, com o gerador de
números aleatórios compartilhado.
"""
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.errors import CapacityError, UnsupportedFeatureError
from src.logic.boolfn import TruthTable
from src.netlist.cuts import MAX_CUT_LEAVES, Cut, CutEnumerator
from src.netlist.model import Flop, Netlist, TlgInstance, TlgStage, netlist_stats
from src.structlog_support import get_structlog_logger
from src.tlg.mapping import PARITY3, map_truth_table, xor3_macro
from src.tlg.obfuscate import ObfuscationKey, obfuscate_instance
from src.tlg.slots import CELL_SIZES, LIBRARY, CellVariant, DifferentialSpec

logger = get_structlog_logger(component="hybridize")

HYBRID_SUM_LIMIT = 9
DEFAULT_CUT_LIMIT = 32


@dataclass(frozen=True)
class Candidate:
    flop: Flop
    cut: Cut
    leaves: Tuple[str, ...]
    absorbed: Tuple[str, ...]
    stages: Tuple[Tuple[str, DifferentialSpec], ...]
    macro: bool = False

    @property
    def size(self) -> int:
        return sum(spec.cell_size for _, spec in self.stages)

    def rank(self) -> Tuple:
        return (-len(self.absorbed), self.size, self.leaves)


@dataclass
class HybridReport:
    flops_before: int
    combinational_before: int
    combinational_after: int = 0
    absorbed: Dict[str, int] = field(default_factory=dict)
    by_variant: Dict[str, int] = field(default_factory=dict)
    skipped: Dict[str, str] = field(default_factory=dict)
    swept: int = 0

    @property
    def tlgs(self) -> int:
        return len(self.absorbed)

    def to_dict(self) -> Dict[str, object]:
        return {
            "flops_before": self.flops_before,
            "tlgs": self.tlgs,
            "absorbed_cells": sum(self.absorbed.values()),
            "absorbed": dict(sorted(self.absorbed.items())),
            "tlgs_by_variant": dict(sorted(self.by_variant.items())),
            "combinational_before": self.combinational_before,
            "combinational_after": self.combinational_after,
            "swept": self.swept,
            "skipped": dict(sorted(self.skipped.items())),
        }


@dataclass
class HybridResult:
    netlist: Netlist
    key: ObfuscationKey
    report: HybridReport


def choose_variant(cell_size: int, k: int) -> CellVariant:
    """Maior k da biblioteca que não passa do pedido para o tamanho de célula dado."""
    allowed = [v.k for v in LIBRARY if v.n == cell_size and v.k <= k]
    return CellVariant(cell_size, max(allowed) if allowed else 0)


def absorbed_cells(nl: Netlist, readers, cut: Cut, flop: Flop, order: Dict[str, int]) -> Tuple[str, ...]:
    """
    Células do cone que somem junto com o flop: a raiz só é absorvida se o flop é
    seu único leitor, e cada célula só se todos os seus leitores forem absorvidos.
    """
    absorbed: Set[str] = set()
    for net in sorted(cut.cells, key=lambda n: -order[n]):
        users = readers.get(net, [])
        if users and all(
            (kind == "gate" and ref in absorbed) or (kind == "flop" and ref == flop.q)
            for kind, ref in users
        ):
            absorbed.add(net)
    return tuple(sorted(absorbed))


class _Analyzer:
    def __init__(self, nl: Netlist, max_inputs: int, k: int, xor_macro: bool, cut_limit: Optional[int]):
        self.nl = nl
        self.k = k
        self.xor_macro = xor_macro
        self.enumerator = CutEnumerator(nl, max_inputs, cut_limit)
        self.readers = nl.readers()
        self.order = {gate.output: i for i, gate in enumerate(nl.topo_gates())}

    def _stages(self, flop: Flop, tt: TruthTable, leaves: Tuple[str, ...]):
        try:
            mapped = map_truth_table(tt, leaves, k=self.k, sum_limit=HYBRID_SUM_LIMIT, sizes=CELL_SIZES)
        except CapacityError:
            mapped = None
        if mapped is not None:
            return ((flop.q, mapped.spec),), False
        if self.xor_macro and tt == PARITY3:
            first, second = xor3_macro(leaves, internal=f"tlg_{flop.q}_g", output=flop.q, k=self.k)
            return ((first.output, first.spec), (second.output, second.spec)), True
        return None, False

    def analyze(self, flop: Flop) -> Tuple[Flop, Optional[Candidate], str]:
        if flop.init != 0:
            return flop, None, f"init value {flop.init}"
        # o enumerador já devolve os cortes do maior cone para o menor
        best: Optional[Candidate] = None
        for cut in self.enumerator.cuts(flop.d):
            absorbed = absorbed_cells(self.nl, self.readers, cut, flop, self.order)
            if not absorbed:
                continue
            if best is not None and len(absorbed) < len(best.absorbed):
                continue
            tt = cut.truth_table(self.nl)
            support = sorted(tt.support())
            leaves = tuple(cut.leaves[v - 1] for v in support)
            stages, macro = self._stages(flop, tt.project(support), leaves)
            if stages is None:
                continue
            candidate = Candidate(flop, cut, leaves, absorbed, stages, macro)
            if best is None or candidate.rank() < best.rank():
                best = candidate
        if best is None:
            return flop, None, "no threshold cut"
        return flop, best, ""


def decoy_pool(nl: Netlist, leaves: Sequence[str], exclude: Sequence[str]) -> List[str]:
    """Folhas, o fan-in combinacional delas e as entradas primárias, sem as nets excluídas."""
    pool = nl.transitive_fanin(leaves) | set(nl.inputs)
    return sorted(pool - set(exclude))


def hybridize(
    nl: Netlist,
    max_inputs: int = MAX_CUT_LEAVES,
    k: int = 2,
    xor_macro: bool = False,
    seed: Optional[int] = 42,
    threads: Optional[int] = None,
    cut_limit: Optional[int] = DEFAULT_CUT_LIMIT,
) -> HybridResult:
    nl.check()
    clocks = {c for c in nl.clocks()}
    if len(clocks) > 1:
        raise UnsupportedFeatureError(f"Multiple clock domains: {sorted(str(c) for c in clocks)}")

    before = netlist_stats(nl)
    report = HybridReport(flops_before=before.flops, combinational_before=before.combinational)
    analyzer = _Analyzer(nl, max_inputs, k, xor_macro, cut_limit)
    flops = [nl.flops[q] for q in sorted(nl.flops)]
    if threads and threads > 1:
        # memoriza os cortes antes de dividir o trabalho
        for flop in flops:
            analyzer.enumerator.leaf_sets(flop.d)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(analyzer.analyze, flops))
    else:
        results = [analyzer.analyze(flop) for flop in flops]

    out = nl.copy()
    key = ObfuscationKey(seed=seed)
    rng = random.Random(seed)
    variants: Counter = Counter()
    for flop, candidate, reason in results:
        if candidate is None:
            report.skipped[flop.q] = reason
            logger.debug("Flop mantido em CMOS", flop=flop.q, reason=reason)
            continue
        name = f"tlg_{flop.q}"
        internal = [output for output, _ in candidate.stages[:-1]]
        pool = decoy_pool(nl, candidate.leaves, [flop.q] + internal)
        stages: List[TlgStage] = []
        for index, (output, spec) in enumerate(candidate.stages):
            variant = choose_variant(spec.cell_size, k)
            keyed, entry = obfuscate_instance(spec, variant, pool, rng)
            stages.append(TlgStage(output, keyed, variant))
            if variant.k:
                key.add(name if len(candidate.stages) == 1 else f"{name}.{index}", entry)
            variants[variant.name] += 1
        del out.flops[flop.q]
        for net in candidate.absorbed:
            del out.gates[net]
        out.add_tlg(TlgInstance(name, tuple(stages), flop.clock))
        report.absorbed[name] = len(candidate.absorbed)
        logger.debug("Flop absorvido", flop=flop.q, leaves=len(candidate.leaves),
                     absorbed=len(candidate.absorbed), macro=candidate.macro)

    report.swept = out.sweep_dead_cells()
    out.check()
    report.by_variant = dict(variants)
    report.combinational_after = len(out.gates)
    logger.info("Hibridização concluída", tlgs=report.tlgs, absorbed=sum(report.absorbed.values()),
                combinational_before=report.combinational_before,
                combinational_after=report.combinational_after, swept=report.swept)
    return HybridResult(out, key, report)
