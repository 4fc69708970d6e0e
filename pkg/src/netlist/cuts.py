"""
Enumeração de cortes k-viáveis (conjuntos de folhas que separam uma net das fontes).

Os cortes de uma porta são a união de um corte de cada entrada, mais o corte
trivial {net}; cortes que contêm outro corte da mesma net são descartados, de
modo que só sobram cortes mínimos com até ``max_leaves`` folhas.
"""
import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from src.errors import ContractError
from src.logic.boolfn import TruthTable
from src.netlist.model import Netlist, cone_truth_table

MAX_CUT_LEAVES = 9


@dataclass(frozen=True)
class Cut:
    root: str
    leaves: Tuple[str, ...]
    cells: Tuple[str, ...]

    @property
    def trivial(self) -> bool:
        return self.leaves == (self.root,)

    def truth_table(self, nl: Netlist) -> TruthTable:
        return cone_truth_table(nl, self.leaves, self.root)


def _minimalize(cuts: Sequence[FrozenSet[str]]) -> List[FrozenSet[str]]:
    kept: List[FrozenSet[str]] = []
    for cut in sorted(set(cuts), key=lambda c: (len(c), sorted(c))):
        if not any(other <= cut for other in kept):
            kept.append(cut)
    return kept


def cone_cells(nl: Netlist, root: str, leaves: Sequence[str]) -> Tuple[str, ...]:
    """Portas entre as folhas e a raiz (a raiz inclusa se for porta)."""
    stop = set(leaves)
    seen = set()
    stack = [root]
    while stack:
        net = stack.pop()
        if net in seen or net in stop or net not in nl.gates:
            continue
        seen.add(net)
        stack.extend(nl.gates[net].inputs)
    return tuple(sorted(seen))


class CutEnumerator:
    """Cortes por net com memorização entre raízes do mesmo netlist."""

    def __init__(self, nl: Netlist, max_leaves: int = MAX_CUT_LEAVES, cut_limit: Optional[int] = None):
        if not 1 <= max_leaves <= MAX_CUT_LEAVES:
            raise ContractError(f"max_leaves must be in 1..{MAX_CUT_LEAVES}, got {max_leaves}")
        self.nl = nl
        self.max_leaves = max_leaves
        self.cut_limit = cut_limit
        self._order = {gate.output: i for i, gate in enumerate(nl.topo_gates())}
        self._memo: Dict[str, List[FrozenSet[str]]] = {}

    def _compute(self, net: str) -> List[FrozenSet[str]]:
        gate = self.nl.gates.get(net)
        if gate is None:
            return [frozenset((net,))]
        if not gate.inputs:
            return [frozenset()]
        pools = [self._memo[i] for i in gate.inputs]
        merged = [frozenset((net,))]
        for combo in itertools.product(*pools):
            union = frozenset().union(*combo)
            if len(union) <= self.max_leaves:
                merged.append(union)
        cuts = _minimalize(merged)
        if self.cut_limit is not None and len(cuts) > self.cut_limit:
            cuts = cuts[: self.cut_limit]
        return cuts

    def leaf_sets(self, root: str) -> List[FrozenSet[str]]:
        if root not in self._memo:
            pending = sorted(
                (n for n in self.nl.transitive_fanin([root]) if n not in self._memo),
                key=lambda n: self._order.get(n, -1),
            )
            for net in pending:
                self._memo[net] = self._compute(net)
        return self._memo[root]

    def cuts(self, root: str) -> List[Cut]:
        result = [
            Cut(root, tuple(sorted(leaves)), cone_cells(self.nl, root, leaves))
            for leaves in self.leaf_sets(root)
        ]
        result.sort(key=lambda c: (-len(c.cells), len(c.leaves), c.leaves))
        return result


def enumerate_cuts(
    nl: Netlist, root: str, max_leaves: int = MAX_CUT_LEAVES, cut_limit: Optional[int] = None
) -> List[Cut]:
    """Cortes mínimos da net ``root`` com até ``max_leaves`` folhas, maior cone primeiro."""
    return CutEnumerator(nl, max_leaves, cut_limit).cuts(root)
