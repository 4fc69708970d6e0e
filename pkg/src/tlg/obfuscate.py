"""
Ofuscação por slots de Vt alto: inserção de decoys, chave secreta, tamanho do
espaço de ofuscação e enumeração das funções candidatas de um atacante que lê
sinais e polaridades mas não enxerga a classe de Vt.
"""
import itertools
import math
import random
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import CapacityError, ContractError, TlgError
from src.logic.boolfn import MAX_VARS, TruthTable
from src.structlog_support import get_structlog_logger
from src.tlg.slots import (
    LIBRARY,
    CellVariant,
    DifferentialSpec,
    Slot,
    VtClass,
    side_conduction,
    spec_to_truth_table,
)

logger = get_structlog_logger(component="obfuscate")

AMBIGUITY_MAX_VARS = MAX_VARS


@dataclass(frozen=True)
class InstanceKey:
    """Entrada da chave para um nível de TLG: slots completos, com a classe de Vt."""
    left: Tuple[Slot, ...]
    right: Tuple[Slot, ...]
    variant: CellVariant

    def high_count(self) -> Tuple[int, int]:
        return (
            sum(1 for s in self.left if s.vt is VtClass.HIGH),
            sum(1 for s in self.right if s.vt is VtClass.HIGH),
        )

    def decoys(self) -> Tuple[Slot, ...]:
        return tuple(s for s in self.left + self.right if s.vt is VtClass.HIGH)


@dataclass
class ObfuscationKey:
    seed: Optional[int] = None
    entries: Dict[str, InstanceKey] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, name: str) -> Optional[InstanceKey]:
        return self.entries.get(name)

    def add(self, name: str, entry: InstanceKey) -> None:
        if name in self.entries:
            raise ContractError(f"Duplicate key entry '{name}'")
        self.entries[name] = entry


def apply_key(visible: DifferentialSpec, entry: InstanceKey) -> DifferentialSpec:
    """Reaplica as classes de Vt da chave sobre a estrutura visível (mesma ordem de slots)."""
    for side, expected in (("left", entry.left), ("right", entry.right)):
        slots = getattr(visible, side)
        if len(slots) != len(expected):
            raise ContractError(f"Key entry has {len(expected)} {side} slots, cell has {len(slots)}")
        for got, want in zip(slots, expected):
            if got.with_vt(VtClass.LOW) != want.with_vt(VtClass.LOW):
                raise ContractError(f"Key entry does not match {side} slot {got.token!r}")
    return visible.with_vt([s.vt for s in entry.left], [s.vt for s in entry.right])


def _as_rng(seed: Union[int, random.Random, None]) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def obfuscate_instance(
    spec: DifferentialSpec,
    variant: CellVariant,
    decoy_pool: Iterable[str],
    seed: Union[int, random.Random, None] = None,
) -> Tuple[DifferentialSpec, InstanceKey]:
    """
    Completa a especificação até ``variant.n`` slots válidos e acrescenta ``k``
    decoys HIGH por lado, com net e polaridade sorteadas do ``decoy_pool``.
    As posições dos slots são embaralhadas para que a ordem não denuncie os
    decoys. Retorna a especificação com as classes de Vt (a verdade) e a chave.
    """
    pool = sorted(set(decoy_pool))
    width = max(len(spec.left), len(spec.right))
    if width > variant.n:
        raise CapacityError(f"Spec needs {width} slots per side, {variant.name} has {variant.n}")
    if variant.k and not pool:
        raise ContractError("Decoy pool is empty")
    rng = _as_rng(seed)

    def side(slots: Tuple[Slot, ...]) -> Tuple[Slot, ...]:
        padded = list(slots) + [Slot.tie1()] * (variant.n - len(slots))
        if not variant.k:
            return tuple(padded)
        for _ in range(variant.k):
            net = rng.choice(pool)
            padded.append(Slot.signal(net, rng.random() < 0.5, VtClass.HIGH))
        rng.shuffle(padded)
        return tuple(padded)

    left = side(spec.left)
    right = side(spec.right)
    result = replace(spec, left=left, right=right, cell_size=variant.n, reserved=0)
    variables = result.variables()
    if len(variables) <= MAX_VARS:
        before = spec_to_truth_table(spec, variables=variables)
        if spec_to_truth_table(result, variables=variables) != before:
            raise TlgError("Decoy insertion changed the cell function")
    entry = InstanceKey(left, right, variant)
    logger.debug("Instância ofuscada", variant=variant.name, decoys=len(entry.decoys()))
    return result, entry


def obfuscation_space(n: int, k: int) -> int:
    """Número de formas de escolher os k slots HIGH em cada lado: C(n+k, k)^2."""
    if n < 0 or k < 0:
        raise ContractError(f"n and k must be >= 0, got ({n}, {k})")
    return math.comb(n + k, k) ** 2


def table_reading_space(total: int, k: int) -> int:
    """Leitura alternativa em que TLG-N conta N slots físicos por lado: C(N, k)^2."""
    if total < 0 or k < 0 or k > total:
        raise ContractError(f"Invalid table reading ({total}, {k})")
    return math.comb(total, k) ** 2


def library_summary() -> List[Dict[str, int]]:
    return [
        {
            "n": v.n,
            "k": v.k,
            "space": obfuscation_space(v.n, v.k),
            "table_reading": table_reading_space(v.n, v.k),
        }
        for v in LIBRARY
    ]


def characterization_view(spec: DifferentialSpec) -> DifferentialSpec:
    """Célula como é caracterizada: entradas de decoy (HIGH) ligadas a 1."""
    def tie(slots):
        return tuple(Slot.tie1(VtClass.HIGH) if s.vt is VtClass.HIGH else s for s in slots)
    return replace(spec, left=tie(spec.left), right=tie(spec.right))


def _hypothesis_sums(conduction: np.ndarray, k: int) -> np.ndarray:
    """Soma de condução por hipótese (k slots marcados HIGH e retirados)."""
    total = conduction.sum(axis=0, dtype=np.int64)
    if k == 0:
        return total[None, :]
    combos = np.array(list(itertools.combinations(range(conduction.shape[0]), k)), dtype=np.int64)
    removed = conduction[combos].sum(axis=1, dtype=np.int64)
    return total[None, :] - removed


def _rows_to_ints(matrix: np.ndarray) -> List[int]:
    packed = np.packbits(matrix, axis=-1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def attacker_candidates(
    spec: DifferentialSpec,
    variant: CellVariant,
    prune_ties: bool = False,
    variables: Optional[Sequence[str]] = None,
) -> FrozenSet[TruthTable]:
    """
    Todas as tabelas que o atacante precisa considerar: para cada escolha de
    ``variant.k`` slots HIGH por lado, a função resultante.

    Empates: a saída é 1 só quando a corrente esquerda supera estritamente a
    direita. Sem ``prune_ties`` (padrão) uma entrada empatada resolve para 0 e a
    hipótese continua no conjunto; com ``prune_ties`` toda hipótese que empata em
    alguma entrada é descartada, porque a célula real não teria saída definida.
    """
    visible = spec.visible()
    if len(visible.left) != variant.physical_slots or len(visible.right) != variant.physical_slots:
        raise ContractError(
            f"{variant.name} has {variant.physical_slots} slots per side, spec has "
            f"{len(visible.left)}/{len(visible.right)}"
        )
    variables = tuple(visible.variables() if variables is None else variables)
    if len(variables) > MAX_VARS:
        raise CapacityError(f"{len(variables)} variables exceed the limit of {MAX_VARS}")
    left = _hypothesis_sums(side_conduction(visible.left, variables), variant.k)
    right = _hypothesis_sums(side_conduction(visible.right, variables), variant.k)
    diff = left[:, None, :] - right[None, :, :]
    diff = diff.reshape(-1, diff.shape[-1])
    if prune_ties:
        diff = diff[~(diff == 0).any(axis=1)]
    tables = frozenset(TruthTable(len(variables), bits) for bits in _rows_to_ints(diff > 0))
    logger.debug("Candidatos do atacante", variant=variant.name, hypotheses=obfuscation_space(variant.n, variant.k),
                 distinct=len(tables), prune_ties=prune_ties)
    return tables


@dataclass
class AmbiguityReport:
    candidates: Dict[str, int]
    skipped: List[str]

    @property
    def obfuscated(self) -> int:
        return len(self.candidates)

    @property
    def product(self) -> int:
        return math.prod(self.candidates.values())

    @property
    def ambiguous(self) -> int:
        """Instâncias com pelo menos dois candidatos (cada uma dobra o limite inferior)."""
        return sum(1 for count in self.candidates.values() if count >= 2)

    @property
    def log2_product(self) -> float:
        return math.log2(self.product) if self.candidates else 0.0

    def to_dict(self) -> Dict[str, object]:
        return {
            "instances": dict(sorted(self.candidates.items())),
            "skipped": sorted(self.skipped),
            "obfuscated": self.obfuscated,
            "product": str(self.product),
            "log2_product": round(self.log2_product, 6),
            "lower_bound_exponent": self.ambiguous,
        }


def ambiguity_report(
    stages: Mapping[str, Tuple[DifferentialSpec, CellVariant]],
    prune_ties: bool = False,
) -> AmbiguityReport:
    """
    Ambiguidade de um circuito: produto do número de candidatos por nível ofuscado.
    Níveis com mais variáveis que o limite exaustivo são pulados e registrados.
    """
    counts: Dict[str, int] = {}
    skipped: List[str] = []
    for name in sorted(stages):
        spec, variant = stages[name]
        if variant.k == 0:
            continue
        if len(spec.variables()) > AMBIGUITY_MAX_VARS:
            logger.info("Nível ignorado na ambiguidade", stage=name, variables=len(spec.variables()))
            skipped.append(name)
            continue
        counts[name] = len(attacker_candidates(spec, variant, prune_ties))
    report = AmbiguityReport(counts, skipped)
    logger.info("Ambiguidade do circuito", obfuscated=report.obfuscated,
                log2_product=round(report.log2_product, 3), lower_bound_exponent=report.ambiguous)
    return report
