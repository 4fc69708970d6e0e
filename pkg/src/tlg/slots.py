"""
Modelo da célula TLG diferencial: slots de entrada, especificação esquerda/direita
e semântica estática idealizada da corrida entre as duas redes.

Convenção pMOS: um slot conduz quando a tensão aplicada à porta é 0 lógico.
- TIE0 conduz sempre; TIE1 nunca conduz.
- SIGNAL(x, verdadeiro) conduz se x = 0; SIGNAL(x, complementado) conduz se x = 1.
Somente slots de Vt baixo (LOW) entram na contagem; slots HIGH ficam logicamente
removidos.
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.errors import CapacityError, ContractError, TieViolationError
from src.logic.boolfn import MAX_VARS, TruthTable, input_patterns, pack_bits


class VtClass(str, Enum):
    LOW = "LOW"
    HIGH = "HIGH"


class Drive(str, Enum):
    SIGNAL = "SIGNAL"
    TIE0 = "TIE0"
    TIE1 = "TIE1"


@dataclass(frozen=True)
class Slot:
    drive: Drive
    net: Optional[str] = None
    complemented: bool = False
    vt: VtClass = VtClass.LOW

    def __post_init__(self):
        if self.drive is Drive.SIGNAL and not self.net:
            raise ContractError("SIGNAL slot requires a net")
        if self.drive is not Drive.SIGNAL and self.net is not None:
            raise ContractError(f"{self.drive.value} slot cannot reference a net")

    @classmethod
    def signal(cls, net: str, complemented: bool = False, vt: VtClass = VtClass.LOW) -> "Slot":
        return cls(Drive.SIGNAL, net, complemented, vt)

    @classmethod
    def tie0(cls, vt: VtClass = VtClass.LOW) -> "Slot":
        return cls(Drive.TIE0, vt=vt)

    @classmethod
    def tie1(cls, vt: VtClass = VtClass.LOW) -> "Slot":
        return cls(Drive.TIE1, vt=vt)

    @classmethod
    def parse(cls, token: str) -> "Slot":
        token = token.strip()
        if token == "0":
            return cls.tie0()
        if token == "1":
            return cls.tie1()
        if token.startswith("~"):
            return cls.signal(token[1:], True)
        return cls.signal(token)

    def with_vt(self, vt: VtClass) -> "Slot":
        return replace(self, vt=vt)

    def conducts(self, values: Mapping[str, int]) -> bool:
        if self.drive is Drive.TIE0:
            return True
        if self.drive is Drive.TIE1:
            return False
        value = bool(values[self.net])
        return value if self.complemented else not value

    def conduction(self, values: Mapping[str, np.ndarray], lanes: int) -> np.ndarray:
        """Versão vetorizada de ``conducts`` sobre vetores booleanos por net."""
        if self.drive is Drive.TIE0:
            return np.ones(lanes, dtype=bool)
        if self.drive is Drive.TIE1:
            return np.zeros(lanes, dtype=bool)
        value = values[self.net]
        return value.copy() if self.complemented else ~value

    @property
    def token(self) -> str:
        if self.drive is Drive.TIE0:
            return "0"
        if self.drive is Drive.TIE1:
            return "1"
        return ("~" if self.complemented else "") + self.net

    def sort_key(self, order: Mapping[str, int]) -> Tuple:
        rank = {Drive.SIGNAL: 0, Drive.TIE0: 1, Drive.TIE1: 2}[self.drive]
        return (rank, order.get(self.net, len(order)) if self.net else 0, self.net or "", self.complemented)


@dataclass(frozen=True)
class DifferentialSpec:
    """
    Atribuição de slots às redes esquerda e direita de uma TLG.

    ``inputs`` fixa a ordem das variáveis reais (ordem da tabela-verdade);
    ``cell_size`` é o número de slots válidos por lado após o encaixe na
    biblioteca (0 enquanto a especificação não foi encaixada) e ``reserved``
    conta as posições de decoy por lado ainda não preenchidas pelo ofuscador.
    """
    left: Tuple[Slot, ...]
    right: Tuple[Slot, ...]
    inputs: Tuple[str, ...] = ()
    cell_size: int = 0
    reserved: int = 0

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def slots(self) -> Tuple[Slot, ...]:
        return self.left + self.right

    def nets(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for slot in self.slots:
            if slot.net is not None:
                seen.setdefault(slot.net)
        return tuple(seen)

    def variables(self) -> Tuple[str, ...]:
        """Entradas reais seguidas das demais nets referenciadas (decoys), sem repetição."""
        extra = [net for net in self.nets() if net not in self.inputs]
        return self.inputs + tuple(extra)

    def high_count(self) -> Tuple[int, int]:
        return (
            sum(1 for s in self.left if s.vt is VtClass.HIGH),
            sum(1 for s in self.right if s.vt is VtClass.HIGH),
        )

    def with_vt(self, left: Sequence[VtClass], right: Sequence[VtClass]) -> "DifferentialSpec":
        if len(left) != len(self.left) or len(right) != len(self.right):
            raise ContractError("Vt assignment length does not match the slot count")
        return replace(
            self,
            left=tuple(s.with_vt(v) for s, v in zip(self.left, left)),
            right=tuple(s.with_vt(v) for s, v in zip(self.right, right)),
        )

    def visible(self) -> "DifferentialSpec":
        """O que a engenharia reversa enxerga: sinais e polaridades, sem classe de Vt."""
        return self.with_vt([VtClass.LOW] * len(self.left), [VtClass.LOW] * len(self.right))

    def render(self) -> str:
        return (
            "L: " + ",".join(s.token for s in self.left)
            + " | R: " + ",".join(s.token for s in self.right)
        )

    def canonical(self) -> "DifferentialSpec":
        order = {net: i for i, net in enumerate(self.variables())}
        return replace(
            self,
            left=tuple(sorted(self.left, key=lambda s: s.sort_key(order))),
            right=tuple(sorted(self.right, key=lambda s: s.sort_key(order))),
        )


@dataclass(frozen=True)
class CellVariant:
    """Célula TLG-n com k slots de decoy por lado."""
    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise ContractError(f"Invalid cell variant ({self.n}, {self.k})")

    @property
    def in_library(self) -> bool:
        return (self.n, self.k) in LIBRARY_PAIRS

    @property
    def physical_slots(self) -> int:
        return self.n + self.k

    @property
    def name(self) -> str:
        return f"TLG-{self.n}/{self.k}"


LIBRARY_PAIRS = ((3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2), (9, 1))
LIBRARY = tuple(CellVariant(n, k) for n, k in LIBRARY_PAIRS)
CELL_SIZES = (3, 5, 7, 9)


def _low_counts(spec: DifferentialSpec, values: Mapping[str, int]) -> Tuple[int, int]:
    left = sum(1 for s in spec.left if s.vt is VtClass.LOW and s.conducts(values))
    right = sum(1 for s in spec.right if s.vt is VtClass.LOW and s.conducts(values))
    return left, right


def eval_diff(spec: DifferentialSpec, values: Mapping[str, int]) -> int:
    """
    Saída idealizada da corrida: 1 sse a rede esquerda tem mais slots LOW conduzindo.
    ``values`` atribui um bit a cada net referenciada (entradas reais e decoys).
    """
    missing = [net for net in spec.nets() if net not in values]
    if missing:
        raise ContractError(f"Unresolved signal references: {', '.join(missing)}")
    left, right = _low_counts(spec, values)
    if left == right:
        raise TieViolationError(
            f"Tie: {left} conducting LOW slots on each side",
            assignment={k: int(v) for k, v in values.items()},
        )
    return int(left > right)


def conduction_matrix(
    slots: Sequence[Slot], values: Mapping[str, np.ndarray], lanes: int
) -> np.ndarray:
    """Matriz (slots, lanes) de condução para valores já vetorizados por net."""
    if not slots:
        return np.zeros((0, lanes), dtype=bool)
    return np.stack([s.conduction(values, lanes) for s in slots])


def side_conduction(
    slots: Sequence[Slot], variables: Sequence[str]
) -> np.ndarray:
    """Matriz (slots, 2^m) de condução sobre todas as atribuições das variáveis."""
    pts = input_patterns(len(variables))
    values = {net: pts[:, j] for j, net in enumerate(variables)}
    return conduction_matrix(slots, values, pts.shape[0])


def low_mask(slots: Sequence[Slot]) -> np.ndarray:
    return np.array([s.vt is VtClass.LOW for s in slots], dtype=bool)


def lane_margin(spec: DifferentialSpec, values: Mapping[str, np.ndarray], lanes: int) -> np.ndarray:
    """Contagem esquerda - direita de slots LOW conduzindo, por lane."""
    left = conduction_matrix(spec.left, values, lanes)[low_mask(spec.left)].sum(axis=0)
    right = conduction_matrix(spec.right, values, lanes)[low_mask(spec.right)].sum(axis=0)
    return np.asarray(left, dtype=np.int64) - np.asarray(right, dtype=np.int64)


def spec_margins(
    spec: DifferentialSpec,
    variables: Optional[Sequence[str]] = None,
    vt_override: Optional[Tuple[Sequence[VtClass], Sequence[VtClass]]] = None,
) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Diferença (esquerda - direita) de slots LOW conduzindo para cada atribuição."""
    variables = tuple(spec.variables() if variables is None else variables)
    if len(variables) > MAX_VARS:
        raise CapacityError(f"Spec has {len(variables)} distinct variables, limit is {MAX_VARS}")
    unknown = [net for net in spec.nets() if net not in variables]
    if unknown:
        raise ContractError(f"Variables do not cover nets: {', '.join(unknown)}")
    if vt_override is not None:
        spec = spec.with_vt(*vt_override)
    pts = input_patterns(len(variables))
    values = {net: pts[:, j] for j, net in enumerate(variables)}
    return variables, lane_margin(spec, values, pts.shape[0])


def spec_to_truth_table(
    spec: DifferentialSpec,
    variables: Optional[Sequence[str]] = None,
    vt_override: Optional[Tuple[Sequence[VtClass], Sequence[VtClass]]] = None,
) -> TruthTable:
    """
    Avalia ``eval_diff`` em todas as atribuições. Um empate levanta
    ``TieViolationError`` com a atribuição testemunha (legítimo sob hipóteses
    de atacante passadas em ``vt_override``).
    """
    variables, diff = spec_margins(spec, variables, vt_override)
    ties = np.flatnonzero(diff == 0)
    if ties.size:
        index = int(ties[0])
        witness = {net: (index >> j) & 1 for j, net in enumerate(variables)}
        raise TieViolationError(f"Tie on assignment {witness}", assignment=witness)
    return TruthTable(len(variables), pack_bits(diff > 0))
