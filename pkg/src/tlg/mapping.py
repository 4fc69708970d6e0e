"""
Mapeamento de funções de limiar na célula TLG diferencial.

Fluxo: normalize_positive -> double_and_oddify -> naive_assignment -> balance ->
fit_to_library. Dobrar os pesos e usar limiar 2T-1 torna a diferença de
condução sempre ímpar, logo nunca há empate entre as redes esquerda e direita.

Exemplo (a OR bc):
    >>> gate = map_threshold_function(ThresholdFunction((2, 1, 1), 2))
    >>> gate.spec.render()
    'L: ~a,~a,~b,~c,~c | R: a,a,b,1,1'
"""
from collections import Counter
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.errors import CapacityError, ContractError, TieViolationError, TlgError
from src.logic.boolfn import MAX_VARS, TruthTable, input_patterns, pack_bits
from src.logic.threshold import ThresholdFunction, identify, normalize_positive
from src.structlog_support import get_structlog_logger
from src.tlg.slots import (
    CELL_SIZES,
    DifferentialSpec,
    Drive,
    Slot,
    lane_margin,
    spec_to_truth_table,
)

logger = get_structlog_logger(component="tlg-map")

_NAMES = "abcdefghijkl"


def default_inputs(var_count: int) -> Tuple[str, ...]:
    if var_count > len(_NAMES):
        raise CapacityError(f"No default names for {var_count} variables")
    return tuple(_NAMES[:var_count])


@dataclass(frozen=True)
class GateStage:
    """Um nível de TLG: a net de saída e a especificação encaixada na biblioteca."""
    output: str
    spec: DifferentialSpec
    function: Optional[ThresholdFunction] = None


@dataclass(frozen=True)
class MappedGate:
    function: ThresholdFunction
    normalized: ThresholdFunction
    mask: FrozenSet[int]
    doubled: Optional[ThresholdFunction]
    spec: DifferentialSpec


def double_and_oddify(tf: ThresholdFunction) -> ThresholdFunction:
    if any(w < 0 for w in tf.weights):
        raise ContractError(f"{tf} has negative weights; normalize it first")
    if tf.threshold < 1:
        raise ContractError(f"{tf} needs a threshold >= 1 to be doubled")
    return ThresholdFunction(tuple(2 * w for w in tf.weights), 2 * tf.threshold - 1)


def naive_assignment(
    tf: ThresholdFunction,
    inputs: Optional[Sequence[str]] = None,
    mask: FrozenSet[int] = frozenset(),
) -> DifferentialSpec:
    """
    Esquerda: w_i cópias do literal de x_i (complementado, pela convenção pMOS);
    direita: T cópias de TIE0. Variáveis em ``mask`` (1-based) entram com a
    polaridade invertida.
    """
    inputs = tuple(default_inputs(tf.var_count) if inputs is None else inputs)
    if len(inputs) != tf.var_count:
        raise ContractError(f"{len(inputs)} input names for {tf.var_count} variables")
    if any(w < 0 for w in tf.weights) or tf.threshold < 0:
        raise ContractError(f"{tf} is not a doubled nonnegative function")
    left: List[Slot] = []
    for i, (net, w) in enumerate(zip(inputs, tf.weights), start=1):
        left.extend([Slot.signal(net, complemented=i not in mask)] * w)
    right = [Slot.tie0()] * tf.threshold
    return DifferentialSpec(tuple(left), tuple(right), inputs)


def _move_order(counts: Mapping[str, int], inputs: Sequence[str]) -> List[str]:
    position = {net: i for i, net in enumerate(inputs)}
    return sorted(counts, key=lambda net: (-counts[net], position.get(net, len(position)), net))


def balance(spec: DifferentialSpec) -> DifferentialSpec:
    """
    Movimentos unitários: remove uma cópia de SIGNAL(x) da esquerda e troca um TIE0
    da direita pelo literal oposto de x. Cada movimento preserva esquerda - direita
    para toda entrada, e o tamanho da direita não muda, então max(|L|,|R|) só cai.

    Primeira passada: pesos decrescentes (depois índice crescente), até w_i cópias
    por variável (metade das cópias dobradas). Se ainda sobrar TIE0, a segunda
    passada percorre a ordem inversa movendo o que restar.
    """
    signals = [s for s in spec.left if s.drive is Drive.SIGNAL]
    others = [s for s in spec.left if s.drive is not Drive.SIGNAL]
    counts = Counter(s.net for s in signals)
    polarity: Dict[str, bool] = {s.net: s.complemented for s in signals}
    ties = sum(1 for s in spec.right if s.drive is Drive.TIE0)
    kept_right = [s for s in spec.right if s.drive is not Drive.TIE0]
    moved: Counter = Counter()

    order = _move_order(counts, spec.inputs)
    for net in order:
        step = min(counts[net] // 2, ties)
        counts[net] -= step
        moved[net] += step
        ties -= step
    for net in reversed(order):
        step = min(counts[net], ties)
        counts[net] -= step
        moved[net] += step
        ties -= step

    nets = list(spec.inputs) + [n for n in order if n not in spec.inputs]
    left = [Slot.signal(net, polarity[net]) for net in nets if net in counts for _ in range(counts[net])]
    right = [Slot.signal(net, not polarity[net]) for net in nets if net in moved for _ in range(moved[net])]
    result = replace(
        spec,
        left=tuple(left + others),
        right=tuple(right + kept_right + [Slot.tie0()] * ties),
    )
    logger.debug("balance", before=(len(spec.left), len(spec.right)),
                 after=(len(result.left), len(result.right)))
    return result


def fit_to_library(
    spec: DifferentialSpec,
    sizes: Sequence[int] = CELL_SIZES,
    k: int = 0,
) -> DifferentialSpec:
    """Menor célula da biblioteca que comporta o maior lado; ambos os lados completados com TIE1."""
    if k < 0:
        raise ContractError(f"decoy count must be >= 0, got {k}")
    widest = max(len(spec.left), len(spec.right))
    fitting = [size for size in sorted(sizes) if size >= widest]
    if not fitting:
        required = widest if widest % 2 else widest + 1
        raise CapacityError(
            f"Function needs TLG-{required}; the largest library cell is TLG-{max(sizes)}"
        )
    size = fitting[0]
    fitted = replace(
        spec,
        left=spec.left + (Slot.tie1(),) * (size - len(spec.left)),
        right=spec.right + (Slot.tie1(),) * (size - len(spec.right)),
        cell_size=size,
        reserved=k,
    )
    return fitted.canonical()


def map_threshold_function(
    tf: ThresholdFunction,
    inputs: Optional[Sequence[str]] = None,
    k: int = 0,
    sizes: Sequence[int] = CELL_SIZES,
) -> MappedGate:
    inputs = tuple(default_inputs(tf.var_count) if inputs is None else inputs)
    normalized, mask = normalize_positive(tf)
    if normalized.threshold <= 0:
        # constante 1: um TIE0 contra nada
        doubled = None
        spec = DifferentialSpec((Slot.tie0(),), (), inputs)
    else:
        doubled = double_and_oddify(normalized)
        spec = balance(naive_assignment(doubled, inputs, mask))
    spec = fit_to_library(spec, sizes, k)
    if len(inputs) <= MAX_VARS:
        realized = spec_to_truth_table(spec, variables=inputs)
        if realized != tf.to_truth_table():
            raise TlgError(f"Mapping of {tf} does not reproduce its truth table")
    logger.debug("Função mapeada", function=str(tf), cell=spec.cell_size, render=spec.render())
    return MappedGate(tf, normalized, mask, doubled, spec)


def map_truth_table(
    tt: TruthTable,
    inputs: Optional[Sequence[str]] = None,
    k: int = 0,
    weight_bound: Optional[int] = None,
    sum_limit: Optional[int] = None,
    sizes: Sequence[int] = CELL_SIZES,
) -> Optional[MappedGate]:
    """``None`` quando a tabela não é função de limiar dentro do limite de pesos."""
    tf = identify(tt, weight_bound=weight_bound, sum_limit=sum_limit)
    if tf is None:
        return None
    return map_threshold_function(tf, inputs, k, sizes)


def evaluate_stages(
    stages: Sequence[Tuple[str, DifferentialSpec]],
    values: Mapping[str, np.ndarray],
    lanes: int,
) -> Dict[str, np.ndarray]:
    """
    Avalia níveis de TLG em sequência; a saída de cada nível fica visível aos
    seguintes dentro do mesmo ciclo. Levanta ``TieViolationError`` com as lanes
    empatadas.
    """
    scope = dict(values)
    outputs: Dict[str, np.ndarray] = {}
    for output, spec in stages:
        margin = lane_margin(spec, scope, lanes)
        tied = np.flatnonzero(margin == 0)
        if tied.size:
            raise TieViolationError(f"Tie while evaluating '{output}'", instance=output, lanes=tied.tolist())
        scope[output] = outputs[output] = margin > 0
    return outputs


def stages_truth_table(stages: Sequence[GateStage], inputs: Sequence[str]) -> TruthTable:
    """Tabela-verdade da saída do último nível sobre ``inputs``."""
    pts = input_patterns(len(inputs))
    values = {net: pts[:, j] for j, net in enumerate(inputs)}
    outputs = evaluate_stages([(s.output, s.spec) for s in stages], values, pts.shape[0])
    return TruthTable(len(inputs), pack_bits(outputs[stages[-1].output]))


MAJ3 = ThresholdFunction((1, 1, 1), 2)
XOR3_SECOND_LEVEL = ThresholdFunction((1, 1, 1, -2), 1)
PARITY3 = TruthTable(3, 0x96)


def xor3_macro(
    inputs: Sequence[str] = ("a", "b", "c"),
    internal: str = "g",
    output: str = "y",
    k: int = 0,
) -> Tuple[GateStage, GateStage]:
    """
    XOR de três entradas em dois níveis: g = MAJ3(a,b,c) numa TLG-3 e
    y = [1,1,1,-2;1](a,b,c,g) numa TLG-5, avaliados no mesmo ciclo.
    """
    inputs = tuple(inputs)
    if len(inputs) != 3:
        raise ContractError("xor3_macro takes exactly three inputs")
    first = map_threshold_function(MAJ3, inputs, k)
    second = map_threshold_function(XOR3_SECOND_LEVEL, inputs + (internal,), k)
    stages = (
        GateStage(internal, first.spec, MAJ3),
        GateStage(output, second.spec, XOR3_SECOND_LEVEL),
    )
    if stages_truth_table(stages, inputs) != PARITY3:
        raise TlgError("XOR3 macro does not realize 3-input parity")
    return stages
