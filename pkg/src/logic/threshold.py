"""
Identificação e síntese de funções de limiar lineares [w1,...,wn;T].

Uma função é de limiar quando existe um vetor de pesos inteiros e um limiar
inteiro tais que f(x) = 1 se e somente se sum(w_i * x_i) >= T. Como os pesos
são inteiros, a soma menos o limiar é sempre inteira; todo o raciocínio de
desempate nos módulos seguintes depende disso.

Dois procedimentos de decisão, ambos completos dentro do limite de peso:
- n <= 4: busca exaustiva vetorizada por camadas de sum|w_i| crescente,
  cada camada em ordem lexicográfica; a primeira linha viável é a mínima.
- 5 <= n <= 10: filtros exatos (unateness, 2-monotonicidade), ordem das
  variáveis pelos parâmetros de Chow e branch-and-bound em profundidade
  iterativa sobre pesos positivos.

Exemplo:
    >>> from src.logic.boolfn import TruthTable
    >>> str(identify(TruthTable.from_hex("0x80", 3)))
    '[1,1,1;3]'
"""
import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import CapacityError, ContractError
from src.logic.boolfn import TruthTable, input_patterns, pack_bits
from src.structlog_support import get_structlog_logger

logger = get_structlog_logger(component="threshold")

NOT_THRESHOLD = "NOT_THRESHOLD"
EXHAUSTIVE_MAX_VARS = 4
IDENTIFY_MAX_VARS = 10
COUNT_BOUND = 8
SHELL_CHUNK = 8192
SHELL_CACHE_SIZE = 128

_TF_PATTERN = re.compile(r"^\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*;\s*(-?\d+)\s*\]$")


@dataclass(frozen=True)
class ThresholdFunction:
    weights: Tuple[int, ...]
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    @property
    def var_count(self) -> int:
        return len(self.weights)

    @classmethod
    def parse(cls, text: str) -> "ThresholdFunction":
        match = _TF_PATTERN.match(text.strip())
        if not match:
            raise ContractError(f"Invalid threshold function notation: {text!r}")
        weights = [int(w) for w in match.group(1).split(",")] if match.group(1) else []
        return cls(tuple(weights), int(match.group(2)))

    def evaluate(self, assignment: Sequence[int]) -> int:
        if len(assignment) != self.var_count:
            raise ContractError(
                f"Assignment has {len(assignment)} values, function has {self.var_count} variables"
            )
        total = sum(w for w, x in zip(self.weights, assignment) if x)
        return int(total >= self.threshold)

    def to_truth_table(self) -> TruthTable:
        sums = input_patterns(self.var_count).astype(np.int64) @ np.asarray(self.weights, dtype=np.int64)
        return TruthTable(self.var_count, pack_bits(sums >= self.threshold))

    def __str__(self) -> str:
        return "[" + ",".join(str(w) for w in self.weights) + f";{self.threshold}]"


def eval_threshold(tf: ThresholdFunction, assignment: Sequence[int]) -> int:
    return tf.evaluate(assignment)


def default_weight_bound(var_count: int) -> int:
    return 8 if var_count <= 5 else 16


def normalize_positive(tf: ThresholdFunction) -> Tuple[ThresholdFunction, FrozenSet[int]]:
    """
    Troca cada peso negativo w_i por -w_i complementando x_i; o limiar sobe de |w_i|.
    Retorna a função com pesos >= 0 e o conjunto (1-based) de variáveis complementadas.
    """
    weights = list(tf.weights)
    threshold = tf.threshold
    mask = set()
    for i, w in enumerate(weights):
        if w < 0:
            weights[i] = -w
            threshold += -w
            mask.add(i + 1)
    return ThresholdFunction(tuple(weights), threshold), frozenset(mask)


def _threshold_for(sums: np.ndarray, on: np.ndarray) -> int:
    # menor T válido; sem pontos falsos usa o menor valor verdadeiro
    if (~on).any():
        return int(sums[~on].max()) + 1
    return int(sums[on].min())


def _pack_rows(matrix: np.ndarray) -> np.ndarray:
    packed = np.packbits(matrix, axis=-1, bitorder="little").astype(np.int64)
    codes = np.zeros(packed.shape[:-1], dtype=np.int64)
    for b in range(packed.shape[-1]):
        codes |= packed[..., b] << (8 * b)
    return codes


def _shell_vectors(n: int, total: int, bound: int) -> Iterator[Tuple[int, ...]]:
    """Vetores com sum|w_i| == total e |w_i| <= bound, em ordem lexicográfica."""
    if n == 0:
        if total == 0:
            yield ()
        return
    top = min(total, bound)
    for w in range(-top, top + 1):
        rest = total - abs(w)
        if rest > (n - 1) * bound:
            continue
        for tail in _shell_vectors(n - 1, rest, bound):
            yield (w,) + tail


def _block(vectors: List[Tuple[int, ...]], n: int) -> Tuple[np.ndarray, np.ndarray]:
    W = np.array(vectors, dtype=np.int64).reshape(len(vectors), n)
    return W, W @ input_patterns(n).T.astype(np.int64)


@lru_cache(maxsize=SHELL_CACHE_SIZE)
def _small_shell(n: int, total: int, bound: int) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    vectors = list(itertools.islice(_shell_vectors(n, total, bound), SHELL_CHUNK + 1))
    if len(vectors) > SHELL_CHUNK:
        return None
    return _block(vectors, n)


def _shell_blocks(n: int, total: int, bound: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """
    Blocos (W, S) da camada sum|w| == total, com S[r, x] = w_r . x. Camadas
    pequenas ficam em cache; as grandes são geradas em blocos de SHELL_CHUNK
    linhas, de modo que a memória não cresce com o limite de peso.
    """
    small = _small_shell(n, total, bound)
    if small is not None:
        if small[0].shape[0]:
            yield small
        return
    stream = _shell_vectors(n, total, bound)
    while True:
        chunk = list(itertools.islice(stream, SHELL_CHUNK))
        if not chunk:
            return
        yield _block(chunk, n)


def _necessary_conditions(tt: TruthTable) -> bool:
    """Unate em toda variável e variáveis comparáveis duas a duas (2-monotônica)."""
    arr = tt.to_array()
    idx = np.arange(tt.size)
    neg_mask = 0
    for v in tt.support():
        if tt.is_positive_unate(v):
            continue
        if not tt.is_negative_unate(v):
            return False
        neg_mask |= 1 << (v - 1)
    positive = arr[idx ^ neg_mask]
    for i, j in itertools.combinations(range(tt.var_count), 2):
        base = idx[((idx >> i) & 1 == 0) & ((idx >> j) & 1 == 0)]
        a = positive[base | (1 << i)]
        b = positive[base | (1 << j)]
        if not (np.all(a >= b) or np.all(a <= b)):
            return False
    return True


def _identify_exhaustive(tt: TruthTable, bound: int, sum_limit: Optional[int]) -> Optional[ThresholdFunction]:
    n = tt.var_count
    on = tt.to_array()
    big = np.iinfo(np.int64).max // 4
    if not _necessary_conditions(tt):
        return None
    top = n * bound if sum_limit is None else min(n * bound, sum_limit)
    # camadas em ordem crescente de sum|w|: a primeira linha viável é a mínima
    for total in range(top + 1):
        for W, S in _shell_blocks(n, total, bound):
            min_on = np.where(on, S, big).min(axis=1)
            max_off = np.where(~on, S, -big).max(axis=1)
            hits = np.flatnonzero(max_off < min_on)
            if hits.size:
                row = int(hits[0])
                return ThresholdFunction(tuple(int(w) for w in W[row]), _threshold_for(S[row], on))
    return None


def chow_parameters(tt: TruthTable) -> np.ndarray:
    """Número de pontos verdadeiros com x_i = 1, por variável."""
    on = tt.to_array()
    return input_patterns(tt.var_count)[on].sum(axis=0).astype(np.int64)


class _PositiveSearch:
    """
    Branch-and-bound sobre pesos positivos de uma função positiva (unate) em m variáveis.

    ``order`` lista as variáveis por parâmetro de Chow decrescente e ``strict[p]``
    indica dominância estrita entre ``order[p]`` e ``order[p+1]``.
    """

    def __init__(self, on: np.ndarray, order: List[int], strict: List[bool], bound: int):
        m = len(order)
        self.m = m
        self.bound = bound
        self.strict = strict
        idx = np.arange(on.size)
        off = ~on
        is_min = on.copy()
        is_max = off.copy()
        for k in range(m):
            bit = ((idx >> k) & 1).astype(bool)
            is_min &= ~(bit & on[idx ^ (1 << k)])
            is_max &= ~(~bit & off[idx | (1 << k)])
        cols = np.asarray(order, dtype=np.int64)
        self.P = ((idx[is_min][:, None] >> cols) & 1).astype(np.int64)
        self.Q = ((idx[is_max][:, None] >> cols) & 1).astype(np.int64)
        self.solutions: List[Tuple[int, ...]] = []

    def run(self, total: int) -> List[Tuple[int, ...]]:
        self.solutions = []
        self._dfs([], total, self.bound)
        return self.solutions

    def _separates(self, weights: np.ndarray) -> bool:
        max_q = (self.Q @ weights).max() if self.Q.size else -1
        min_p = (self.P @ weights).min() if self.P.size else math.inf
        return max_q < min_p

    def _pruned(self, prefix: List[int], remaining: int, cap: int) -> bool:
        p = len(prefix)
        rest = self.m - p
        if rest == 0 or not self.P.size or not self.Q.size:
            return False
        w = np.asarray(prefix, dtype=np.int64)
        aP = self.P[:, :p] @ w
        aQ = self.Q[:, :p] @ w
        uP = self.P[:, p:].sum(axis=1)
        uQ = self.Q[:, p:].sum(axis=1)
        ub_p = aP + np.minimum(uP * cap, remaining - (rest - uP))
        lb_q = aQ + np.maximum(uQ, remaining - (rest - uQ) * cap)
        return lb_q.max() >= ub_p.min()

    def _dfs(self, prefix: List[int], remaining: int, cap: int) -> None:
        p = len(prefix)
        left = self.m - p
        if left == 0:
            if remaining == 0 and self._separates(np.asarray(prefix, dtype=np.int64)):
                self.solutions.append(tuple(prefix))
            return
        hi = min(cap, remaining - (left - 1))
        lo = max(1, -(-remaining // left))
        for w in range(hi, lo - 1, -1):
            next_cap = w - 1 if p < self.m - 1 and self.strict[p] else w
            prefix.append(w)
            if not self._pruned(prefix, remaining - w, next_cap):
                self._dfs(prefix, remaining - w, next_cap)
            prefix.pop()


def _identify_search(tt: TruthTable, bound: int, sum_limit: Optional[int]) -> Optional[ThresholdFunction]:
    n = tt.var_count
    arr = tt.to_array()
    sup = sorted(tt.support())
    pts = input_patterns(n).astype(np.int64)
    if not sup:
        weights = np.zeros(n, dtype=np.int64)
        return ThresholdFunction(tuple(weights), _threshold_for(pts @ weights, arr))

    negative = set()
    for v in sup:
        if tt.is_positive_unate(v):
            continue
        if tt.is_negative_unate(v):
            negative.add(v)
            continue
        logger.debug("Função não unate", var=v)
        return None

    neg_mask = sum(1 << (v - 1) for v in negative)
    positive = arr[np.arange(tt.size) ^ neg_mask]
    m = len(sup)
    sub_idx = np.zeros(1 << m, dtype=np.int64)
    for k, v in enumerate(sup):
        sub_idx |= ((np.arange(1 << m) >> k) & 1) << (v - 1)
    on = positive[sub_idx]

    idx = np.arange(1 << m)
    dominance: Dict[Tuple[int, int], int] = {}
    for i, j in itertools.combinations(range(m), 2):
        base = idx[((idx >> i) & 1 == 0) & ((idx >> j) & 1 == 0)]
        a = on[base | (1 << i)]
        b = on[base | (1 << j)]
        if np.array_equal(a, b):
            dominance[(i, j)] = 0
        elif np.all(a >= b):
            dominance[(i, j)] = 1
        elif np.all(a <= b):
            dominance[(i, j)] = -1
        else:
            logger.debug("Função não 2-monotônica", pair=(sup[i], sup[j]))
            return None

    chow = input_patterns(m)[on].sum(axis=0)
    order = sorted(range(m), key=lambda k: (-int(chow[k]), k))
    strict = []
    for a, b in zip(order, order[1:]):
        rel = dominance[(a, b)] if a < b else -dominance[(b, a)]
        if rel < 0:
            return None
        strict.append(rel > 0)

    search = _PositiveSearch(on, order, strict, bound)
    limit = m * bound if sum_limit is None else min(m * bound, sum_limit)
    for total in range(m, limit + 1):
        found = search.run(total)
        if found:
            return _best_signed(found, order, strict, sup, negative, pts, arr, n)
    return None


def _best_signed(found, order, strict, sup, negative, pts, arr, n) -> ThresholdFunction:
    # classes de simetria = posições consecutivas sem dominância estrita
    classes: List[List[int]] = [[order[0]]]
    for p, is_strict in enumerate(strict):
        if is_strict:
            classes.append([order[p + 1]])
        else:
            classes[-1].append(order[p + 1])
    best = None
    for solution in found:
        magnitude = {order[p]: w for p, w in enumerate(solution)}
        weights = [0] * n
        for members in classes:
            pool = sorted(magnitude[k] for k in members)
            for k in sorted(members, key=lambda k: sup[k]):
                var = sup[k]
                value = pool.pop(-1) if var in negative else pool.pop(0)
                weights[var - 1] = -value if var in negative else value
        w = np.asarray(weights, dtype=np.int64)
        candidate = (tuple(weights), _threshold_for(pts @ w, arr))
        if best is None or candidate < best:
            best = candidate
    return ThresholdFunction(*best)


def identify(
    tt: TruthTable,
    weight_bound: Optional[int] = None,
    sum_limit: Optional[int] = None,
) -> Optional[ThresholdFunction]:
    """
    Retorna a realização [w;T] de menor sum|w_i| (desempate: menor vetor de pesos
    em ordem lexicográfica, depois menor T) com |w_i| <= weight_bound, ou ``None``
    quando a tabela não é função de limiar dentro do limite.

    ``sum_limit`` restringe adicionalmente sum|w_i| (usado pela hibridização, em que
    só cabem realizações pequenas na biblioteca de células).
    """
    n = tt.var_count
    if n > IDENTIFY_MAX_VARS:
        raise CapacityError(f"identify supports at most {IDENTIFY_MAX_VARS} variables, got {n}")
    bound = default_weight_bound(n) if weight_bound is None else weight_bound
    if bound < 1:
        raise ContractError(f"weight bound must be >= 1, got {bound}")
    if n <= EXHAUSTIVE_MAX_VARS:
        result = _identify_exhaustive(tt, bound, sum_limit)
    else:
        result = _identify_search(tt, bound, sum_limit)
    logger.debug("identify", table=tt.to_hex(), vars=n, bound=bound,
                 result=str(result) if result else NOT_THRESHOLD)
    return result


def enumerate_threshold_functions(n: int, bound: int = COUNT_BOUND) -> Dict[TruthTable, ThresholdFunction]:
    """Todas as tabelas de limiar sobre n <= 4 variáveis com a realização mínima de cada uma."""
    if n > EXHAUSTIVE_MAX_VARS:
        raise CapacityError(f"Threshold enumeration supports n <= {EXHAUSTIVE_MAX_VARS}, got {n}")
    zero = TruthTable(n, 0)
    result = {zero: ThresholdFunction((0,) * n, _threshold_for(np.zeros(1 << n, dtype=np.int64), zero.to_array()))}
    for total in range(n * bound + 1):
        for W, S in _shell_blocks(n, total, bound):
            # linha r, ponto p: f(x) = [w_r . x >= w_r . p]
            codes = _pack_rows(S[:, None, :] >= S[:, :, None]).reshape(-1)
            uniq, first = np.unique(codes, return_index=True)
            for code, pos in zip(uniq, first):
                tt = TruthTable(n, int(code))
                if tt in result:
                    continue
                row = int(pos) // S.shape[1]
                result[tt] = ThresholdFunction(tuple(int(w) for w in W[row]), _threshold_for(S[row], tt.to_array()))
    return result


def count_threshold_functions(n: int) -> int:
    if n > EXHAUSTIVE_MAX_VARS:
        raise CapacityError(f"count_threshold_functions supports n <= {EXHAUSTIVE_MAX_VARS}, got {n}")
    return len(enumerate_threshold_functions(n))
