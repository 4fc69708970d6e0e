"""
Representação canônica de funções Booleanas por tabela-verdade completa.

Convenção de índices (herdada por todos os módulos): a variável 1 é o bit menos
significativo do índice da tabela, ou seja, ``bits[i] = f(x)`` com
``x_j = (i >> (j - 1)) & 1``.

Exemplo:
    >>> and3 = TruthTable.from_hex("0x80", 3)
    >>> and3.evaluate((1, 1, 1))
    1
    >>> sorted(and3.support())
    [1, 2, 3]
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, FrozenSet, Iterable, Sequence, Tuple

import numpy as np

from src.errors import CapacityError, ContractError

MAX_VARS = 12


@lru_cache(maxsize=None)
def input_patterns(n: int) -> np.ndarray:
    """Matriz (2^n, n) de bits de entrada; coluna j = variável j+1."""
    idx = np.arange(1 << n, dtype=np.int64)
    if n == 0:
        return np.zeros((1, 0), dtype=bool)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(bool)


def pack_bits(values: np.ndarray) -> int:
    """Converte um vetor booleano (índice 0 = LSB) em inteiro."""
    arr = np.asarray(values, dtype=bool)
    if arr.size == 0:
        return 0
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def unpack_bits(bits: int, length: int) -> np.ndarray:
    nbytes = max(1, (length + 7) // 8)
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length].astype(bool)


@dataclass(frozen=True)
class TruthTable:
    var_count: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.var_count <= MAX_VARS:
            raise CapacityError(
                f"Truth tables support 0..{MAX_VARS} variables, got {self.var_count}"
            )
        if self.bits < 0 or self.bits >> self.size:
            raise ContractError(
                f"bits do not fit in 2^{self.var_count} = {self.size} entries"
            )

    # -- construção ---------------------------------------------------------

    @property
    def size(self) -> int:
        return 1 << self.var_count

    @classmethod
    def from_hex(cls, text: str, var_count: int) -> "TruthTable":
        try:
            value = int(text, 16)
        except ValueError:
            raise ContractError(f"Invalid hexadecimal truth table: {text!r}")
        return cls(var_count, value)

    @classmethod
    def from_array(cls, values: Iterable[int]) -> "TruthTable":
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=bool)
        n = int(arr.size).bit_length() - 1
        if arr.size == 0 or (1 << n) != arr.size:
            raise ContractError(f"Truth table length must be a power of two, got {arr.size}")
        return cls(n, pack_bits(arr))

    @classmethod
    def from_function(cls, var_count: int, fn: Callable[..., int]) -> "TruthTable":
        pts = input_patterns(var_count)
        return cls.from_array([bool(fn(*row)) for row in pts.astype(int)])

    @classmethod
    def constant(cls, var_count: int, value: int) -> "TruthTable":
        return cls(var_count, ((1 << (1 << var_count)) - 1) if value else 0)

    @classmethod
    def variable(cls, var_count: int, var: int) -> "TruthTable":
        _check_var(var_count, var)
        return cls.from_array(input_patterns(var_count)[:, var - 1])

    # -- consulta -----------------------------------------------------------

    def to_array(self) -> np.ndarray:
        return unpack_bits(self.bits, self.size)

    def to_hex(self) -> str:
        width = max(1, self.size // 4)
        return f"0x{self.bits:0{width}x}"

    def evaluate(self, assignment: Sequence[int]) -> int:
        if len(assignment) != self.var_count:
            raise ContractError(
                f"Assignment has {len(assignment)} values, table has {self.var_count} variables"
            )
        index = 0
        for j, value in enumerate(assignment):
            if value:
                index |= 1 << j
        return (self.bits >> index) & 1

    def cofactors(self, var: int) -> Tuple[np.ndarray, np.ndarray]:
        """Retorna (f|x_var=0, f|x_var=1) alinhados pelo índice das demais variáveis."""
        _check_var(self.var_count, var)
        arr = self.to_array()
        mask = 1 << (var - 1)
        low = np.arange(self.size)[(np.arange(self.size) & mask) == 0]
        return arr[low], arr[low | mask]

    def support(self) -> FrozenSet[int]:
        return frozenset(
            v for v in range(1, self.var_count + 1)
            if np.any(np.not_equal(*self.cofactors(v)))
        )

    def is_positive_unate(self, var: int) -> bool:
        f0, f1 = self.cofactors(var)
        return bool(np.all(f0 <= f1))

    def is_negative_unate(self, var: int) -> bool:
        f0, f1 = self.cofactors(var)
        return bool(np.all(f0 >= f1))

    def count_ones(self) -> int:
        return bin(self.bits).count("1")

    # -- transformações ----------------------------------------------------

    def complement(self) -> "TruthTable":
        return TruthTable(self.var_count, self.bits ^ ((1 << self.size) - 1))

    def complement_inputs(self, mask: int) -> "TruthTable":
        """Complementa as variáveis cujo bit (0-based) está em ``mask``."""
        arr = self.to_array()
        return TruthTable(self.var_count, pack_bits(arr[np.arange(self.size) ^ mask]))

    def complement_input(self, var: int) -> "TruthTable":
        _check_var(self.var_count, var)
        return self.complement_inputs(1 << (var - 1))

    def permute(self, perm: Sequence[int]) -> "TruthTable":
        """
        Renomeia variáveis: a variável ``i`` (1-based) passa a ser ``perm[i-1]``.
        """
        n = self.var_count
        if sorted(perm) != list(range(1, n + 1)):
            raise ContractError(f"Not a permutation of 1..{n}: {list(perm)}")
        pts = input_patterns(n)
        # g(y) = f(x) com y_{perm[i]} = x_i
        src = np.zeros(self.size, dtype=np.int64)
        for i, target in enumerate(perm):
            src |= pts[:, target - 1].astype(np.int64) << i
        return TruthTable(n, pack_bits(self.to_array()[src]))

    def project(self, variables: Sequence[int]) -> "TruthTable":
        """Restringe às ``variables`` (1-based, na ordem dada); as demais ficam em 0."""
        for var in variables:
            _check_var(self.var_count, var)
        pts = input_patterns(len(variables))
        src = np.zeros(pts.shape[0], dtype=np.int64)
        for j, var in enumerate(variables):
            src |= pts[:, j].astype(np.int64) << (var - 1)
        return TruthTable(len(variables), pack_bits(self.to_array()[src]))

    def extend(self, var_count: int) -> "TruthTable":
        """Mesma função vista sobre mais variáveis (as novas são vacuosas)."""
        if var_count < self.var_count:
            raise ContractError("extend cannot drop variables")
        idx = np.arange(1 << var_count) & (self.size - 1)
        return TruthTable(var_count, pack_bits(self.to_array()[idx]))

    def __str__(self) -> str:
        return f"TruthTable({self.to_hex()}, vars={self.var_count})"


def _check_var(var_count: int, var: int) -> None:
    if not 1 <= var <= var_count:
        raise ContractError(f"Variable index {var} out of range 1..{var_count}")


def evaluate(tt: TruthTable, assignment: Sequence[int]) -> int:
    return tt.evaluate(assignment)


def support(tt: TruthTable) -> FrozenSet[int]:
    return tt.support()


def is_positive_unate(tt: TruthTable, var: int) -> bool:
    return tt.is_positive_unate(var)
