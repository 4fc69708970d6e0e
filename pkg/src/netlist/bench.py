"""
Geradores de benchmarks: multiplicador Wallace com sinal (Baugh-Wooley) e filtro
FIR em forma transposta com coeficientes constantes, ambos com pipeline.

Os bits em construção são nets (``str``) ou constantes (``0``/``1``); portas
com entradas constantes são simplificadas na hora, então constantes só viram
células quando precisam dirigir um registrador.
"""
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import CapacityError, ContractError, TlgError
from src.netlist.model import Flop, Gate, GateKind, Netlist
from src.structlog_support import get_structlog_logger

logger = get_structlog_logger(component="bench")

Bit = Union[str, int]

MAX_WIDTH = 16
DEFAULT_COEFFICIENTS = (3, -5, 7, -2, 4, 1, -6, 2)
CLOCK = "clk"


class _Builder:
    def __init__(self, name: str):
        self.nl = Netlist(name)
        self._count = 0
        self._consts: Dict[int, str] = {}

    def fresh(self, prefix: str) -> str:
        self._count += 1
        return f"{prefix}{self._count}"

    def gate(self, kind: GateKind, *inputs: str) -> str:
        return self.nl.add_gate(Gate(self.fresh("n"), kind, inputs)).output

    def net(self, bit: Bit) -> str:
        if isinstance(bit, str):
            return bit
        if bit not in self._consts:
            kind = GateKind.CONST1 if bit else GateKind.CONST0
            self._consts[bit] = self.gate(kind)
        return self._consts[bit]

    def not_(self, a: Bit) -> Bit:
        if isinstance(a, int):
            return 1 - a
        return self.gate(GateKind.INV, a)

    def and_(self, a: Bit, b: Bit) -> Bit:
        if isinstance(a, int):
            return b if a else 0
        if isinstance(b, int):
            return a if b else 0
        return self.gate(GateKind.AND2, a, b)

    def nand_(self, a: Bit, b: Bit) -> Bit:
        if isinstance(a, int) or isinstance(b, int):
            return self.not_(self.and_(a, b))
        return self.gate(GateKind.NAND2, a, b)

    def or_(self, a: Bit, b: Bit) -> Bit:
        if isinstance(a, int):
            return 1 if a else b
        if isinstance(b, int):
            return 1 if b else a
        return self.gate(GateKind.OR2, a, b)

    def xor_(self, a: Bit, b: Bit) -> Bit:
        if isinstance(a, int):
            return self.not_(b) if a else b
        if isinstance(b, int):
            return self.not_(a) if b else a
        return self.gate(GateKind.XOR2, a, b)

    def half_adder(self, a: Bit, b: Bit) -> Tuple[Bit, Bit]:
        return self.xor_(a, b), self.and_(a, b)

    def full_adder(self, a: Bit, b: Bit, c: Bit) -> Tuple[Bit, Bit]:
        x = self.xor_(a, b)
        s = self.xor_(x, c)
        g = self.and_(a, b)
        p = self.and_(x, c)
        return s, self.or_(g, p)

    def register(self, bit: Bit, q: Optional[str] = None, keep_constant: bool = False) -> Bit:
        if isinstance(bit, int) and not keep_constant:
            return bit
        q = q or self.fresh("r")
        self.nl.add_flop(Flop(q, self.net(bit), CLOCK, 0))
        return q

    def inputs(self, prefix: str, width: int) -> List[str]:
        nets = [f"{prefix}{i}" for i in range(width)]
        for net in nets:
            self.nl.add_input(net)
        return nets

    # -- soma de colunas -------------------------------------------------------

    @staticmethod
    def fold_constants(columns: List[List[Bit]]) -> List[List[Bit]]:
        """Junta as constantes de todas as colunas num único valor e o redistribui em bits."""
        width = len(columns)
        constant = sum(bit << i for i, col in enumerate(columns) for bit in col if isinstance(bit, int))
        constant %= 1 << width
        folded = [[bit for bit in col if isinstance(bit, str)] for col in columns]
        for i in range(width):
            if (constant >> i) & 1:
                folded[i].append(1)
        return folded

    def compress(self, columns: List[List[Bit]]) -> List[List[Bit]]:
        """Camadas de Wallace até cada coluna ter no máximo dois bits."""
        width = len(columns)
        columns = self.fold_constants(columns)
        while any(len(col) > 2 for col in columns):
            layer: List[List[Bit]] = [[] for _ in range(width)]
            for i, col in enumerate(columns):
                if len(col) <= 2:
                    layer[i].extend(col)
                    continue
                j = 0
                while len(col) - j >= 3:
                    s, c = self.full_adder(col[j], col[j + 1], col[j + 2])
                    layer[i].append(s)
                    if i + 1 < width:
                        layer[i + 1].append(c)
                    j += 3
                rest = col[j:]
                if len(rest) == 2:
                    s, c = self.half_adder(rest[0], rest[1])
                    layer[i].append(s)
                    if i + 1 < width:
                        layer[i + 1].append(c)
                else:
                    layer[i].extend(rest)
            columns = self.fold_constants(layer)
        return columns

    def ripple(self, columns: List[List[Bit]]) -> List[Bit]:
        carry: Bit = 0
        result: List[Bit] = []
        for col in columns:
            bits = list(col) + [carry]
            if len(bits) == 3:
                s, carry = self.full_adder(*bits)
            elif len(bits) == 2:
                s, carry = self.half_adder(*bits)
            else:
                s, carry = bits[0], 0
            result.append(s)
        return result


def _check_width(width: int) -> None:
    if not 2 <= width <= MAX_WIDTH:
        raise CapacityError(f"Benchmark width must be in 2..{MAX_WIDTH}, got {width}")


def _check_stages(stages: int) -> None:
    if stages not in (1, 2):
        raise ContractError(f"stages must be 1 or 2, got {stages}")


def wallace_latency(stages: int) -> int:
    return stages + 1


def generate_wallace(width: int, stages: int = 2, verify: bool = True) -> Netlist:
    """
    Multiplicador com sinal ``width x width`` -> ``2*width`` bits.

    Produtos parciais Baugh-Wooley (invertidos quando exatamente um índice é o bit
    de sinal, mais 1 nas colunas ``width`` e ``2*width-1``), redução Wallace com
    somadores completos/meio-somadores e soma final em cascata. Registradores de
    entrada e saída; com ``stages=2`` há também um registrador após a redução.
    """
    _check_width(width)
    _check_stages(stages)
    b = _Builder(f"wallace{width}x{width}s{stages}")
    xa = b.inputs("a", width)
    xb = b.inputs("b", width)
    ra = [b.register(net, f"ra{i}") for i, net in enumerate(xa)]
    rb = [b.register(net, f"rb{i}") for i, net in enumerate(xb)]
    out_width = 2 * width
    sign = width - 1
    columns: List[List[Bit]] = [[] for _ in range(out_width)]
    for i in range(width):
        for j in range(width):
            if (i == sign) != (j == sign):
                columns[i + j].append(b.nand_(ra[i], rb[j]))
            else:
                columns[i + j].append(b.and_(ra[i], rb[j]))
    columns[width].append(1)
    columns[out_width - 1].append(1)
    columns = b.compress(columns)
    if stages == 2:
        columns = [
            [b.register(bit, f"m{i}_{k}") for k, bit in enumerate(col)]
            for i, col in enumerate(columns)
        ]
    product = b.ripple(columns)
    for i, bit in enumerate(product):
        b.register(bit, f"p{i}", keep_constant=True)
    b.nl.outputs = [f"p{i}" for i in range(out_width)]
    b.nl.sweep_dead_cells()
    b.nl.check()
    logger.info("Multiplicador gerado", width=width, stages=stages, gates=len(b.nl.gates), flops=len(b.nl.flops))
    if verify:
        _verify_wallace(b.nl, width, stages)
    return b.nl


def fir_output_width(width: int, coefficients: Sequence[int]) -> int:
    cbits = max(abs(c) for c in coefficients).bit_length()
    return width + cbits + math.ceil(math.log2(len(coefficients)))


def fir_latency(stages: int) -> int:
    return stages


def generate_fir(
    width: int,
    taps: int = 4,
    stages: int = 1,
    coefficients: Optional[Sequence[int]] = None,
    verify: bool = True,
) -> Netlist:
    """
    FIR em forma transposta: z_k = c_k*x + z_{k+1} atrasado, y = z_0 registrado.
    Cada produto por constante vira somas de x deslocado (negado em complemento de
    dois para coeficientes negativos) e é reduzido pelo mesmo compressor de colunas.
    """
    _check_width(width)
    _check_stages(stages)
    if coefficients is None:
        if not 1 <= taps <= len(DEFAULT_COEFFICIENTS):
            raise CapacityError(f"taps must be in 1..{len(DEFAULT_COEFFICIENTS)}, got {taps}")
        coefficients = DEFAULT_COEFFICIENTS[:taps]
    coefficients = tuple(int(c) for c in coefficients)
    if not coefficients or not any(coefficients):
        raise ContractError("FIR needs at least one nonzero coefficient")
    out_width = fir_output_width(width, coefficients)
    b = _Builder(f"fir{width}t{len(coefficients)}s{stages}")
    x: List[Bit] = b.inputs("x", width)
    if stages == 2:
        x = [b.register(net, f"rx{i}") for i, net in enumerate(x)]
    extended = list(x) + [x[-1]] * (out_width - width)

    delayed: Optional[List[Bit]] = None
    for k in reversed(range(len(coefficients))):
        c = coefficients[k]
        columns: List[List[Bit]] = [[] for _ in range(out_width)]
        for shift in range(abs(c).bit_length()):
            if not (abs(c) >> shift) & 1:
                continue
            term: List[Bit] = [0] * shift + extended[: out_width - shift]
            if c < 0:
                term = [b.not_(bit) for bit in term]
                columns[0].append(1)
            for i, bit in enumerate(term):
                columns[i].append(bit)
        if delayed is not None:
            for i, bit in enumerate(delayed):
                columns[i].append(bit)
        total = b.ripple(b.compress(columns))
        if k > 0:
            delayed = [b.register(bit, f"z{k}_{i}") for i, bit in enumerate(total)]
        else:
            for i, bit in enumerate(total):
                b.register(bit, f"y{i}", keep_constant=True)
    b.nl.outputs = [f"y{i}" for i in range(out_width)]
    b.nl.sweep_dead_cells()
    b.nl.check()
    logger.info("FIR gerado", width=width, taps=len(coefficients), stages=stages,
                out_width=out_width, gates=len(b.nl.gates), flops=len(b.nl.flops))
    if verify:
        _verify_fir(b.nl, width, coefficients, stages)
    return b.nl


def generate_bench(kind: str, width: int, taps: int = 4, stages: int = 2, verify: bool = True) -> Netlist:
    if kind == "wallace":
        return generate_wallace(width, stages, verify)
    if kind == "fir":
        return generate_fir(width, taps, stages, verify=verify)
    raise ContractError(f"Unknown benchmark kind {kind!r}")


# -- oráculos aritméticos ----------------------------------------------------------


def to_bits(values: np.ndarray, width: int) -> np.ndarray:
    """Inteiros (com sinal) -> bits em complemento de dois, LSB primeiro."""
    values = np.asarray(values, dtype=np.int64)
    return ((values[..., None] >> np.arange(width)) & 1).astype(bool)


def from_bits(bits: np.ndarray, signed: bool = True) -> np.ndarray:
    width = bits.shape[-1]
    values = (bits.astype(np.int64) << np.arange(width)).sum(axis=-1)
    if signed:
        values = np.where(values >= 1 << (width - 1), values - (1 << width), values)
    return values


def _verify_wallace(nl: Netlist, width: int, stages: int) -> None:
    from src.sim.simulator import Simulator

    low, high = -(1 << (width - 1)), 1 << (width - 1)
    if width <= 6:
        grid = np.arange(low, high)
        a, bv = (m.reshape(-1) for m in np.meshgrid(grid, grid, indexing="ij"))
    else:
        rng = np.random.default_rng(width)
        a = rng.integers(low, high, 2048)
        bv = rng.integers(low, high, 2048)
    latency = wallace_latency(stages)
    vector = np.concatenate([to_bits(a, width), to_bits(bv, width)], axis=-1)
    stimulus = np.broadcast_to(vector, (latency + 1,) + vector.shape).copy()
    result = Simulator(nl).run(stimulus)
    got = from_bits(result.outputs[latency])
    if not np.array_equal(got, a * bv):
        bad = int(np.flatnonzero(got != a * bv)[0])
        raise TlgError(f"Multiplier self-check failed: {a[bad]} * {bv[bad]} gave {got[bad]}")


def _verify_fir(nl: Netlist, width: int, coefficients: Sequence[int], stages: int) -> None:
    from src.sim.simulator import Simulator

    rng = np.random.default_rng(width * 31 + len(coefficients))
    latency = fir_latency(stages)
    cycles = 3 * len(coefficients) + latency
    lanes = 64
    x = rng.integers(-(1 << (width - 1)), 1 << (width - 1), (cycles, lanes))
    result = Simulator(nl).run(to_bits(x, width))
    got = from_bits(result.outputs)
    expected = np.zeros_like(x)
    for k, c in enumerate(coefficients):
        expected[k:] += c * x[: cycles - k]
    if not np.array_equal(got[latency:], expected[: cycles - latency]):
        raise TlgError("FIR self-check failed against the convolution oracle")
