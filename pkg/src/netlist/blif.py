"""
Leitura e escrita do subconjunto BLIF usado pelo toolchain.

Diretivas aceitas::

    .model <nome>
    .inputs <net>...            .outputs <net>...
    .keyfile <caminho>          (referência ao arquivo de chave)
    .names <in>... <out>        seguido das linhas da cobertura (ON-set ou OFF-set)
    .latch <d> <q> [re <clk>] [<init>]
    .tlg <instância> <clk|->
    .stage <saída> <n> <k>
    L <slot>...
    R <slot>...
    .endtlg
    .end

Slots: ``a`` (sinal verdadeiro), ``~a`` (complementado), ``0`` (TIE0), ``1`` (TIE1).
Comentários começam com ``#`` e ``\\`` no fim da linha continua na próxima.
"""
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from src.errors import ContractError, NetlistSyntaxError, UnsupportedFeatureError
from src.logic.boolfn import TruthTable, input_patterns, pack_bits
from src.netlist.model import Flop, Gate, GateKind, Netlist, TlgInstance, TlgStage
from src.tlg.slots import CellVariant, DifferentialSpec, Slot

CANONICAL_COVERS: Dict[GateKind, Tuple[str, ...]] = {
    GateKind.CONST0: (),
    GateKind.CONST1: ("1",),
    GateKind.BUF: ("1 1",),
    GateKind.INV: ("0 1",),
    GateKind.AND2: ("11 1",),
    GateKind.NAND2: ("0- 1", "-0 1"),
    GateKind.OR2: ("1- 1", "-1 1"),
    GateKind.NOR2: ("00 1",),
    GateKind.XOR2: ("10 1", "01 1"),
    GateKind.XNOR2: ("00 1", "11 1"),
    GateKind.MAJ3: ("11- 1", "1-1 1", "-11 1"),
}


def _logical_lines(text: str) -> Iterator[Tuple[int, str, str]]:
    """(número da linha, linha lógica sem comentário, linha física original)."""
    buffer = ""
    start = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not buffer:
            start = number
        if line.endswith("\\"):
            buffer += line[:-1] + " "
            continue
        line = buffer + line
        buffer = ""
        if line.strip():
            yield start, line, raw
    if buffer.strip():
        yield start, buffer, buffer


def _column(raw: str, token: str) -> int:
    pos = raw.find(token)
    return pos + 1 if pos >= 0 else 1


def cover_to_table(rows: Sequence[Tuple[int, str, str]], n: int, raw_rows: Sequence[str]) -> TruthTable:
    pts = input_patterns(n)
    if not rows:
        return TruthTable.constant(n, 0)
    values = {value for _, _, value in rows}
    if len(values) > 1:
        line, _, _ = rows[0]
        raise NetlistSyntaxError("Cover mixes ON-set and OFF-set rows", line)
    on = np.zeros(pts.shape[0], dtype=bool)
    for (line, pattern, _), raw in zip(rows, raw_rows):
        match = np.ones(pts.shape[0], dtype=bool)
        for j, char in enumerate(pattern):
            if char == "1":
                match &= pts[:, j]
            elif char == "0":
                match &= ~pts[:, j]
        on |= match
    if values == {"0"}:
        on = ~on
    return TruthTable(n, pack_bits(on))


class _Parser:
    def __init__(self, text: str):
        self.lines = list(_logical_lines(text))
        self.pos = 0
        self.nl = Netlist()
        self.seen_model = False

    def error(self, message: str, line: int, raw: str = "", token: str = "") -> NetlistSyntaxError:
        return NetlistSyntaxError(message, line, _column(raw, token) if token else 1)

    def run(self) -> Netlist:
        while self.pos < len(self.lines):
            line, text, raw = self.lines[self.pos]
            self.pos += 1
            tokens = text.split()
            head, args = tokens[0], tokens[1:]
            if not head.startswith("."):
                raise self.error(f"Unexpected line {text.strip()!r}", line, raw, head)
            if head == ".end":
                break
            handler = getattr(self, "_" + head[1:], None)
            if handler is None:
                raise self.error(f"Unknown directive {head}", line, raw, head)
            handler(line, args, raw)
        if not self.seen_model:
            raise NetlistSyntaxError("Missing .model", 1)
        self.nl.check()
        return self.nl

    def _model(self, line, args, raw):
        if len(args) != 1:
            raise self.error(".model takes one name", line, raw, ".model")
        self.nl.name = args[0]
        self.seen_model = True

    def _inputs(self, line, args, raw):
        for net in args:
            self.nl.add_input(net, line)

    def _outputs(self, line, args, raw):
        self.nl.outputs.extend(args)

    def _keyfile(self, line, args, raw):
        if len(args) != 1:
            raise self.error(".keyfile takes one path", line, raw, ".keyfile")
        self.nl.keyfile = args[0]

    def _names(self, line, args, raw):
        if not args:
            raise self.error(".names needs an output net", line, raw, ".names")
        inputs, output = args[:-1], args[-1]
        rows: List[Tuple[int, str, str]] = []
        raws: List[str] = []
        while self.pos < len(self.lines) and not self.lines[self.pos][1].lstrip().startswith("."):
            row_line, row_text, row_raw = self.lines[self.pos]
            self.pos += 1
            parts = row_text.split()
            if inputs:
                if len(parts) != 2:
                    raise self.error("Cover row needs an input pattern and an output value", row_line, row_raw)
                pattern, value = parts
            else:
                if len(parts) != 1:
                    raise self.error("Constant cover row takes a single value", row_line, row_raw)
                pattern, value = "", parts[0]
            if len(pattern) != len(inputs) or set(pattern) - set("01-"):
                raise self.error(f"Bad input pattern {pattern!r}", row_line, row_raw, pattern)
            if value not in ("0", "1"):
                raise self.error(f"Bad output value {value!r}", row_line, row_raw, value)
            rows.append((row_line, pattern, value))
            raws.append(row_raw)
        try:
            table = cover_to_table(rows, len(inputs), raws)
            self.nl.add_gate(Gate.from_table(output, inputs, table), line)
        except ContractError as exc:
            raise self.error(str(exc), line, raw, output) from exc

    def _latch(self, line, args, raw):
        if len(args) not in (2, 3, 4, 5):
            raise self.error(".latch takes 2 to 5 fields", line, raw, ".latch")
        d, q, rest = args[0], args[1], args[2:]
        clock = None
        init = 0
        if len(rest) >= 2:
            kind, clock = rest[0], rest[1]
            if kind != "re":
                raise UnsupportedFeatureError(f"Latch type {kind!r} on line {line}; only 're' is supported")
            rest = rest[2:]
        if rest:
            if rest[0] not in ("0", "1", "2", "3"):
                raise self.error(f"Bad latch init value {rest[0]!r}", line, raw, rest[0])
            init = int(rest[0])
        self.nl.add_flop(Flop(q, d, clock, init), line)

    def _tlg(self, line, args, raw):
        if len(args) != 2:
            raise self.error(".tlg takes an instance name and a clock", line, raw, ".tlg")
        name, clock = args[0], None if args[1] == "-" else args[1]
        stages: List[TlgStage] = []
        while True:
            if self.pos >= len(self.lines):
                raise self.error(f".tlg {name} is not closed by .endtlg", line, raw)
            stage_line, text, stage_raw = self.lines[self.pos]
            self.pos += 1
            tokens = text.split()
            if tokens[0] == ".endtlg":
                break
            if tokens[0] != ".stage" or len(tokens) != 4:
                raise self.error("Expected '.stage <out> <n> <k>'", stage_line, stage_raw, tokens[0])
            try:
                variant = CellVariant(int(tokens[2]), int(tokens[3]))
            except ValueError as exc:
                raise self.error(f"Bad cell variant: {exc}", stage_line, stage_raw, tokens[2]) from exc
            sides = {}
            for expected in ("L", "R"):
                if self.pos >= len(self.lines):
                    raise self.error(f"Missing {expected} line", stage_line, stage_raw)
                side_line, side_text, side_raw = self.lines[self.pos]
                self.pos += 1
                side_tokens = side_text.split()
                if side_tokens[0] != expected:
                    raise self.error(f"Expected {expected} slot line", side_line, side_raw, side_tokens[0])
                sides[expected] = tuple(Slot.parse(tok) for tok in side_tokens[1:])
                if len(sides[expected]) != variant.physical_slots:
                    raise self.error(
                        f"{variant.name} needs {variant.physical_slots} slots, got {len(sides[expected])}",
                        side_line, side_raw, expected,
                    )
            spec = DifferentialSpec(sides["L"], sides["R"], cell_size=variant.n)
            stages.append(TlgStage(tokens[1], spec, variant))
        if not stages:
            raise self.error(f".tlg {name} has no stages", line, raw, name)
        self.nl.add_tlg(TlgInstance(name, tuple(stages), clock), line)


def parse(text: str) -> Netlist:
    return _Parser(text).run()


def read_blif(path: str) -> Netlist:
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read())


def _cover(gate: Gate) -> List[str]:
    if gate.kind is not GateKind.LUT:
        return list(CANONICAL_COVERS[gate.kind])
    n = len(gate.inputs)
    rows = []
    for index in np.flatnonzero(gate.table.to_array()):
        rows.append("".join("1" if (int(index) >> j) & 1 else "0" for j in range(n)) + " 1")
    return rows


def emit(nl: Netlist) -> str:
    out = [f".model {nl.name}"]
    if nl.inputs:
        out.append(".inputs " + " ".join(nl.inputs))
    if nl.outputs:
        out.append(".outputs " + " ".join(nl.outputs))
    if nl.keyfile:
        out.append(f".keyfile {nl.keyfile}")
    for gate in nl.gates.values():
        out.append(".names " + " ".join(gate.inputs + (gate.output,)))
        out.extend(_cover(gate))
    for flop in nl.flops.values():
        clock = f" re {flop.clock}" if flop.clock else ""
        out.append(f".latch {flop.d} {flop.q}{clock} {flop.init}")
    for inst in nl.tlgs.values():
        out.append(f".tlg {inst.name} {inst.clock or '-'}")
        for stage in inst.stages:
            out.append(f".stage {stage.output} {stage.variant.n} {stage.variant.k}")
            out.append("L " + " ".join(s.token for s in stage.spec.left))
            out.append("R " + " ".join(s.token for s in stage.spec.right))
        out.append(".endtlg")
    out.append(".end")
    return "\n".join(out) + "\n"


def write_blif(nl: Netlist, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(emit(nl))
