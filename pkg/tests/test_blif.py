import pytest

from src.errors import (
    CombinationalLoopError,
    MultipleDriversError,
    NetlistError,
    NetlistSyntaxError,
    UnsupportedFeatureError,
)
from src.logic.boolfn import TruthTable
from src.netlist.blif import emit, parse, read_blif, write_blif
from src.netlist.model import GateKind, cone_truth_table, netlist_stats

PIPELINE = """
# contador de paridade com registrador
.model paridade
.inputs a b c
.outputs q
.names a b x
10 1
01 1
.names x c y
11 1
.latch y q re clk 0
.end
"""

WITH_TLG = """
.model hibrido
.inputs a b c d0
.outputs q
.keyfile hibrido.key.json
.tlg tlg_q clk
.stage q 3 1
L ~a ~b ~c d0
R a b c ~d0
.endtlg
.end
"""


def test_parse_gates_and_latch():
    nl = parse(PIPELINE)
    assert nl.name == "paridade"
    assert nl.inputs == ["a", "b", "c"]
    assert nl.gates["x"].kind is GateKind.XOR2
    assert nl.gates["y"].kind is GateKind.AND2
    assert nl.flops["q"].d == "y"
    assert nl.flops["q"].clock == "clk"


# Teste de cobertura pelo OFF-set
def test_parse_off_set_cover():
    nl = parse(".model m\n.inputs a b\n.outputs y\n.names a b y\n11 0\n.end\n")
    assert nl.gates["y"].kind is GateKind.NAND2


def test_parse_constant_gates():
    nl = parse(".model m\n.outputs one zero\n.names one\n1\n.names zero\n.end\n")
    assert nl.gates["one"].kind is GateKind.CONST1
    assert nl.gates["zero"].kind is GateKind.CONST0


def test_parse_wide_cover_becomes_lut():
    text = ".model m\n.inputs a b c d\n.outputs y\n.names a b c d y\n1111 1\n0000 1\n.end\n"
    gate = parse(text).gates["y"]
    assert gate.kind is GateKind.LUT
    assert gate.table.count_ones() == 2


def test_parse_line_continuation_and_comments():
    text = ".model m\n.inputs a \\\n b  # segunda entrada\n.outputs y\n.names a b y\n11 1\n.end\n"
    assert parse(text).inputs == ["a", "b"]


def test_parse_tlg_block():
    nl = parse(WITH_TLG)
    inst = nl.tlgs["tlg_q"]
    assert nl.keyfile == "hibrido.key.json"
    assert inst.q == "q"
    assert inst.obfuscated
    assert inst.stages[0].variant.name == "TLG-3/1"
    assert inst.input_nets() == ("a", "b", "c", "d0")


def test_parse_syntax_error_reports_line():
    with pytest.raises(NetlistSyntaxError) as excinfo:
        parse(".model m\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n")
    assert excinfo.value.line == 5
    assert "Bad input pattern" in str(excinfo.value)


def test_parse_unknown_directive():
    with pytest.raises(NetlistSyntaxError, match="Unknown directive .subckt"):
        parse(".model m\n.subckt foo a=b\n.end\n")


def test_parse_missing_model():
    with pytest.raises(NetlistSyntaxError, match="Missing .model"):
        parse(".inputs a\n.end\n")


def test_parse_wrong_slot_count():
    text = WITH_TLG.replace("L ~a ~b ~c d0", "L ~a ~b ~c")
    with pytest.raises(NetlistSyntaxError, match="needs 4 slots"):
        parse(text)


def test_parse_unclosed_tlg():
    text = ".model m\n.inputs a\n.outputs q\n.tlg t clk\n.stage q 3 0\nL ~a 1 1\nR a 0 1\n"
    with pytest.raises(NetlistSyntaxError, match="not closed"):
        parse(text)


def test_parse_multiple_drivers():
    with pytest.raises(MultipleDriversError) as excinfo:
        parse(".model m\n.inputs a\n.outputs y\n.names a y\n1 1\n.names a y\n0 1\n.end\n")
    assert excinfo.value.net == "y"


def test_parse_combinational_loop():
    text = ".model m\n.inputs a\n.outputs y\n.names a z y\n11 1\n.names y z\n1 1\n.end\n"
    with pytest.raises(CombinationalLoopError) as excinfo:
        parse(text)
    assert set(excinfo.value.cycle) >= {"y", "z"}


def test_parse_undriven_net():
    with pytest.raises(NetlistError, match="Undriven nets: b"):
        parse(".model m\n.inputs a\n.outputs y\n.names a b y\n11 1\n.end\n")


def test_parse_unsupported_latch_type():
    with pytest.raises(UnsupportedFeatureError, match="'fe'"):
        parse(".model m\n.inputs d\n.outputs q\n.latch d q fe clk 0\n.end\n")


# Teste: escrever e reler preserva a estrutura
def test_emit_and_reparse(tmp_path):
    nl = parse(PIPELINE)
    path = tmp_path / "paridade.blif"
    write_blif(nl, str(path))
    again = read_blif(str(path))
    assert again.inputs == nl.inputs
    assert again.outputs == nl.outputs
    assert {n: g.truth_table() for n, g in again.gates.items()} == {n: g.truth_table() for n, g in nl.gates.items()}
    assert again.flops == nl.flops


def test_emit_keeps_tlg_slots():
    text = emit(parse(WITH_TLG))
    assert ".stage q 3 1" in text
    assert "L ~a ~b ~c d0" in text
    assert ".keyfile hibrido.key.json" in text


def test_netlist_stats():
    stats = netlist_stats(parse(WITH_TLG)).to_dict()
    assert stats["tlgs"] == 1
    assert stats["tlgs_by_variant"] == {"TLG-3/1": 1}
    assert stats["combinational"] == 0

    pipeline = netlist_stats(parse(PIPELINE))
    assert pipeline.cells == {"XOR2": 1, "AND2": 1}
    assert pipeline.sequential == 1


def test_sequential_depth():
    assert parse(PIPELINE).sequential_depth() == 1
    assert parse(WITH_TLG).sequential_depth() == 1


def test_cone_truth_table():
    nl = parse(PIPELINE)
    tt = cone_truth_table(nl, ("a", "b", "c"), "y")
    assert tt == TruthTable.from_function(3, lambda a, b, c: (a ^ b) & c)
