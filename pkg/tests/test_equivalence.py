import numpy as np
import pytest

from src.errors import ContractError, InterfaceMismatchError, TieViolationError
from src.netlist.blif import parse
from src.sim.equiv import Verdict, build_stimulus, check_equivalence
from src.sim.stimulus import DEFAULT_TOGGLE_PROBABILITY

AND_REG = """
.model e
.inputs a b
.outputs q
.names a b y
11 1
.latch y q re clk 0
.end
"""

NAND_DEMORGAN_REG = """
.model e_demorgan
.inputs b a
.outputs q
.names a na
0 1
.names b nb
0 1
.names na nb y
00 1
.latch y q re clk 0
.end
"""

OR_REG = AND_REG.replace("11 1", "1- 1\n-1 1")

TLG_AND = """
.model e_tlg
.inputs a b
.outputs q
.tlg tlg_q clk
.stage q 3 0
L ~a 1 1
R a b b
.endtlg
.end
"""


def test_equivalent_with_reordered_inputs():
    result = check_equivalence(parse(AND_REG), parse(NAND_DEMORGAN_REG))
    assert result.verdict is Verdict.EQUIVALENT
    assert result.counterexample is None
    assert result.flush == 1
    assert result.cycles == 3


def test_tlg_and_matches_cmos():
    assert check_equivalence(parse(AND_REG), parse(TLG_AND), depth=3).equivalent


# Teste: o contraexemplo é o primeiro ciclo/lane onde as saídas divergem
def test_counterexample_is_earliest():
    result = check_equivalence(parse(AND_REG), parse(OR_REG))
    cex = result.counterexample
    assert result.verdict is Verdict.COUNTEREXAMPLE
    assert cex.cycle == 1
    assert cex.lane == 1
    assert cex.inputs[0] == {"a": 1, "b": 0}
    assert cex.expected == {"q": 0}
    assert cex.actual == {"q": 1}
    assert result.to_dict()["counterexample"]["reason"] == "mismatch"


def test_counterexample_same_across_batches_and_threads():
    a, b = parse(AND_REG), parse(OR_REG)
    whole = check_equivalence(a, b, depth=4)
    split = check_equivalence(a, b, depth=4, batch_lanes=16, threads=4)
    assert (whole.counterexample.cycle, whole.counterexample.lane) == (split.counterexample.cycle, split.counterexample.lane)


def test_tie_in_candidate_is_a_counterexample():
    tied = TLG_AND.replace("R a b b", "R a b 1")
    result = check_equivalence(parse(AND_REG), parse(tied))
    assert result.verdict is Verdict.COUNTEREXAMPLE
    assert result.counterexample.reason == "tie"


def test_tie_in_reference_propagates():
    tied = parse(TLG_AND.replace("R a b b", "R a b 1"))
    with pytest.raises(TieViolationError):
        check_equivalence(tied, parse(AND_REG))


def test_interface_mismatch():
    other = parse(AND_REG.replace(".inputs a b", ".inputs a c").replace(".names a b y", ".names a c y"))
    with pytest.raises(InterfaceMismatchError, match="Primary inputs differ"):
        check_equivalence(parse(AND_REG), other)
    renamed = parse(AND_REG.replace(".outputs q", ".outputs r").replace("y q re", "y r re"))
    with pytest.raises(InterfaceMismatchError, match="Primary outputs differ"):
        check_equivalence(parse(AND_REG), renamed)


def test_random_mode_is_reproducible():
    a, b = parse(AND_REG), parse(OR_REG)
    first = check_equivalence(a, b, mode="random", vectors=300, lanes=32, seed=9)
    second = check_equivalence(a, b, mode="random", vectors=300, lanes=32, seed=9)
    assert first.to_dict() == second.to_dict()
    assert first.seed == 9
    assert first.lanes == 32


def test_build_stimulus_random_shape():
    stimulus = build_stimulus(3, "random", 2, 1000, 1, 0.5, 256, 2)
    assert stimulus.shape == (4 + 2, 256, 3)
    assert np.array_equal(stimulus[-1], stimulus[-3])


def test_build_stimulus_rejects_unknown_mode():
    with pytest.raises(ContractError, match="Unknown verification mode"):
        build_stimulus(3, "formal", 2, 10, 1, 0.5, 8, 0)


# Teste: o modo aleatório usa 30% de atividade por padrão
def test_random_mode_default_activity(monkeypatch):
    import src.sim.equiv as equiv

    seen = []
    original = equiv.toggle_stimulus

    def spy(*args):
        seen.append(args[3])
        return original(*args)

    monkeypatch.setattr(equiv, "toggle_stimulus", spy)
    a = parse(AND_REG)
    assert check_equivalence(a, a, mode="random", vectors=64, lanes=16).equivalent
    assert check_equivalence(a, a, mode="random", vectors=64, lanes=16, probability=0.1).equivalent
    assert seen == [DEFAULT_TOGGLE_PROBABILITY, 0.1]
    assert DEFAULT_TOGGLE_PROBABILITY == pytest.approx(0.30)
