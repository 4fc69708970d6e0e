from collections import Counter

import numpy as np
import pytest

from src.errors import CapacityError, ContractError, TieViolationError
from src.logic.boolfn import TruthTable
from src.logic.threshold import ThresholdFunction, enumerate_threshold_functions
from src.tlg.mapping import (
    PARITY3,
    balance,
    double_and_oddify,
    evaluate_stages,
    fit_to_library,
    map_threshold_function,
    map_truth_table,
    naive_assignment,
    stages_truth_table,
    xor3_macro,
)
from src.tlg.slots import DifferentialSpec, Slot, VtClass, eval_diff, spec_margins, spec_to_truth_table

A_OR_BC = ThresholdFunction((2, 1, 1), 2)
AND3 = ThresholdFunction((1, 1, 1), 3)


def _tokens(slots):
    return Counter(s.token for s in slots)


# Teste de dobra: pesos dobrados e limiar 2T-1
def test_double_and_oddify_worked_example():
    assert double_and_oddify(A_OR_BC) == ThresholdFunction((4, 2, 2), 3)


def test_double_and_oddify_rejects_negative_weights():
    with pytest.raises(ContractError, match="negative weights"):
        double_and_oddify(ThresholdFunction((1, -1), 1))


def test_naive_assignment_shape():
    spec = naive_assignment(ThresholdFunction((4, 2, 2), 3))
    assert len(spec.left) == 8
    assert _tokens(spec.right) == Counter({"0": 3})
    assert all(s.complemented for s in spec.left)


def test_balance_never_widens():
    spec = naive_assignment(ThresholdFunction((2, 2, 2), 5))
    balanced = balance(spec)
    assert max(len(balanced.left), len(balanced.right)) <= max(len(spec.left), len(spec.right))
    _, before = spec_margins(spec, ("a", "b", "c"))
    _, after = spec_margins(balanced, ("a", "b", "c"))
    assert np.array_equal(before, after)


# Teste do exemplo a OR bc (multiconjuntos por lado)
def test_map_a_or_bc():
    gate = map_threshold_function(A_OR_BC)
    assert _tokens(gate.spec.left) == Counter({"~a": 2, "~b": 1, "~c": 2})
    assert _tokens(gate.spec.right) == Counter({"a": 2, "b": 1, "1": 2})
    assert gate.spec.cell_size == 5
    assert gate.spec.render() == "L: ~a,~a,~b,~c,~c | R: a,a,b,1,1"


def test_map_and3():
    gate = map_threshold_function(AND3)
    assert _tokens(gate.spec.left) == Counter({"~a": 1, "1": 4})
    assert _tokens(gate.spec.right) == Counter({"a": 1, "b": 2, "c": 2})
    assert gate.spec.cell_size == 5


# Teste: toda função de limiar de até 4 variáveis mapeia sem empate e reproduz a tabela
@pytest.mark.parametrize("n,count", [(3, 104), (4, 1882)])
def test_map_every_threshold_function(n, count):
    functions = enumerate_threshold_functions(n)
    assert len(functions) == count
    variables = ("a", "b", "c", "d")[:n]
    for tt, tf in functions.items():
        gate = map_threshold_function(tf)
        assert spec_to_truth_table(gate.spec, variables=variables) == tt
        _, diff = spec_margins(gate.spec, variables)
        assert (diff % 2 != 0).all()
        assert len(gate.spec.left) == len(gate.spec.right) == gate.spec.cell_size


def test_map_negative_weight_uses_opposite_polarity():
    gate = map_threshold_function(ThresholdFunction((1, -1), 1))
    assert gate.mask == {2}
    assert eval_diff(gate.spec, {"a": 1, "b": 0}) == 1
    assert eval_diff(gate.spec, {"a": 1, "b": 1}) == 0


def test_map_constant_one():
    gate = map_truth_table(TruthTable.constant(2, 1))
    assert gate.doubled is None
    assert eval_diff(gate.spec, {"a": 0, "b": 1}) == 1


def test_map_truth_table_not_threshold():
    assert map_truth_table(TruthTable(3, 0x96)) is None


def test_fit_to_library_capacity():
    wide = DifferentialSpec((Slot.signal("a"),) * 11, (Slot.tie0(),) * 3, ("a",))
    with pytest.raises(CapacityError, match="TLG-11"):
        fit_to_library(wide)


def test_fit_to_library_pads_with_tie1():
    spec = DifferentialSpec((Slot.signal("a", True),) * 2, (Slot.tie0(),), ("a",))
    fitted = fit_to_library(spec, k=2)
    assert fitted.cell_size == 3
    assert fitted.reserved == 2
    assert _tokens(fitted.left) == Counter({"~a": 2, "1": 1})
    assert _tokens(fitted.right) == Counter({"0": 1, "1": 2})


# Teste da semântica pMOS dos slots
def test_slot_conduction_convention():
    assert Slot.tie0().conducts({})
    assert not Slot.tie1().conducts({})
    assert Slot.signal("x").conducts({"x": 0})
    assert Slot.signal("x", complemented=True).conducts({"x": 1})


def test_high_slots_do_not_count():
    spec = DifferentialSpec(
        (Slot.tie0(), Slot.tie0(VtClass.HIGH), Slot.tie0(VtClass.HIGH)),
        (Slot.signal("x", True), Slot.tie1()),
        ("x",),
    )
    assert eval_diff(spec, {"x": 0}) == 1
    with pytest.raises(TieViolationError):
        eval_diff(spec, {"x": 1})


def test_eval_diff_unresolved_reference():
    spec = DifferentialSpec((Slot.signal("x"),), (Slot.tie1(),), ("x",))
    with pytest.raises(ContractError, match="Unresolved"):
        eval_diff(spec, {})


def test_tie_reports_witness():
    spec = DifferentialSpec((Slot.signal("x"),), (Slot.tie0(),), ("x",))
    with pytest.raises(TieViolationError) as excinfo:
        spec_to_truth_table(spec)
    assert excinfo.value.assignment == {"x": 0}


# Teste da macro XOR3 de dois níveis
def test_xor3_macro_realizes_parity():
    stages = xor3_macro()
    assert [s.spec.cell_size for s in stages] == [3, 5]
    assert stages[0].output == "g"
    assert stages_truth_table(stages, ("a", "b", "c")) == PARITY3


def test_xor3_macro_with_reserved_decoys():
    stages = xor3_macro(("p", "q", "r"), internal="m", output="z", k=2)
    assert all(s.spec.reserved == 2 for s in stages)
    assert stages_truth_table(stages, ("p", "q", "r")) == PARITY3


def test_xor3_macro_arity():
    with pytest.raises(ContractError, match="three inputs"):
        xor3_macro(("a", "b"))


def test_evaluate_stages_reports_tied_lanes():
    tied = DifferentialSpec((Slot.signal("x"),), (Slot.tie0(),), ("x",))
    values = {"x": np.array([True, False, True])}
    with pytest.raises(TieViolationError) as excinfo:
        evaluate_stages([("y", tied)], values, 3)
    assert excinfo.value.lanes == [1]
    assert excinfo.value.instance == "y"
