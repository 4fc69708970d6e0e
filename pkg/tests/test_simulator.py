import io

import numpy as np
import pytest

from src.errors import CapacityError, ContractError, TieViolationError
from src.netlist.blif import parse
from src.sim.power import power_proxy
from src.sim.simulator import simulate
from src.sim.stimulus import (
    exhaustive_sequences,
    hold_cycles,
    measured_toggle_rate,
    toggle_stimulus,
)
from src.sim.vcd import write_vcd

SHIFT = """
.model deslocamento
.inputs d
.outputs q1 q2
.latch d q1 re clk 0
.latch q1 q2 re clk 1
.end
"""

TLG_MAJ = """
.model maioria
.inputs a b c
.outputs q
.tlg tlg_q clk
.stage q 3 0
L ~a ~b ~c
R a b c
.endtlg
.end
"""

TLG_TIE = """
.model empate
.inputs a
.outputs q
.tlg tlg_q clk
.stage q 3 0
L ~a 1 1
R 0 1 1
.endtlg
.end
"""


def test_shift_register_timing():
    stimulus = np.array([1, 0, 1, 1], dtype=bool).reshape(4, 1, 1)
    result = simulate(parse(SHIFT), stimulus)
    assert result.outputs[:, 0, 0].tolist() == [False, True, False, True]
    # q2 começa em 1 (init) e segue q1 com um ciclo de atraso
    assert result.outputs[:, 0, 1].tolist() == [True, False, True, False]


def test_trace_names_outputs():
    stimulus = np.ones((2, 1, 1), dtype=bool)
    trace = simulate(parse(SHIFT), stimulus).trace(0)
    assert trace == [{"q1": 0, "q2": 1}, {"q1": 1, "q2": 0}]


# Teste: a TLG se comporta como flop da função de maioria
def test_tlg_registers_majority():
    stimulus = exhaustive_sequences(3, 2)
    result = simulate(parse(TLG_MAJ), stimulus)
    lanes = np.arange(64)
    first = lanes & 7
    expected = np.array([bin(int(v)).count("1") >= 2 for v in first])
    assert not result.outputs[0, :, 0].any()
    assert np.array_equal(result.outputs[1, :, 0], expected)


def test_tie_reports_cycle_and_lanes():
    stimulus = np.array([[[0], [1]], [[0], [0]]], dtype=bool)
    with pytest.raises(TieViolationError) as excinfo:
        simulate(parse(TLG_TIE), stimulus)
    assert excinfo.value.instance == "tlg_q"
    assert excinfo.value.cycle == 0
    assert excinfo.value.lanes == [1]


def test_stimulus_shape_contract():
    with pytest.raises(ContractError, match="Stimulus must have shape"):
        simulate(parse(SHIFT), np.zeros((3, 2), dtype=bool))


def test_history_records_lane():
    stimulus = np.array([[[1], [0]], [[0], [0]]], dtype=bool)
    result = simulate(parse(SHIFT), stimulus, record_lane=0)
    assert result.history["d"] == [True, False]
    assert result.history["q1"] == [False, True]


# Teste do gerador de estímulo
def test_exhaustive_sequences_cover_every_sequence():
    stimulus = exhaustive_sequences(2, 3)
    assert stimulus.shape == (3, 64, 2)
    codes = {tuple(stimulus[:, lane].reshape(-1)) for lane in range(64)}
    assert len(codes) == 64


def test_exhaustive_sequences_limit():
    with pytest.raises(CapacityError, match="2\\^21"):
        exhaustive_sequences(7, 3)


def test_toggle_stimulus_rate():
    stimulus = toggle_stimulus(10, 10_001, lanes=10, probability=0.30, seed=42)
    assert abs(measured_toggle_rate(stimulus) - 0.30) < 0.01


def test_toggle_stimulus_reproducible():
    first = toggle_stimulus(4, 20, 3, seed=5)
    assert np.array_equal(first, toggle_stimulus(4, 20, 3, seed=5))
    assert not np.array_equal(first, toggle_stimulus(4, 20, 3, seed=6))


def test_toggle_stimulus_edge_cases():
    assert toggle_stimulus(3, 0, 2).shape == (0, 2, 3)
    with pytest.raises(ContractError, match="probability"):
        toggle_stimulus(3, 5, probability=1.5)


def test_hold_cycles_repeats_last_vector():
    stimulus = np.array([[[0]], [[1]]], dtype=bool)
    held = hold_cycles(stimulus, 2)
    assert held[:, 0, 0].tolist() == [False, True, True, True]


# Teste do proxy de potência
def test_power_proxy_counts_cmos_toggles():
    stimulus = np.array([1, 0, 1, 1], dtype=bool).reshape(4, 1, 1)
    activity = simulate(parse(SHIFT), stimulus).activity
    proxy = power_proxy(activity)
    assert proxy.cmos_toggles == activity.cmos_toggles()
    assert proxy.tlg_evaluations == 0
    assert proxy.total == proxy.cmos_toggles


def test_tlg_cost_does_not_depend_on_data():
    nl = parse(TLG_MAJ)
    busy = power_proxy(simulate(nl, toggle_stimulus(3, 50, 4, probability=0.9, seed=1)).activity, tlg_cost=2.5)
    quiet = power_proxy(simulate(nl, np.zeros((50, 4, 3), dtype=bool)).activity, tlg_cost=2.5)
    assert busy.tlg_proxy == quiet.tlg_proxy == 2.5 * 50 * 4
    assert busy.tlg_cycle_variance == 0.0
    assert busy.cmos_toggles > quiet.cmos_toggles


def test_power_proxy_rejects_negative_cost():
    activity = simulate(parse(SHIFT), np.zeros((1, 1, 1), dtype=bool)).activity
    with pytest.raises(ContractError, match="non-negative"):
        power_proxy(activity, tlg_cost=-1)


# Teste da exportação VCD
def test_write_vcd(tmp_path):
    stimulus = np.array([1, 0, 1, 1], dtype=bool).reshape(4, 1, 1)
    result = simulate(parse(SHIFT), stimulus, record_lane=0)
    path = tmp_path / "deslocamento.vcd"
    count = write_vcd(result, str(path))
    text = path.read_text()
    assert count == 3
    assert "$var wire 1" in text
    assert "#3" in text


def test_write_vcd_selected_nets():
    result = simulate(parse(SHIFT), np.ones((2, 1, 1), dtype=bool), record_lane=0)
    buffer = io.StringIO()
    assert write_vcd(result, buffer, nets=["q1"]) == 1
    assert " q1 " in buffer.getvalue()


def test_write_vcd_requires_history():
    result = simulate(parse(SHIFT), np.ones((2, 1, 1), dtype=bool))
    with pytest.raises(ContractError, match="record_lane"):
        write_vcd(result, io.StringIO())
    recorded = simulate(parse(SHIFT), np.ones((2, 1, 1), dtype=bool), record_lane=0)
    with pytest.raises(ContractError, match="not recorded"):
        write_vcd(recorded, io.StringIO(), nets=["zz"])
