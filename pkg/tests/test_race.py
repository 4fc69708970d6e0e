import math

import numpy as np
import pytest

from src.errors import ContractError, TieViolationError
from src.logic.threshold import ThresholdFunction
from src.race.device import DEFAULT_PARAMS, DeviceParams, VtFlavor, calibrate_current_model
from src.race.margin import margin_table, max_safe_k, safety_check, static_margin, worst_case_margin
from src.race.yield_mc import monte_carlo_yield
from src.tlg.mapping import map_threshold_function
from src.tlg.obfuscate import obfuscate_instance
from src.tlg.slots import LIBRARY, CellVariant, DifferentialSpec, Slot, VtClass, spec_margins


def _and3():
    return map_threshold_function(ThresholdFunction((1, 1, 1), 3)).spec


def _with_decoys(spec, k):
    high = VtClass.HIGH
    left = spec.left + tuple(Slot.signal(f"dl{i}", vt=high) for i in range(k))
    right = spec.right + tuple(Slot.signal(f"dr{i}", vt=high) for i in range(k))
    return DifferentialSpec(left, right, spec.inputs, spec.cell_size)


# Teste da calibração alpha-power de dois pontos
def test_calibration_reproduces_table_currents():
    model = calibrate_current_model()
    assert model.alpha == pytest.approx(math.log(15.3 / 4.54) / math.log(0.82 / 0.496))
    assert model.alpha == pytest.approx(2.4166, abs=1e-3)
    assert model.current(-0.280) == pytest.approx(15.3)
    assert model.current(-0.604) == pytest.approx(4.54)
    assert model.current(-1.3) == 0.0


def test_current_model_vectorized():
    model = calibrate_current_model()
    currents = model.current(np.array([-0.280, -0.433, -0.604]))
    assert currents[0] > currents[1] > currents[2] > 0


def test_calibration_rejects_degenerate_inputs():
    with pytest.raises(ContractError, match="equal"):
        calibrate_current_model(DeviceParams(i_low=4.54, i_high=4.54))
    with pytest.raises(ContractError, match="cutoff"):
        calibrate_current_model(DeviceParams(vdd=0.5))
    with pytest.raises(ContractError, match="positive"):
        DeviceParams(i_high=0.0)


def test_default_distributions():
    assert DEFAULT_PARAMS.distributions[VtFlavor.SVT].mean == -0.433
    assert DEFAULT_PARAMS.distribution(VtClass.HIGH).sigma == 0.0217
    assert DEFAULT_PARAMS.ratio == pytest.approx(15.3 / 4.54)


# Teste da verificação de segurança da ofuscação
def test_max_safe_k():
    assert max_safe_k() == 3


@pytest.mark.parametrize("variant", LIBRARY)
def test_library_variants_are_safe(variant):
    result = safety_check(variant)
    assert result.safe
    assert result.to_dict()["verdict"] == "SAFE"


def test_safety_check_boundary():
    assert safety_check(3).safe
    unsafe = safety_check(4)
    assert not unsafe.safe
    assert unsafe.floor == pytest.approx(15.3 - 4 * 4.54)
    assert unsafe.to_dict()["verdict"] == "UNSAFE"


def test_static_margin():
    spec = _and3()
    assert static_margin(spec, {"a": 1, "b": 1, "c": 1}) == pytest.approx(15.3)
    assert static_margin(spec, {"a": 0, "b": 1, "c": 1}) == pytest.approx(-15.3)


def test_static_margin_with_decoys_and_key():
    obf, entry = obfuscate_instance(_and3(), CellVariant(5, 2), ["d0", "d1"], seed=4)
    visible = obf.visible()
    margin = static_margin(visible, {"a": 1, "b": 1, "c": 1}, key=entry,
                           decoy_assignment={"d0": 0, "d1": 1})
    assert margin > 0


def test_static_margin_unresolved():
    with pytest.raises(ContractError, match="Unresolved"):
        static_margin(_and3(), {"a": 1})


def test_static_margin_tie_is_zero():
    spec = DifferentialSpec((Slot.signal("x"),), (Slot.tie0(),), ("x",))
    assert static_margin(spec, {"x": 0}) == 0


# Teste: pior margem com dois decoys HIGH contra um slot LOW
def test_worst_case_margin_two_decoys():
    spec = _with_decoys(_and3(), 2)
    assert worst_case_margin(spec) == pytest.approx(15.3 - 2 * 4.54)
    assert worst_case_margin(spec) == pytest.approx(6.22)


def test_margin_sign_matches_ideal_output_when_safe():
    for k in (1, 2, 3):
        spec = _with_decoys(_and3(), k)
        variables, currents = margin_table(spec)
        _, ideal = spec_margins(spec, variables)
        assert np.array_equal(np.sign(currents), np.sign(ideal))


def test_small_high_current_reduces_to_counting():
    params = DeviceParams(i_high=1e-3)
    spec = _with_decoys(_and3(), 2)
    variables, currents = margin_table(spec, params)
    _, ideal = spec_margins(spec, variables)
    assert np.allclose(currents / params.i_low, ideal, atol=1e-3)


# Teste do rendimento por Monte Carlo
def test_yield_without_variation_is_one():
    result = monte_carlo_yield(_with_decoys(_and3(), 2), trials=64, sigma_scale=0.0)
    assert result.passes == 64
    assert result.value == 1.0
    assert result.min_margin == pytest.approx(6.22)
    assert result.ci_high == pytest.approx(1.0)
    assert result.ci_low < 1.0


def test_unsafe_decoy_count_fails_without_variation():
    result = monte_carlo_yield(_with_decoys(_and3(), 4), trials=16, sigma_scale=0.0)
    assert result.value < 1.0
    assert result.min_margin == pytest.approx(15.3 - 4 * 4.54)


# Teste: o rendimento não cresce com a variação (10^4 tentativas por escala)
def test_yield_decreases_with_sigma():
    spec = _with_decoys(_and3(), 2)
    values = [monte_carlo_yield(spec, trials=10_000, sigma_scale=s, seed=3).value for s in (1.0, 5.0, 10.0)]
    assert values[0] >= values[1] >= values[2]
    assert values[2] < values[0]


def test_yield_independent_of_threads():
    spec = _with_decoys(_and3(), 2)
    serial = monte_carlo_yield(spec, trials=600, sigma_scale=4.0, seed=8)
    threaded = monte_carlo_yield(spec, trials=600, sigma_scale=4.0, seed=8, threads=3)
    assert serial == threaded


def test_yield_ci_contains_estimate():
    result = monte_carlo_yield(_with_decoys(_and3(), 2), trials=500, sigma_scale=5.0, seed=1)
    assert result.ci_low <= result.value <= result.ci_high
    data = result.to_dict()
    assert data["trials"] == 500
    assert len(data["ci95"]) == 2


def test_yield_with_key():
    obf, entry = obfuscate_instance(_and3(), CellVariant(5, 2), ["d0", "d1", "d2"], seed=2)
    result = monte_carlo_yield(obf.visible(), trials=32, sigma_scale=0.0, key=entry)
    assert result.value == 1.0


def test_yield_contracts():
    with pytest.raises(ContractError, match="trials"):
        monte_carlo_yield(_and3(), trials=0)
    with pytest.raises(ContractError, match="sigma_scale"):
        monte_carlo_yield(_and3(), sigma_scale=-1)
    tied = DifferentialSpec((Slot.signal("x"),), (Slot.tie0(),), ("x",))
    with pytest.raises(TieViolationError):
        monte_carlo_yield(tied, trials=4)
