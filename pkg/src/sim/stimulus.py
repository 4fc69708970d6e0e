"""
Geradores de estímulo no formato do simulador: arrays booleanos (ciclos, lanes, entradas).
"""
import numpy as np

from src.errors import CapacityError, ContractError

EXHAUSTIVE_LIMIT_BITS = 20
DEFAULT_TOGGLE_PROBABILITY = 0.30


def exhaustive_sequences(n_inputs: int, depth: int) -> np.ndarray:
    """
    Todas as sequências de ``depth`` vetores: a lane ``L`` recebe no ciclo ``t``
    o vetor ``(L >> n*t) & (2^n - 1)``, entrada ``j`` no bit ``j``.
    """
    if n_inputs < 0 or depth < 1:
        raise ContractError(f"Invalid exhaustive request: {n_inputs} inputs, depth {depth}")
    bits = n_inputs * depth
    if bits > EXHAUSTIVE_LIMIT_BITS:
        raise CapacityError(
            f"Exhaustive stimulus needs 2^{bits} sequences, limit is 2^{EXHAUSTIVE_LIMIT_BITS}"
        )
    lanes = np.arange(1 << bits, dtype=np.int64)
    shifts = np.arange(depth)[:, None, None] * n_inputs + np.arange(n_inputs)[None, None, :]
    return ((lanes[None, :, None] >> shifts) & 1).astype(bool)


def toggle_stimulus(
    n_inputs: int,
    cycles: int,
    lanes: int = 1,
    probability: float = DEFAULT_TOGGLE_PROBABILITY,
    seed: int = 42,
) -> np.ndarray:
    """
    Estímulo aleatório reprodutível: o primeiro vetor é uniforme e cada entrada
    troca de valor entre ciclos consecutivos com a probabilidade dada.
    """
    if not 0.0 <= probability <= 1.0:
        raise ContractError(f"Toggle probability must be in [0, 1], got {probability}")
    if cycles < 0 or lanes < 1:
        raise ContractError(f"Invalid stimulus shape: {cycles} cycles, {lanes} lanes")
    if cycles == 0:
        return np.zeros((0, lanes, n_inputs), dtype=bool)
    rng = np.random.default_rng(seed)
    first = rng.random((1, lanes, n_inputs)) < 0.5
    flips = rng.random((cycles - 1, lanes, n_inputs)) < probability
    return np.logical_xor.accumulate(np.concatenate([first, flips]), axis=0)


def measured_toggle_rate(stimulus: np.ndarray) -> float:
    """Fração de pares (ciclo, ciclo seguinte) em que a entrada mudou."""
    stimulus = np.asarray(stimulus, dtype=bool)
    if stimulus.shape[0] < 2 or stimulus.size == 0:
        return 0.0
    return float(np.mean(stimulus[1:] != stimulus[:-1]))


def hold_cycles(stimulus: np.ndarray, cycles: int) -> np.ndarray:
    """Acrescenta ``cycles`` ciclos repetindo o último vetor, para esvaziar o pipeline."""
    if cycles <= 0 or stimulus.shape[0] == 0:
        return stimulus
    tail = np.repeat(stimulus[-1:], cycles, axis=0)
    return np.concatenate([stimulus, tail])
