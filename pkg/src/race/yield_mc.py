"""
Rendimento funcional por Monte Carlo sob variação de Vt.

Em cada tentativa todo transistor de slot recebe um Vt sorteado da distribuição
da sua classe (LOW -> LVT, HIGH -> HVT, sigma escalado). A tentativa passa se a
comparação de correntes reproduz a saída lógica ideal em todas as atribuições
de entradas e decoys. O gerador de cada tentativa é derivado de (seed, índice),
então o resultado não depende da divisão em blocos nem do número de threads.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.stats import binomtest

from src.errors import ContractError, TieViolationError
from src.logic.boolfn import MAX_VARS
from src.race.device import DEFAULT_PARAMS, CurrentModel, DeviceParams, calibrate_current_model
from src.structlog_support import get_structlog_logger
from src.tlg.obfuscate import InstanceKey, apply_key
from src.tlg.slots import DifferentialSpec, side_conduction, spec_margins

logger = get_structlog_logger(component="yield")

BLOCK_TRIALS = 256


@dataclass(frozen=True)
class YieldResult:
    passes: int
    trials: int
    ci_low: float
    ci_high: float
    min_margin: float
    sigma_scale: float
    seed: int

    @property
    def value(self) -> float:
        return self.passes / self.trials

    def to_dict(self) -> Dict[str, object]:
        return {
            "yield": self.value,
            "passes": self.passes,
            "trials": self.trials,
            "ci95": [self.ci_low, self.ci_high],
            "min_margin_ua": self.min_margin,
            "sigma_scale": self.sigma_scale,
            "seed": self.seed,
        }


class _Trials:
    def __init__(self, spec: DifferentialSpec, params: DeviceParams, model: CurrentModel, sigma_scale: float, seed: int):
        variables, ideal = spec_margins(spec)
        if np.any(ideal == 0):
            raise TieViolationError("Spec is not tie-free under LOW-only counting")
        slots = spec.left + spec.right
        self.conduction = np.vstack([
            side_conduction(spec.left, variables),
            side_conduction(spec.right, variables),
        ]).astype(float)
        self.sign = np.concatenate([np.ones(len(spec.left)), -np.ones(len(spec.right))])
        dists = [params.distribution(s.vt) for s in slots]
        self.means = np.array([d.mean for d in dists])
        self.sigmas = np.array([d.sigma for d in dists]) * sigma_scale
        self.expected = np.where(ideal > 0, 1.0, -1.0)
        self.model = model
        self.seed = seed

    def block(self, start: int, stop: int) -> Tuple[int, float]:
        normals = np.stack([
            np.random.default_rng([self.seed, trial]).standard_normal(self.means.size)
            for trial in range(start, stop)
        ])
        vt = self.means + normals * self.sigmas
        weights = self.model.current(vt) * self.sign
        aligned = (weights @ self.conduction) * self.expected
        passed = np.all(aligned > 0, axis=1)
        return int(passed.sum()), float(aligned.min())


def monte_carlo_yield(
    spec: DifferentialSpec,
    params: DeviceParams = DEFAULT_PARAMS,
    trials: int = 10_000,
    seed: int = 42,
    sigma_scale: float = 1.0,
    key: Optional[InstanceKey] = None,
    threads: Optional[int] = None,
) -> YieldResult:
    """
    ``spec`` deve carregar as classes de Vt reais (ou receber a chave). Margem
    exatamente zero conta como falha. ``min_margin`` é a menor margem alinhada
    com a saída ideal observada; negativa quando alguma tentativa falhou.
    """
    if trials < 1:
        raise ContractError(f"trials must be >= 1, got {trials}")
    if sigma_scale < 0:
        raise ContractError(f"sigma_scale must be >= 0, got {sigma_scale}")
    if key is not None:
        spec = apply_key(spec, key)
    if len(spec.variables()) > MAX_VARS:
        raise ContractError(f"Spec has {len(spec.variables())} variables, yield sweep limit is {MAX_VARS}")

    runner = _Trials(spec, params, calibrate_current_model(params), sigma_scale, seed)
    blocks: List[Tuple[int, int]] = [
        (start, min(start + BLOCK_TRIALS, trials)) for start in range(0, trials, BLOCK_TRIALS)
    ]
    if threads and threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partial = list(pool.map(lambda span: runner.block(*span), blocks))
    else:
        partial = [runner.block(*span) for span in blocks]

    passes = sum(p for p, _ in partial)
    min_margin = min(m for _, m in partial)
    interval = binomtest(passes, trials).proportion_ci(confidence_level=0.95, method="wilson")
    ci_low, ci_high = max(0.0, float(interval.low)), min(1.0, float(interval.high))
    result = YieldResult(passes, trials, ci_low, ci_high, min_margin, sigma_scale, seed)
    logger.info("Rendimento estimado", passes=passes, trials=trials, sigma_scale=sigma_scale,
                ci_low=result.ci_low, ci_high=result.ci_high)
    return result
