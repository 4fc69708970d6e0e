"""Exportação de uma lane simulada em formato VCD (value change dump)."""
from typing import IO, Iterable, Optional, Union

from vcd import VCDWriter

from src.errors import ContractError
from src.sim.simulator import SimResult


def write_vcd(
    result: SimResult,
    target: Union[str, IO[str]],
    nets: Optional[Iterable[str]] = None,
    timescale: str = "1 ns",
    scope: str = "top",
) -> int:
    """
    Escreve o histórico gravado com ``record_lane``; um passo de tempo por ciclo.
    Retorna o número de variáveis registradas.
    """
    if not result.history:
        raise ContractError("Simulation result has no recorded lane; run with record_lane")
    selected = sorted(result.history) if nets is None else list(nets)
    unknown = [net for net in selected if net not in result.history]
    if unknown:
        raise ContractError(f"Nets not recorded: {', '.join(unknown)}")

    stream = open(target, "w") if isinstance(target, str) else target
    try:
        # data fixa: a saída precisa ser reproduzível byte a byte
        with VCDWriter(stream, timescale=timescale, date="reproducible", version="tlgobf") as writer:
            variables = {
                net: writer.register_var(scope, net, "wire", 1, init=result.history[net][0])
                for net in selected
            }
            cycles = len(result.history[selected[0]]) if selected else 0
            # o VCDWriter exige tempos não decrescentes
            for t in range(1, cycles):
                for net in selected:
                    trace = result.history[net]
                    if trace[t] != trace[t - 1]:
                        writer.change(variables[net], t, trace[t])
    finally:
        if isinstance(target, str):
            stream.close()
    return len(selected)
