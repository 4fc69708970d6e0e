"""
Hierarquia de exceções do toolchain.

Cada classe expõe um atributo ``code`` legível por máquina, usado pela CLI
para escolher o código de saída e pelo registro JSON de erro.
"""
from typing import Dict, Optional, Sequence


class TlgError(Exception):
    code = "tlg-error"


class ContractError(TlgError, ValueError):
    """Violação de pré-condição de uma operação (argumentos inválidos)."""
    code = "contract"


class CapacityError(TlgError, ValueError):
    """O problema excede a capacidade suportada (variáveis, largura, célula)."""
    code = "capacity"


class InterfaceMismatchError(ContractError):
    code = "interface-mismatch"


class UnsupportedFeatureError(TlgError):
    code = "unsupported-feature"


class KeyRequiredError(TlgError):
    code = "key-required"


class TieViolationError(TlgError):
    """
    Empate entre as contagens de condução esquerda e direita.

    ``assignment`` guarda a atribuição testemunha quando conhecida; ``cycle`` e
    ``lanes`` são preenchidos pelo simulador.
    """
    code = "tie-violation"

    def __init__(
        self,
        message: str,
        assignment: Optional[Dict[str, int]] = None,
        instance: Optional[str] = None,
        cycle: Optional[int] = None,
        lanes: Optional[Sequence[int]] = None,
    ):
        super().__init__(message)
        self.assignment = assignment
        self.instance = instance
        self.cycle = cycle
        self.lanes = list(lanes) if lanes is not None else None


class NetlistError(TlgError):
    code = "netlist"


class NetlistSyntaxError(NetlistError):
    code = "syntax"

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class MultipleDriversError(NetlistError):
    code = "multiple-drivers"

    def __init__(self, net: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"Net '{net}' has more than one driver{where}")
        self.net = net
        self.line = line


class CombinationalLoopError(NetlistError):
    code = "combinational-loop"

    def __init__(self, cycle: Sequence[str]):
        super().__init__("Combinational loop through nets: " + " -> ".join(cycle))
        self.cycle = list(cycle)
