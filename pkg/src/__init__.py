from src.logging_setup import (
    configure_logging,
    get_structlog_logger,
    get_traditional_logger,
    RedactFilter,
)
from src.structlog_support import ensure_stdlib_routing

__version__ = "0.1.0"

# uso como biblioteca: eventos do structlog seguem para o logging padrão
ensure_stdlib_routing()

__all__ = [
    "configure_logging",
    "get_structlog_logger",
    "get_traditional_logger",
    "RedactFilter",
    "__version__"
]
