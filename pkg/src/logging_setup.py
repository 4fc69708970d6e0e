"""
Configuração de logging do toolchain.

Logs sempre vão para stderr: stdout fica reservado aos resultados dos
subcomandos, que precisam ser reproduzíveis byte a byte. O material de chave
(classes de Vt dos slots) é redigido por padrão em todo registro.

Exemplos de uso:

# 1. Configuração básica
from src.logging_setup import configure_logging, get_traditional_logger
configure_logging(log_level="INFO")
get_traditional_logger().info("Netlist carregado", extra={"gates": 120})

# 2. Eventos estruturados (structlog) com contexto
configure_logging(use_structlog=True, structlog_context={"run": "bench-4"})
logger = get_structlog_logger(component="hybridize")
logger.info("Hibridização concluída", tlgs=5)

# 3. Chave nunca aparece nos logs
logger.info("Entrada gerada", key={"tlg_q0": "..."})   # key=[REDACTED]
"""
import logging
import logging.config
from typing import Any, Dict, List, Optional

from src.filters.redact import KEY_FIELDS, RedactFilter
from src.structlog_support import configure_structlog, get_structlog_logger
from src.utils.config import load_config_dict, load_config_file, load_config_from_env

try:
    import structlog
    STRUCTLOG_AVAILABLE = True
except ImportError:
    STRUCTLOG_AVAILABLE = False

__all__ = [
    "configure_logging",
    "get_structlog_logger",
    "get_traditional_logger",
    "RedactFilter",
]

DEFAULT_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"
DEFAULT_MAX_BYTES = 10 * 1024 * 1024


def _formatter(log_format: str) -> Dict[str, Any]:
    if log_format != "json":
        return {"format": DEFAULT_FORMAT}
    try:
        from pythonjsonlogger import jsonlogger  # noqa: F401
    except ImportError:
        return {"format": DEFAULT_FORMAT}
    return {"()": "pythonjsonlogger.jsonlogger.JsonFormatter", "format": DEFAULT_FORMAT}


def _file_handler(log_file: str, log_level: str, rotation: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    rotation = rotation or {}
    base = {"level": log_level, "formatter": "default", "filename": log_file, "encoding": "utf-8"}
    if rotation.get("type") == "time":
        return dict(
            base,
            **{
                "class": "logging.handlers.TimedRotatingFileHandler",
                "when": rotation.get("when", "midnight"),
                "interval": rotation.get("interval", 1),
                "backupCount": rotation.get("backupCount", 7),
                "utc": rotation.get("utc", True),
            },
        )
    # sem rotação explícita o arquivo cresce sem limite (maxBytes=0)
    return dict(
        base,
        **{
            "class": "logging.handlers.RotatingFileHandler",
            "maxBytes": rotation.get("maxBytes", DEFAULT_MAX_BYTES) if rotation else 0,
            "backupCount": rotation.get("backupCount", 7) if rotation else 1,
        },
    )


def _handler_defs(
    handlers: List[str],
    log_level: str,
    log_file: Optional[str],
    rotation: Optional[Dict[str, Any]],
    custom_handlers: Optional[Dict[str, Any]],
) -> Dict[str, Dict[str, Any]]:
    defs: Dict[str, Dict[str, Any]] = {}
    if "console" in handlers:
        defs["console"] = {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "level": log_level,
            "formatter": "default",
        }
    if "file" in handlers and log_file:
        defs["file"] = _file_handler(log_file, log_level, rotation)
    defs.update(custom_handlers or {})
    return defs


def build_dict_config(
    log_format: str,
    log_level: str,
    handlers: List[str],
    redact_fields: List[str],
    log_file: Optional[str] = None,
    rotation: Optional[Dict[str, Any]] = None,
    custom_handlers: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Monta o dicionário para ``logging.config.dictConfig``."""
    defs = _handler_defs(handlers, log_level, log_file, rotation, custom_handlers)
    filters = {"redact": {"()": RedactFilter, "fields": redact_fields}} if redact_fields else {}
    for handler in defs.values():
        if filters:
            handler["filters"] = list(filters)
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"default": _formatter(log_format)},
        "handlers": defs,
        "filters": filters,
        "root": {"level": log_level, "handlers": list(defs)},
    }


def _structlog_processors(log_format: str, redact_fields: List[str]) -> list:
    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.processors.CallsiteParameterAdder({
            structlog.processors.CallsiteParameter.FILENAME,
            structlog.processors.CallsiteParameter.FUNC_NAME,
            structlog.processors.CallsiteParameter.LINENO,
        }),
    ]
    if redact_fields:
        # antes do renderer, que transforma o evento em texto
        processors.append(RedactFilter(redact_fields))
    if log_format == "json":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))
    return processors


def configure_logging(
    env: Optional[str] = None,
    log_format: Optional[str] = None,
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    rotation: Optional[Dict[str, Any]] = None,
    redact_fields: Optional[List[str]] = None,
    handlers: Optional[List[str]] = None,
    config_dict: Optional[Dict[str, Any]] = None,
    config_file: Optional[str] = None,
    custom_handlers: Optional[Dict[str, Any]] = None,
    use_structlog: bool = False,
    structlog_context: Optional[Dict[str, Any]] = None,
    **kwargs
):
    """
    Configura o logging de forma centralizada.
    Prioridade: config_dict > config_file > parâmetros > variáveis de ambiente.

    ``env`` (ou LOG_ENV) entra no contexto dos eventos structlog como ``env``.

    Sem ``redact_fields`` explícito os campos de chave (``KEY_FIELDS``) são redigidos;
    ``redact_fields=[]`` desliga a redação.
    """
    if redact_fields is None:
        redact_fields = list(KEY_FIELDS)
    envs = load_config_from_env()
    env = env or envs["env"]
    config = load_config_dict(config_dict) or load_config_file(config_file)
    if not config:
        log_format = log_format or envs["log_format"]
        log_level = log_level or envs["log_level"]
        config = build_dict_config(
            log_format,
            log_level,
            handlers or ["console"],
            redact_fields,
            log_file=log_file or envs["log_file"],
            rotation=rotation,
            custom_handlers=custom_handlers,
        )
    logging.config.dictConfig(config)

    if use_structlog and STRUCTLOG_AVAILABLE:
        structlog.contextvars.bind_contextvars(env=env)
        return configure_structlog(_structlog_processors(log_format, redact_fields), log_format, structlog_context)
    return logging.getLogger()


def get_traditional_logger():
    """Retorna o logger raiz do logging padrão."""
    return logging.getLogger()
