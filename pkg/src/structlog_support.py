import logging

try:
    import structlog
    STRUCTLOG_AVAILABLE = True
except ImportError:
    STRUCTLOG_AVAILABLE = False


def configure_structlog(processors, log_format, structlog_context=None):
    import structlog
    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )
    if structlog_context:
        logger = structlog.get_logger()
        logger = logger.bind(**structlog_context)
        return logger
    return structlog.get_logger()


def ensure_stdlib_routing():
    """
    Encaminha o structlog para o logging padrão enquanto ninguém configurou nada,
    para que o uso como biblioteca nunca escreva eventos em stdout.
    """
    if not STRUCTLOG_AVAILABLE or structlog.is_configured():
        return
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.KeyValueRenderer(key_order=["event"]),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
    )


def get_structlog_logger(**context):
    """
    Retorna um logger structlog com contexto já vinculado (se structlog estiver disponível).
    Caso contrário, retorna o logger tradicional do logging.
    """
    if STRUCTLOG_AVAILABLE:
        # proxy preguiçoso: a configuração vigente é resolvida no primeiro uso
        return structlog.get_logger("tlgobf", **context)
    return logging.getLogger("tlgobf")
