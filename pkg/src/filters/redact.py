import logging
from typing import Any, Iterable, Optional
import json

# campos que carregam material da chave de ofuscação
KEY_FIELDS = ("vt", "vt_mask", "key_entry", "key")
REDACTED = "[REDACTED]"


class RedactFilter(logging.Filter):
    """
    Filtro recursivo para redação de campos sensíveis em registros de log.
    Redige campos em dicts, listas e strings JSON. Também funciona como
    processador do structlog (antes do renderer).
    Exemplo de uso:
        configure_logging(redact_fields=["vt", "key"])
    """
    def __init__(self, fields: Optional[Iterable[str]] = None):
        super().__init__()
        self.fields = set(KEY_FIELDS if fields is None else fields)

    def redact_recursive(self, obj: Any) -> Any:
        if isinstance(obj, dict):
            return {k: (REDACTED if k in self.fields else self.redact_recursive(v)) for k, v in obj.items()}
        elif isinstance(obj, (list, tuple)):
            return [self.redact_recursive(i) for i in obj]
        elif isinstance(obj, str):
            # Tenta redigir se for um JSON serializado
            try:
                parsed = json.loads(obj)
            except (ValueError, TypeError):
                return obj
            if not isinstance(parsed, (dict, list)):
                return obj
            return json.dumps(self.redact_recursive(parsed))
        return obj

    def filter(self, record):
        for field in self.fields:
            if field in record.__dict__:
                record.__dict__[field] = REDACTED
        if isinstance(record.args, dict):
            record.args = self.redact_recursive(record.args)
        if isinstance(record.msg, (dict, str)):
            record.msg = self.redact_recursive(record.msg)
        extra = getattr(record, "extra", None)
        if isinstance(extra, dict):
            record.extra = self.redact_recursive(extra)
        return True

    def __call__(self, logger, method_name, event_dict):
        return self.redact_recursive(event_dict)
