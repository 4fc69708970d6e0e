from src.filters.redact import RedactFilter

__all__ = ["RedactFilter"] 