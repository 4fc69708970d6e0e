"""Esquemas JSON dos registros ``--json`` da CLI e do arquivo de chave."""
import json
import os
from typing import Any, Dict

SCHEMA_DIR = os.path.dirname(__file__)


def schema_path(name: str) -> str:
    return os.path.join(SCHEMA_DIR, f"{name}.schema.json")


def load_schema(name: str) -> Dict[str, Any]:
    with open(schema_path(name), "r", encoding="utf-8") as f:
        return json.load(f)
