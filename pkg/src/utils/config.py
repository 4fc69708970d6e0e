import os
import json
from typing import Optional, Dict, Any

try:
    import yaml
except ImportError:
    yaml = None

from src.errors import ContractError


def load_config_dict(config_dict: Optional[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
    return config_dict if config_dict else None


def load_config_file(config_file: Optional[str]) -> Optional[Dict[str, Any]]:
    if not config_file:
        return None
    ext = os.path.splitext(config_file)[-1].lower()
    use_yaml = ext in ['.yaml', '.yml'] and yaml is not None
    if not use_yaml and ext != '.json':
        raise ContractError(f"Unsupported config file format: {config_file}")
    malformed = (ValueError, yaml.YAMLError) if yaml is not None else (ValueError,)
    with open(config_file, 'r', encoding='utf-8') as f:
        try:
            data = yaml.safe_load(f) if use_yaml else json.load(f)
        except malformed as exc:
            raise ContractError(f"Malformed config file {config_file}: {exc}")
    if data is not None and not isinstance(data, dict):
        raise ContractError(f"Config file must hold a mapping: {config_file}")
    return data


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ContractError(f"Environment variable {name} must be an integer, got {raw!r}")


def load_config_from_env() -> Dict[str, Any]:
    return {
        "env": os.getenv("LOG_ENV", "production"),
        "log_format": os.getenv("LOG_FORMAT", "text"),
        "log_level": os.getenv("LOG_LEVEL", "WARNING"),
        "log_file": os.getenv("LOG_FILE"),
        # TLG_SEED aceita um inteiro ou "random"
        "seed": os.getenv("TLG_SEED"),
        "threads": _env_int("TLG_THREADS"),
        "weight_bound": _env_int("TLG_WEIGHT_BOUND"),
    }
