import os
import logging
import json
import sys
import pytest
import logging.handlers

from src import configure_logging, get_traditional_logger, get_structlog_logger, RedactFilter
from src.errors import ContractError
from src.filters.redact import KEY_FIELDS
from src.logging_setup import build_dict_config
from src.utils.config import load_config_file, load_config_from_env


def _close_file_handlers(path):
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        if isinstance(handler, logging.FileHandler) and handler.baseFilename == os.path.abspath(path):
            handler.close()
            root_logger.removeHandler(handler)


def test_configure_logging_basic():
    configure_logging(log_level="DEBUG")
    logger = get_traditional_logger()
    assert logger.getEffectiveLevel() == logging.DEBUG


# Teste: logs vão para stderr, stdout fica livre para resultados
def test_console_handler_writes_to_stderr(capsys):
    configure_logging(log_level="INFO")
    get_traditional_logger().info("mensagem de diagnóstico")
    captured = capsys.readouterr()
    assert "mensagem de diagnóstico" in captured.err
    assert captured.out == ""


# Teste de redação da chave usando capsys para capturar stderr (JSON)
def test_configure_logging_redacts_key_fields_by_default(capsys):
    configure_logging(log_format="json", log_level="INFO")
    logger = get_traditional_logger()
    logger.info("Entrada gerada", extra={"key": {"tlg_q0": "HIGH-LOW"}, "vt_mask": "mascara-secreta", "gates": 12})
    captured = capsys.readouterr().err
    assert "[REDACTED]" in captured
    assert "HIGH-LOW" not in captured
    assert "mascara-secreta" not in captured
    assert "12" in captured


def test_configure_logging_with_custom_redact_fields(capsys):
    configure_logging(log_format="json", log_level="INFO", redact_fields=["password"])
    get_traditional_logger().info("Cadastro", extra={"password": "senha123"})
    captured = capsys.readouterr().err
    assert "senha123" not in captured


# Teste de redação recursiva em dicionário aninhado
def test_redact_filter_recursive():
    f = RedactFilter(["key_entry", "vt"])
    data = {"instance": "tlg_q", "key_entry": {"left": []}, "slots": {"vt": "HIGH", "net": "a"}}
    redacted = f.redact_recursive(data)
    assert redacted["key_entry"] == "[REDACTED]"
    assert redacted["slots"]["vt"] == "[REDACTED]"
    assert redacted["slots"]["net"] == "a"

    # Teste de redação em lista
    redacted_list = f.redact_recursive(["abc", {"vt": "LOW"}, ["xyz", {"key_entry": 1}]])
    assert redacted_list[1]["vt"] == "[REDACTED]"
    assert redacted_list[2][1]["key_entry"] == "[REDACTED]"

    # Teste de redação em JSON serializado
    redacted_json = f.redact_recursive(json.dumps({"entry": {"vt": "HIGH"}}))
    assert "[REDACTED]" in redacted_json
    assert "HIGH" not in redacted_json

    # string comum não é alterada
    assert f.redact_recursive("42") == "42"
    assert f.redact_recursive("texto livre") == "texto livre"


def test_build_dict_config_attaches_redaction_to_every_handler(tmp_path):
    config = build_dict_config("text", "INFO", ["console", "file"], list(KEY_FIELDS),
                               log_file=str(tmp_path / "x.log"))
    assert set(config["handlers"]) == {"console", "file"}
    assert all(h["filters"] == ["redact"] for h in config["handlers"].values())
    assert config["handlers"]["file"]["maxBytes"] == 0
    assert build_dict_config("text", "INFO", ["console"], [])["filters"] == {}


def test_redact_filter_defaults_to_key_fields():
    assert RedactFilter().fields == set(KEY_FIELDS)


# Teste do filtro como processador do structlog
def test_redact_filter_as_structlog_processor():
    processor = RedactFilter()
    event = processor(None, "info", {"event": "ofuscado", "key": {"x": 1}, "variant": "TLG-5/2"})
    assert event["key"] == "[REDACTED]"
    assert event["variant"] == "TLG-5/2"


# Teste de rotação de arquivo por tamanho
def test_configure_logging_with_file_rotation(tmp_path):
    log_file = str(tmp_path / "tlgobf.log")
    try:
        configure_logging(log_file=log_file, handlers=["file"], log_level="INFO",
                          rotation={"type": "size", "maxBytes": 200, "backupCount": 2})
        for i in range(100):
            logging.getLogger().info(f"log message {i} with some extra content to force rotation")
        assert os.path.exists(log_file)
        assert os.path.exists(f"{log_file}.1")
    finally:
        _close_file_handlers(log_file)


# Teste de rotação por tempo
def test_configure_logging_with_time_rotation(tmp_path):
    log_file = str(tmp_path / "tlgobf-time.log")
    try:
        configure_logging(log_file=log_file, handlers=["file"], log_level="INFO",
                          rotation={"type": "time", "when": "s", "interval": 1, "backupCount": 3})
        logging.getLogger().info("log message for time rotation")
        root = logging.getLogger()
        assert any(isinstance(h, logging.handlers.TimedRotatingFileHandler) for h in root.handlers)
        assert os.path.exists(log_file)
    finally:
        _close_file_handlers(log_file)


# Teste de configuração via dicionário
def test_configure_logging_with_dict():
    config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"default": {"format": "%(message)s"}},
        "handlers": {"console": {"class": "logging.StreamHandler", "formatter": "default"}},
        "root": {"level": "INFO", "handlers": ["console"]}
    }
    configure_logging(config_dict=config)
    assert get_traditional_logger().getEffectiveLevel() == logging.INFO


# Teste de integração com structlog
@pytest.mark.skipif('structlog' not in sys.modules, reason="structlog não instalado")
def test_structlog_logger_redacts_key_material(capsys):
    configure_logging(use_structlog=True, log_format="json", log_level="INFO")
    logger = get_structlog_logger(component="teste")
    logger.warning("Chave gerada", key={"tlg_q0": "segredo-vt"}, instances=3)
    captured = capsys.readouterr().err
    assert "Chave gerada" in captured
    assert "segredo-vt" not in captured
    assert "[REDACTED]" in captured


# Teste de configuração via arquivo YAML
def test_configure_logging_with_file(monkeypatch, tmp_path):
    yaml = pytest.importorskip("yaml")
    yaml_content = """
version: 1
disable_existing_loggers: False
formatters:
  default:
    format: "%(message)s"
handlers:
  console:
    class: logging.StreamHandler
    formatter: default
root:
  level: INFO
  handlers: [console]
"""
    yaml_file = tmp_path / "config.yaml"
    yaml_file.write_text(yaml_content)
    monkeypatch.setattr("src.utils.config.yaml", yaml)
    configure_logging(config_file=str(yaml_file))
    assert get_traditional_logger().getEffectiveLevel() == logging.INFO


def test_load_config_file_rejects_unknown_extension(tmp_path):
    path = tmp_path / "config.toml"
    path.write_text("seed = 1")
    with pytest.raises(ContractError, match="Unsupported config file format"):
        load_config_file(str(path))


def test_load_config_file_json(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 7, "k": 1}))
    assert load_config_file(str(path)) == {"seed": 7, "k": 1}


# Teste com JSON (para cobertura da exceção ImportError)
def test_configure_logging_json_format_without_lib(monkeypatch):
    import builtins
    original_import = builtins.__import__

    def mock_import(name, *args, **kwargs):
        if name == "pythonjsonlogger":
            raise ImportError("Simulando pythonjsonlogger não instalado")
        return original_import(name, *args, **kwargs)

    monkeypatch.setattr(builtins, "__import__", mock_import)
    configure_logging(log_format="json")
    get_traditional_logger().warning("Teste sem json logger")


# Teste de load_config_from_env
def test_load_config_from_env(monkeypatch):
    monkeypatch.setenv("LOG_ENV", "test_env")
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("LOG_FILE", "/var/log/test.log")
    monkeypatch.setenv("TLG_SEED", "random")
    monkeypatch.setenv("TLG_THREADS", "4")
    monkeypatch.delenv("TLG_WEIGHT_BOUND", raising=False)

    config = load_config_from_env()
    assert config["env"] == "test_env"
    assert config["log_level"] == "DEBUG"
    assert config["log_file"] == "/var/log/test.log"
    assert config["seed"] == "random"
    assert config["threads"] == 4
    assert config["weight_bound"] is None


def test_load_config_from_env_rejects_non_integer(monkeypatch):
    monkeypatch.setenv("TLG_THREADS", "muitas")
    with pytest.raises(ContractError, match="TLG_THREADS"):
        load_config_from_env()


# Teste com custom_handlers
def test_configure_logging_with_custom_handlers():
    custom_handler = {
        "class": "logging.StreamHandler",
        "level": "INFO",
        "formatter": "default"
    }
    configure_logging(custom_handlers={"my_custom": custom_handler})
    assert "my_custom" in [h.name for h in logging.getLogger().handlers]


# Teste: o ambiente (env ou LOG_ENV) entra nos eventos structlog
@pytest.mark.skipif('structlog' not in sys.modules, reason="structlog não instalado")
def test_structlog_events_carry_env(capsys, monkeypatch):
    import structlog
    try:
        configure_logging(env="homologacao", use_structlog=True, log_format="json", log_level="INFO")
        get_structlog_logger(component="teste").info("Evento com ambiente")
        assert '"env": "homologacao"' in capsys.readouterr().err

        monkeypatch.setenv("LOG_ENV", "laboratorio")
        configure_logging(use_structlog=True, log_format="json", log_level="INFO")
        get_structlog_logger(component="teste").info("Evento do ambiente")
        assert '"env": "laboratorio"' in capsys.readouterr().err
    finally:
        structlog.contextvars.clear_contextvars()


def test_load_config_file_malformed_json(tmp_path):
    path = tmp_path / "ruim.json"
    path.write_text("{\"seed\": 7,")
    with pytest.raises(ContractError, match="Malformed config file"):
        load_config_file(str(path))


def test_load_config_file_requires_mapping(tmp_path):
    path = tmp_path / "lista.json"
    path.write_text("[1, 2]")
    with pytest.raises(ContractError, match="must hold a mapping"):
        load_config_file(str(path))
