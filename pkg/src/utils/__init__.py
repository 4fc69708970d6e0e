from src.utils.config import load_config_dict, load_config_file, load_config_from_env

__all__ = ["load_config_dict", "load_config_file", "load_config_from_env"] 