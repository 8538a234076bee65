"""Config: load .env, expose SSA_OUTPUT_DIR, SSA_DATA_DIR, SSA_LOG_LEVEL."""
from .config import (
    load_env,
    get_output_dir,
    get_default_output_dir,
    get_data_dir,
    get_log_level,
)

__all__ = [
    "load_env",
    "get_output_dir",
    "get_default_output_dir",
    "get_data_dir",
    "get_log_level",
]
