"""Configuration settings for the ffheat simulator."""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base directory of the project
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Output Configuration
OUTPUT_DIR_ENV = "FFHEAT_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "output"

# Logging Configuration
LOG_LEVEL = os.getenv("FFHEAT_LOG_LEVEL", "INFO")
LOG_FILE = Path(os.getenv("FFHEAT_LOG_FILE", str(BASE_DIR / "logs" / "ffheat.log")))

# Numerical defaults applied when a config omits the key
NUMERICS_DEFAULTS = {
    "n_max": 64,
    "quad_points": 1024,
    "M": 512,
    "steps_per_T_FF": 4096,  # dt = T_FF / steps_per_T_FF
    "tail_tol": 1e-10,
    "x_resolution": 201,
    "flux_times": 41,
    "width_points": 4096,
}


def resolve_output_dir(cli_value: Optional[str] = None, config_value: Optional[str] = None) -> Path:
    """Pick the output directory: CLI flag, then config, then environment, then default."""
    for candidate in (cli_value, config_value, os.getenv(OUTPUT_DIR_ENV)):
        if candidate:
            return Path(candidate)
    return Path(DEFAULT_OUTPUT_DIR)
