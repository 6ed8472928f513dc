"""Validation utilities for ffheat config files."""

from typing import Dict, Any
from pathlib import Path
import logging

from src.core.exceptions import ConfigError, FFHeatError
from src.services.config_loader import RunConfigLoader

logger = logging.getLogger(__name__)


def validate_config(config_path: str) -> Dict[str, Any]:
    """Validate a config file and return detailed validation results.

    Args:
        config_path: Path to the config file to validate

    Returns:
        Dictionary containing validation results with the following structure:
        {
            'success': bool,
            'stage': str,  # Which stage of validation failed
            'error': str,  # Error message if failed
            'details': Dict[str, Any]  # Additional details about the validation
        }
    """
    result: Dict[str, Any] = {
        'success': False,
        'stage': 'initial',
        'error': None,
        'details': {'path': str(config_path)},
    }

    path = Path(config_path)
    if not path.is_file():
        result['error'] = f"config file not found: {path}"
        return result

    result['stage'] = 'parsing'
    try:
        loader = RunConfigLoader.from_path(path)
    except ConfigError as e:
        result['error'] = str(e)
        result['details'].update(e.context)
        return result
    result['details']['explicit_keys'] = sorted(loader.explicit_keys)

    result['stage'] = 'validation'
    try:
        config = loader.load()
    except FFHeatError as e:
        result['error'] = str(e)
        result['details'].update(e.context)
        return result

    result['stage'] = 'complete'
    result['success'] = True
    result['details']['resolved'] = config.to_flat_dict()
    result['details']['T_FF'] = config.schedule.T_FF
    logger.info(f"Config {path} is valid ({len(loader.explicit_keys)} explicit keys)")
    return result
