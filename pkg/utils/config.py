"""
Configuration loading: YAML file over built-in defaults, plus the
SEQMBQC_MAX_AMPS environment override for the state-vector cap. The last loaded
configuration is active: simulation code without an explicit setting reads it.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Optional, Union

import yaml

logger = logging.getLogger(__name__)

CONFIG_PATH = "config.yaml"
MAX_AMPS_ENV = "SEQMBQC_MAX_AMPS"

DEFAULT_CONFIG = {
    'simulation': {
        'random_seed': 0,
        'max_amplitudes': 2 ** 24,
    },
    'tolerances': {
        'exact_identity': 1e-12,
        'state_residual': 1e-10,
        'probability_floor': 1e-14,
        'physicality': 1e-10,
        'purity': 1e-8,
    },
    'suites': {
        'swap': {'max_n': 6, 'random_count': 200, 'random_sizes': [7, 8]},
        'eq1': {'max_n': 6, 'random_count': 100, 'random_sizes': [7, 8]},
        'eq2': {'max_n': 6, 'random_count': 100, 'random_sizes': [7, 8]},
        'cv_lc': {'random_count': 200, 'max_modes': 8},
        'qudit': {'dimensions': [2, 3, 5], 'max_n': 4},
        'protocol': {'schedules': 20, 'max_cycles': 6, 'basis_trials': 100},
        'fig4': {'random_inputs': 50},
        'cv_squeeze': {'graphs': 20, 'zetas': [0.0, 0.5, 1.0, 2.0], 'max_modes': 6},
    },
}

_active_config = DEFAULT_CONFIG


def _deep_merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[Union[str, Path]] = None) -> dict:
    """
    Load configuration from a YAML file, falling back to DEFAULT_CONFIG.

    An explicit path that does not exist is an error; the default path is optional.
    The loaded configuration becomes the active one (see activate_config).
    """
    explicit = path is not None
    config_path = Path(path if explicit else CONFIG_PATH)
    if not config_path.exists():
        if explicit:
            raise FileNotFoundError(f"Config file not found: {config_path}")
        logger.debug("No %s found, using built-in defaults", config_path)
        return activate_config(copy.deepcopy(DEFAULT_CONFIG))

    with open(config_path, 'r', encoding='utf-8') as f:
        loaded = yaml.safe_load(f) or {}
    if not isinstance(loaded, dict):
        raise ValueError(f"Config file {config_path} must contain a mapping")
    logger.debug("Loaded configuration from %s", config_path)
    return activate_config(_deep_merge(DEFAULT_CONFIG, loaded))


def activate_config(config: dict) -> dict:
    """
    Make config the source of the amplitude cap, probability floor and
    physicality tolerance for calls that do not pass their own.
    """
    global _active_config
    _active_config = config
    return config


def active_config() -> dict:
    return _active_config


def max_amplitudes(config: Optional[dict] = None) -> int:
    """Amplitude cap: SEQMBQC_MAX_AMPS if set, else the configured value"""
    env = os.environ.get(MAX_AMPS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{MAX_AMPS_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{MAX_AMPS_ENV} must be positive, got {value}")
        return value
    cfg = config if config is not None else _active_config
    return int(cfg['simulation']['max_amplitudes'])


def probability_floor(config: Optional[dict] = None) -> float:
    cfg = config if config is not None else _active_config
    return float(cfg['tolerances']['probability_floor'])


def physicality_tolerance(config: Optional[dict] = None) -> float:
    cfg = config if config is not None else _active_config
    return float(cfg['tolerances']['physicality'])
