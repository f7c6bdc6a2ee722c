#!/usr/bin/env python3
"""
Configuration for fincat-herm.
Values come from the environment, optionally seeded from config/.env.
"""

import os
from typing import Dict

from dotenv import load_dotenv

# Load environment variables from config directory
env_path = os.path.join(os.path.dirname(__file__), '..', 'config', '.env')
if os.path.exists(env_path):
    load_dotenv(dotenv_path=env_path)
else:
    load_dotenv()

DEFAULT_CAP = 10**6
DEFAULT_ORACLE_BOUND = 60
DEFAULT_MAX_MORPHISMS = 5000
DEFAULT_DB_URL = 'sqlite:///data/fincat.db'


def _positive_int(variable: str, default: int) -> int:
    raw = os.getenv(variable)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise ValueError(f"{variable} must be an integer, got {raw!r}")
    if value <= 0:
        raise ValueError(f"{variable} must be positive, got {value}")
    return value


def load_config() -> Dict:
    """
    Load engine configuration from environment variables.

    Read at call time, so tests and the CLI can change the environment between runs.

    Returns:
        Dict with keys cap, oracle_bound, max_morphisms, db_url and ledger

    Raises:
        ValueError: if a numeric variable is malformed or not positive
    """
    return {
        "cap": _positive_int('FINCAT_CAP', DEFAULT_CAP),
        "oracle_bound": _positive_int('FINCAT_ORACLE_BOUND', DEFAULT_ORACLE_BOUND),
        "max_morphisms": _positive_int('FINCAT_MAX_MORPHISMS', DEFAULT_MAX_MORPHISMS),
        "db_url": os.getenv('FINCAT_DB_URL', DEFAULT_DB_URL),
        "ledger": os.getenv('FINCAT_LEDGER', 'true').lower() == 'true',
    }


def default_cap() -> int:
    return load_config()["cap"]
