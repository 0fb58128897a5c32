"""
Utility Functions for pmedit

This module provides the shared plumbing used across all modules: configuration
loading, environment settings, operation logging, timing and exact rational
formatting.
"""

import json
import math
import sys
import time
from fractions import Fraction
from functools import lru_cache, wraps
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic_settings import BaseSettings, SettingsConfigDict

CONFIG_PATH = Path(__file__).resolve().parent / "pmedit_config.json"

# Extended rationals: exact Fractions plus +inf for empty minima and infinite bars
ExtRational = Union[Fraction, float]
INFINITY = math.inf

_VERBOSE = False


class PMEditSettings(BaseSettings):
    """Environment settings. Only PMEDIT_SEED is read."""

    model_config = SettingsConfigDict(env_prefix="PMEDIT_")

    seed: int = 0


@lru_cache(maxsize=1)
def load_config() -> Dict[str, Any]:
    """
    Load the pmedit configuration document.

    Returns:
        Parsed contents of pmedit_config.json
    """
    with open(CONFIG_PATH, "r") as f:
        return json.load(f)


def config_value(section: str, key: str) -> Any:
    """
    Look up a numeric default from the configuration.

    Args:
        section: Top-level section name (e.g. "natural_iso")
        key: Key inside that section

    Returns:
        The configured value
    """
    config = load_config()
    if section not in config or key not in config[section]:
        raise ValueError(f"Missing configuration value {section}.{key}")
    return config[section][key]


def default_seed() -> int:
    """Seed for randomized search: PMEDIT_SEED when set, else 0."""
    return PMEditSettings().seed


def set_verbose(flag: bool) -> None:
    """Turn console diagnostics on or off."""
    global _VERBOSE
    _VERBOSE = flag


def log_event(prefix: str, message: str) -> None:
    """
    Print a bracketed diagnostic line to stderr when verbose mode is on.

    Args:
        prefix: Component tag, e.g. "EDIT"
        message: Free-form message
    """
    if _VERBOSE:
        print(f"[{prefix}] {message}", file=sys.stderr)


def log_operation(log: List[Dict[str, Any]], prefix: str, op_type: str, details: Dict[str, Any]) -> None:
    """
    Append an operation entry to a component's operation log.

    Args:
        log: The component's operation_log list
        prefix: Component tag
        op_type: Operation type, e.g. "CHECK" or "PARSE"
        details: Operation details
    """
    log.append({
        "type": op_type,
        "details": details,
        "prefix": prefix
    })
    log_event(prefix, f"{op_type} {details}")


def measure_time(func):
    """
    Decorator to measure execution time of functions.

    Args:
        func: Function to measure

    Returns:
        Wrapper function that measures execution time
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.time()
        result = func(*args, **kwargs)
        execution_time = time.time() - start_time
        log_event("TIMING", f"{func.__name__} executed in {execution_time:.4f} seconds")
        return result
    return wrapper


def format_rational(value: ExtRational) -> str:
    """
    Format an extended rational in fraction syntax ("3/4", "2", "inf").

    Args:
        value: Fraction or +inf

    Returns:
        Canonical string form
    """
    if isinstance(value, float):
        if value == INFINITY:
            return "inf"
        raise ValueError(f"Non-exact value {value!r} cannot be formatted")
    return str(Fraction(value))


def format_point(point) -> str:
    """Format a point as "(a, b, ...)" with exact coordinates."""
    return "(" + ", ".join(format_rational(c) for c in point) + ")"
