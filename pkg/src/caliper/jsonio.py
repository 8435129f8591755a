"""Deterministic JSON emission used by the service, the CLI, and tests.

Floats are written with Python's shortest round-trip representation, so
identical payloads always serialize to identical bytes and every number
parses back to the exact same IEEE-754 value.
"""

import json
from typing import Any

import numpy as np


def jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays into plain Python values."""
    if isinstance(value, dict):
        return {key: jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return [jsonable(item) for item in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def dumps(payload: Any) -> str:
    """Serialize a payload deterministically (compact separators, no NaN)."""
    return json.dumps(jsonable(payload), separators=(",", ":"), allow_nan=False)
