"""
Utility functions for KlSpark.

This module provides small helpers shared by the CLI, the service and storage.
"""

import os
import json
import uuid
import logging
from typing import Any, Optional

import numpy as np


logger = logging.getLogger("klspark.utils")


def generate_id() -> str:
    """
    Generate a unique ID.

    Returns:
        A UUID as a string
    """
    return str(uuid.uuid4())


def to_jsonable(value: Any) -> Any:
    """
    Convert numpy scalars and arrays (possibly nested) to plain Python values.

    Args:
        value: Any value

    Returns:
        A structure json.dump accepts without a default hook
    """
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def save_to_json_file(data: Any, file_path: str) -> bool:
    """
    Save data to a JSON file.

    Args:
        data: Data to save
        file_path: Path to the output file

    Returns:
        True if successful, False otherwise
    """
    try:
        os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)

        with open(file_path, 'w') as f:
            json.dump(to_jsonable(data), f, indent=2, sort_keys=True, default=str)
        return True
    except Exception as e:
        logger.error(f"Error saving to JSON file {file_path}: {e}")
        return False


def load_from_json_file(file_path: str) -> Optional[Any]:
    """
    Load data from a JSON file.

    Args:
        file_path: Path to the input file

    Returns:
        Loaded data if successful, None otherwise
    """
    try:
        if not os.path.exists(file_path):
            return None

        with open(file_path, 'r') as f:
            return json.load(f)
    except Exception as e:
        logger.error(f"Error loading from JSON file {file_path}: {e}")
        return None
