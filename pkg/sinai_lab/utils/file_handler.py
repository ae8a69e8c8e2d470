"""Helper functions for saving results as JSON and CSV."""
import csv
import io
import json
import math
import os
import tempfile
from enum import Enum

import numpy as np

from ..exceptions import ResultIoError


def to_builtin(data):
    """Convert numpy scalars, arrays and enums into JSON-native values.

    Args:
        data: The value to convert.

    Returns:
        The converted value. Non-finite floats become ``None``.
    """
    if isinstance(data, dict):
        return {str(key): to_builtin(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_builtin(item) for item in data]
    if isinstance(data, np.ndarray):
        return [to_builtin(item) for item in data.tolist()]
    if isinstance(data, Enum):
        return data.value
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, (float, np.floating)):
        value = float(data)
        return value if math.isfinite(value) else None
    return data


def _write_atomically(file_path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(file_path))
    try:
        os.makedirs(directory, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "w", dir=directory, suffix=".tmp", delete=False, encoding="utf-8", newline=""
        ) as file:
            file.write(text)
            temp_path = file.name
        os.replace(temp_path, file_path)
    except OSError as exception:
        raise ResultIoError("Cannot write " + str(file_path) + ": " + str(exception)) from exception


def save_as_json(data, file_path: str) -> None:
    """Save the data as JSON to the specified file.

    Keys are sorted and the file is replaced atomically, so equal data always
    produces byte-identical files.

    Args:
        data: The data to be saved.
        file_path (str): The destination path.

    Raises:
        ResultIoError: If the file cannot be written.
    """
    _write_atomically(file_path, json.dumps(to_builtin(data), sort_keys=True, indent=2) + "\n")


def save_rows_as_csv(rows: list[dict], file_path: str, header_comment: str = None, columns: list[str] = None) -> None:
    """Save a list of flat rows as CSV.

    Args:
        rows (list[dict]): The rows.
        file_path (str): The destination path.
        header_comment (str): Optional text written first as a ``# `` line.
        columns (list[str]): Column order; defaults to the sorted union of keys.
    """
    rows = [to_builtin(row) for row in rows]
    if columns is None:
        columns = sorted({key for row in rows for key in row})

    buffer = io.StringIO()
    if header_comment:
        buffer.write("# " + header_comment + "\n")
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: "" if row.get(key) is None else row.get(key) for key in columns})
    _write_atomically(file_path, buffer.getvalue())


def read_from_json(file_path: str):
    """Read the data from the specified file.

    Args:
        file_path (str): The path of the file.

    Returns:
        The decoded data.

    Raises:
        ResultIoError: If the file is missing or not valid JSON.
    """
    try:
        with open(file_path, encoding="utf-8") as file:
            return json.load(file)
    except (OSError, ValueError) as exception:
        raise ResultIoError("Cannot read " + str(file_path) + ": " + str(exception)) from exception


def save_as_text(text: str, file_path: str) -> None:
    """Replace the file with the given text atomically."""
    _write_atomically(file_path, text)
