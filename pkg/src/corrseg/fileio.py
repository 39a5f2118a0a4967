"""On-disk formats: matrix text files, dataset record files, JSON artifacts.

All writers are deterministic: fixed key order, floats rendered with 17
significant digits (enough to round-trip a double exactly), one trailing
newline. Re-running a seeded command therefore reproduces files byte for
byte.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import FileFormatError

SPLIT_NAMES = ("train", "validation", "test")
DATASET_EXT = ".rec"


def format_float(x: float) -> str:
    """Render a float with 17 significant digits and an explicit decimal."""
    value = float(x)
    if not math.isfinite(value):
        raise FileFormatError(f"cannot serialize non-finite value {value!r}")
    text = format(value, ".17g")
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def _emit(obj: object, lines: list[str], indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            lines[-1] += "{}"
            return
        lines[-1] += "{"
        items = list(obj.items())
        for i, (key, value) in enumerate(items):
            lines.append(f"{pad}  {json.dumps(str(key))}: ")
            _emit(value, lines, indent + 1)
            if i < len(items) - 1:
                lines[-1] += ","
        lines.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            lines[-1] += "[]"
            return
        lines[-1] += "["
        for i, value in enumerate(seq):
            lines.append(pad + "  ")
            _emit(value, lines, indent + 1)
            if i < len(seq) - 1:
                lines[-1] += ","
        lines.append(pad + "]")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        lines[-1] += "true" if obj else "false"
    elif obj is None:
        lines[-1] += "null"
    elif isinstance(obj, (int, np.integer)):
        lines[-1] += str(int(obj))
    elif isinstance(obj, (float, np.floating)):
        lines[-1] += format_float(obj)
    elif isinstance(obj, str):
        lines[-1] += json.dumps(obj)
    else:
        raise FileFormatError(f"cannot serialize value of type {type(obj).__name__}")


def dumps_json(obj: object) -> str:
    """Deterministic JSON text for a tree of dicts, lists, and scalars."""
    lines = [""]
    _emit(obj, lines, 0)
    return "\n".join(lines) + "\n"


def write_json(path: str | Path, obj: object) -> None:
    Path(path).write_text(dumps_json(obj))


def read_json(path: str | Path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc


def write_matrix(path: str | Path, values: np.ndarray) -> None:
    """Write a matrix as comma-separated rows, one row per line."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise FileFormatError(f"matrix writer needs a 2-D array, got ndim {values.ndim}")
    rows = [",".join(format_float(v) for v in row) for row in values]
    Path(path).write_text("\n".join(rows) + "\n")


def read_matrix(path: str | Path) -> np.ndarray:
    """Parse a comma-separated matrix file; '#' lines and blanks are ignored.

    Returns the raw array without validating correlation-matrix invariants;
    callers wrap it in :class:`corrseg.core.CorrelationMatrix`.
    """
    rows: list[list[float]] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rows.append([float(cell) for cell in stripped.split(",")])
        except ValueError as exc:
            raise FileFormatError(f"{path}:{lineno}: bad matrix row ({exc})") from exc
    if not rows:
        raise FileFormatError(f"{path}: no matrix rows found")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise FileFormatError(f"{path}: rows have inconsistent lengths")
    return np.array(rows, dtype=np.float64)


def split_path(directory: str | Path, split: str, ext: str = DATASET_EXT) -> Path:
    if split not in SPLIT_NAMES:
        raise FileFormatError(f"unknown split {split!r}, expected one of {SPLIT_NAMES}")
    return Path(directory) / f"{split}{ext}"


def write_dataset_split(
    path: str | Path, records: Iterable[tuple[np.ndarray, np.ndarray]]
) -> int:
    """Write records as '<matrix floats>|<target bits>' lines.

    The matrix is flattened row-major. Returns the number of records written.
    """
    lines = []
    for values, bits in records:
        flat = np.asarray(values, dtype=np.float64).reshape(-1)
        cells = ",".join(format_float(v) for v in flat)
        targets = ",".join(str(int(b)) for b in np.asarray(bits).reshape(-1))
        lines.append(f"{cells}|{targets}")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
    return len(lines)


def read_dataset_split(path: str | Path) -> list[tuple[np.ndarray, np.ndarray]]:
    """Parse a dataset split file back into (matrix, bits) pairs."""
    records: list[tuple[np.ndarray, np.ndarray]] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split("|")
        if len(parts) != 2:
            raise FileFormatError(f"{path}:{lineno}: expected one '|' separator")
        try:
            flat = np.array([float(v) for v in parts[0].split(",")])
            bits = np.array([int(v) for v in parts[1].split(",")])
        except ValueError as exc:
            raise FileFormatError(f"{path}:{lineno}: bad record ({exc})") from exc
        side = math.isqrt(flat.size)
        if side * side != flat.size:
            raise FileFormatError(
                f"{path}:{lineno}: {flat.size} values do not form a square matrix"
            )
        if bits.size != side:
            raise FileFormatError(
                f"{path}:{lineno}: {bits.size} target bits for a {side}x{side} matrix"
            )
        records.append((flat.reshape(side, side), bits))
    return records
