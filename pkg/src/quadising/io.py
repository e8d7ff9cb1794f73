"""CSV/JSON writers with byte-stable formatting.

Floats are written with ``repr`` (shortest round-trip form), one header line, fixed
column order; JSON uses sorted keys. Identical inputs therefore give identical bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class NonFiniteOutputError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteOutputError(f"refusing to write non-finite value {x}")
    return repr(x)


def write_csv(path, header: Sequence[str], columns: Iterable) -> Path:
    """Write equal-length columns under a one-line header."""
    cols = [np.asarray(c) for c in columns]
    if len(cols) != len(header):
        raise ValueError("header/column count mismatch")
    n = {len(c) for c in cols}
    if len(n) > 1:
        raise ValueError(f"columns have unequal lengths {sorted(n)}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    text = Path(path).read_text().splitlines()
    header = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    data = data.reshape(len(text) - 1, len(header))
    return {h: data[:, k] for k, h in enumerate(header)}


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if not math.isfinite(x):
            raise NonFiniteOutputError(f"refusing to write non-finite value {x}")
        return x
    return obj


def write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n")
    return path
