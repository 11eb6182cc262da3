"""JSON exchange formats.

Matrix::

    {"rows": n, "cols": m, "data": [[re, im], ...]}   # row-major, n*m entries

A bare number in ``data`` is shorthand for ``[re, 0]``.

Point set::

    {"dim": d, "points": [[x1, ..., xd], ...]}
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionError


class FormatError(ValueError):
    """A document does not follow one of the exchange formats."""


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise FormatError(f"{where}: non-finite value")
    return float(x)


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise FormatError('matrix must be an object with "rows", "cols" and "data"')
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in (rows, cols)):
        raise FormatError(f"rows/cols must be non-negative integers, got {rows!r}, {cols!r}")
    if not isinstance(data, list):
        raise FormatError('"data" must be a list')
    if len(data) != rows * cols:
        raise DimensionError(f"data has {len(data)} entries, expected rows*cols = {rows * cols}")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, entry in enumerate(data):
        where = f"data[{i}]"
        if isinstance(entry, list):
            if len(entry) != 2:
                raise FormatError(f"{where}: expected [re, im]")
            out[i] = complex(_number(entry[0], where), _number(entry[1], where))
        else:
            out[i] = _number(entry, where)
    return out.reshape(rows, cols)


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    rows, cols = M.shape
    data = [[float(z.real), float(z.imag)] for z in M.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def points_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or not {"dim", "points"} <= obj.keys():
        raise FormatError('point set must be an object with "dim" and "points"')
    dim, pts = obj["dim"], obj["points"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(pts, list) or not pts:
        raise FormatError('"points" must be a nonempty list')
    out = np.empty((len(pts), dim))
    for i, p in enumerate(pts):
        if not isinstance(p, list):
            p = [p]
        if len(p) != dim:
            raise DimensionError(f"points[{i}] has {len(p)} coordinates, expected {dim}")
        out[i] = [_number(x, f"points[{i}]") for x in p]
    return out


def points_to_json(pts) -> dict:
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    return {"dim": int(pts.shape[1]), "points": pts.tolist()}


def load_json(path) -> object:
    """Read a JSON file; decoding errors keep their line/column."""
    text = Path(path).read_text()
    return json.loads(text)


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(load_json(path))


def load_points(path) -> np.ndarray:
    return points_from_json(load_json(path))


def dump_matrix(M, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(M)))


def is_pointset(obj) -> bool:
    return isinstance(obj, dict) and "points" in obj

