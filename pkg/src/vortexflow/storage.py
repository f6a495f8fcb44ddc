"""Snapshot and diagnostics persistence.

Field snapshots use the little-endian "VF2D" binary layout:

    magic "VF2D" | u32 version=1 | u32 n | f64 half_width | f64 time
    | n*n f64 values, row-major

Round-trips are bit-exact.  Diagnostics go to CSV with the Functionals
column order; manifests are JSON written atomically (tmp file + rename).
"""

import json
import os
import struct
import tempfile

import numpy as np

from .errors import FormatError
from .functionals import Functionals
from .grid import Grid, ScalarField

MAGIC = b"VF2D"
VERSION = 1
_HEADER = struct.Struct("<4sII dd")


def write_vf2d(path, field: ScalarField):
    """Write a snapshot; values are stored row-major in native float64."""
    g = field.grid
    payload = _HEADER.pack(MAGIC, VERSION, g.n, g.half_width, field.time)
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_vf2d(path) -> ScalarField:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise FormatError(f"{path}: truncated header")
        magic, version, n, half_width, time = _HEADER.unpack(head)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        data = fh.read(8 * n * n)
        if len(data) != 8 * n * n:
            raise FormatError(f"{path}: truncated payload")
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes")
    values = np.frombuffer(data, dtype="<f8").reshape(n, n).copy()
    return ScalarField(Grid(n, half_width), values, time)


def write_diagnostics_csv(path, rows):
    """Rows of Functionals to CSV; full float64 round-trip precision."""
    names = Functionals.column_names()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for rec in rows:
            fh.write(",".join(repr(float(v)) for v in rec.as_row()) + "\n")


def read_diagnostics_csv(path):
    """CSV back to a dict of column -> array."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = [[float(v) for v in line.strip().split(",")] for line in fh if line.strip()]
    arr = np.array(data) if data else np.empty((0, len(header)))
    return {name: arr[:, k] for k, name in enumerate(header)}


def write_json_atomic(path, payload):
    """Serialize JSON to a temp file and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
