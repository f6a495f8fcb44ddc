"""Snapshot format, CSV, and atomic manifest writes."""

import json
import os

import numpy as np
import pytest

import vortexflow as vf
from vortexflow.errors import FormatError
from vortexflow.functionals import Functionals
from vortexflow.storage import (read_diagnostics_csv, read_vf2d, write_diagnostics_csv,
                                write_json_atomic, write_vf2d)


def test_vf2d_round_trip_bit_exact(tmp_path):
    g = vf.make_grid(64, 8.0)
    rng = np.random.default_rng(7)
    field = vf.ScalarField(g, rng.normal(size=(64, 64)), time=1.2345678901234567)
    path = tmp_path / "field.vf2d"
    write_vf2d(path, field)
    back = read_vf2d(path)
    assert back.grid.n == 64
    assert back.grid.half_width == 8.0
    assert back.time == field.time
    assert np.array_equal(back.values, field.values)  # bit-exact


def test_vf2d_header_layout(tmp_path):
    g = vf.make_grid(16, 1.0)
    field = vf.ScalarField(g, np.zeros((16, 16)))
    path = tmp_path / "f.vf2d"
    write_vf2d(path, field)
    raw = path.read_bytes()
    assert raw[:4] == b"VF2D"
    assert int.from_bytes(raw[4:8], "little") == 1
    assert int.from_bytes(raw[8:12], "little") == 16
    assert len(raw) == 28 + 8 * 16 * 16  # 4s + u32 + u32 + f64 + f64 header


def test_vf2d_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.vf2d"
    bad.write_bytes(b"NOPE" + b"\x00" * 40)
    with pytest.raises(FormatError):
        read_vf2d(bad)
    g = vf.make_grid(16, 1.0)
    write_vf2d(tmp_path / "t.vf2d", vf.ScalarField(g, np.zeros((16, 16))))
    data = (tmp_path / "t.vf2d").read_bytes()
    (tmp_path / "trunc.vf2d").write_bytes(data[:-8])
    with pytest.raises(FormatError):
        read_vf2d(tmp_path / "trunc.vf2d")


def test_diagnostics_csv_round_trip(tmp_path):
    rows = [Functionals(time=0.0, mass=1.0, I=0.5, E=-0.125, S=-1.5),
            Functionals(time=0.25, mass=1.0, I=0.55, E=-0.124, S=-1.6)]
    path = tmp_path / "diag.csv"
    write_diagnostics_csv(path, rows)
    cols = read_diagnostics_csv(path)
    assert list(cols) == Functionals.column_names()
    assert cols["time"][1] == 0.25
    assert cols["E"][0] == -0.125  # repr round-trip keeps float64 exactly


def test_atomic_manifest(tmp_path):
    path = tmp_path / "sub" / "manifest.json"
    write_json_atomic(path, {"status": "ok", "value": 1.25})
    with open(path) as fh:
        data = json.load(fh)
    assert data == {"status": "ok", "value": 1.25}
    assert not [p for p in os.listdir(tmp_path / "sub") if p.endswith(".tmp")]
