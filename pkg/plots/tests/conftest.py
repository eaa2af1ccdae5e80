"""Fixtures: synthetic grid file pairs in the producer's exact format.

The renderer's only contract with the physics package is the CSV/meta
file pair, so the tests write those files from literal strings: CRLF
lines, axis1-major row order, twelve-digit floats, and a flat JSON
metadata object.
"""

import json

import numpy as np
import pytest


def _fmt(x: float) -> str:
    return "%.12g" % x


def write_pair(directory, stem, *, axis1, axis2, values, quantity="yield",
               preset=None, fixed=None):
    """Write one CSV/meta pair; axes are (name, values, scale) triples."""
    name1, vals1, scale1 = axis1
    name2, vals2, scale2 = axis2
    values = np.asarray(values, dtype=float)
    assert values.shape == (len(vals1), len(vals2))

    lines = [f"{name1},{name2},value"]
    for i, v1 in enumerate(vals1):
        for j, v2 in enumerate(vals2):
            lines.append(f"{_fmt(v1)},{_fmt(v2)},{_fmt(values[i, j])}")
    csv_path = directory / f"{stem}.csv"
    csv_path.write_bytes(("\r\n".join(lines) + "\r\n").encode())

    meta = {
        "preset": preset,
        "quantity": quantity,
        "axis1": {"name": name1, "min": min(vals1), "max": max(vals1),
                  "points": len(vals1), "scale": scale1},
        "axis2": {"name": name2, "min": min(vals2), "max": max(vals2),
                  "points": len(vals2), "scale": scale2},
        "fixed": dict(fixed or {}),
        "version": "0.1.0",
    }
    meta_path = directory / f"{stem}.meta.json"
    meta_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return csv_path, meta_path


@pytest.fixture
def make_pair(tmp_path):
    def _make(stem="grid", **kwargs):
        defaults = dict(
            axis1=("gamma_SE_prime", np.geomspace(0.01, 100.0, 4), "log"),
            axis2=("gamma_iD_prime", np.geomspace(0.01, 100.0, 3), "log"),
            values=np.linspace(0.05, 0.95, 12).reshape(4, 3),
            quantity="yield",
            preset=None,
            fixed={"delta_omega_prime": 0.5},
        )
        defaults.update(kwargs)
        return write_pair(tmp_path, stem, **defaults)
    return _make


@pytest.fixture
def fig9_set(tmp_path):
    """All six members of the qubit-phase panel group, tiny grids."""
    paths = []
    rng = np.random.default_rng(7)
    for k, preset in enumerate(("fig9a", "fig9b", "fig9c",
                                "fig9d", "fig9e", "fig9f")):
        csv_path, _ = write_pair(
            tmp_path, preset,
            axis1=("ratio_beta", np.linspace(0.0, 1.0, 4), "linear"),
            axis2=("phi_beta", np.linspace(0.0, 2.0, 5), "linear"),
            values=rng.uniform(0.1, 0.9, size=(4, 5)),
            quantity="fidelity",
            preset=preset,
            fixed={"ratio_BA": 0.04 if k < 3 else 0.4,
                   "phi_DC": [0.0, 0.25, 0.5][k % 3]},
        )
        paths.append(csv_path)
    return paths
