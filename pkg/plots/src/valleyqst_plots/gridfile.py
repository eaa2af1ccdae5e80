"""Reading sweep grids back from their CSV / metadata file pairs.

The producing tool writes one row per grid cell, first axis outermost,
with a three-column header naming the axes, and a ``<stem>.meta.json``
companion carrying axis definitions, scales and the argmax record. Both
files together are the only interface to the physics package; nothing
here imports it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class PlotDataError(ValueError):
    """A grid file pair is missing, inconsistent, or malformed."""


@dataclass(frozen=True)
class AxisInfo:
    """One grid axis: parameter name, sample values, and plot scale."""

    name: str
    values: np.ndarray
    scale: str


@dataclass(frozen=True)
class GridData:
    """A loaded sweep grid; ``values[i, j]`` follows axis1 x axis2."""

    source: Path
    preset: str | None
    quantity: str
    axis1: AxisInfo
    axis2: AxisInfo
    values: np.ndarray
    fixed: dict


def meta_path_for(csv_path: Path) -> Path:
    """Companion metadata path: ``grid.csv`` pairs with ``grid.meta.json``."""
    return csv_path.with_name(csv_path.stem + ".meta.json")


def _read_meta(path: Path) -> dict:
    if not path.is_file():
        raise PlotDataError(f"missing metadata file {path}")
    try:
        meta = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PlotDataError(f"{path}: not valid JSON ({exc})") from exc
    for key in ("axis1", "axis2", "quantity"):
        if key not in meta:
            raise PlotDataError(f"{path}: metadata lacks {key!r}")
    return meta


def _axis_meta(meta: dict, key: str, path: Path) -> tuple[str, int, str]:
    axis = meta[key]
    try:
        return str(axis["name"]), int(axis["points"]), str(axis["scale"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PlotDataError(f"{path}: malformed {key} record") from exc


def load_grid(csv_path, meta_path=None) -> GridData:
    """Load one CSV / metadata pair and cross-check their shapes.

    The metadata is authoritative for axis names, sizes and scales; the
    CSV supplies the actual sample values and the grid. Any disagreement
    between the two files is a hard error, not something to paper over.
    """
    csv_path = Path(csv_path)
    if not csv_path.is_file():
        raise PlotDataError(f"missing grid file {csv_path}")
    meta_file = Path(meta_path) if meta_path is not None else meta_path_for(csv_path)
    meta = _read_meta(meta_file)
    name1, n1, scale1 = _axis_meta(meta, "axis1", meta_file)
    name2, n2, scale2 = _axis_meta(meta, "axis2", meta_file)

    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise PlotDataError(f"{csv_path}: empty file")
    header = rows[0]
    if header != [name1, name2, "value"]:
        raise PlotDataError(
            f"{csv_path}: header {header!r} does not match metadata axes "
            f"[{name1!r}, {name2!r}, 'value']")
    body = rows[1:]
    if len(body) != n1 * n2:
        raise PlotDataError(
            f"{csv_path}: shape mismatch, {len(body)} rows for a "
            f"{n1} x {n2} grid")
    try:
        data = np.array(body, dtype=float)
    except ValueError as exc:
        raise PlotDataError(f"{csv_path}: non-numeric cell ({exc})") from exc

    col1 = data[:, 0].reshape(n1, n2)
    col2 = data[:, 1].reshape(n1, n2)
    values = data[:, 2].reshape(n1, n2)
    # axis1 is the outer loop: constant along each row, and every row
    # must repeat the same axis2 sequence
    if np.ptp(col1, axis=1).max(initial=0.0) != 0.0 or \
            not np.array_equal(col2, np.broadcast_to(col2[0], col2.shape)):
        raise PlotDataError(
            f"{csv_path}: shape mismatch, rows are not in axis1-major order")

    fixed = meta.get("fixed", {})
    if not isinstance(fixed, dict):
        raise PlotDataError(f"{meta_file}: 'fixed' must be an object")
    preset = meta.get("preset")
    return GridData(
        source=csv_path,
        preset=str(preset) if preset is not None else None,
        quantity=str(meta["quantity"]),
        axis1=AxisInfo(name=name1, values=col1[:, 0].copy(), scale=scale1),
        axis2=AxisInfo(name=name2, values=col2[0].copy(), scale=scale2),
        values=values,
        fixed={str(k): float(v) for k, v in fixed.items()},
    )


__all__ = ["AxisInfo", "GridData", "PlotDataError", "load_grid",
           "meta_path_for"]
