"""Rendering grids and reports to byte-stable PNG / SVG files.

Determinism is part of the contract: the same inputs must give the same
bytes so rendered figures can be content-addressed and diffed. Randomized
SVG ids are pinned with a fixed hash salt, embedded dates are suppressed,
and the writer tag is fixed; everything else matplotlib emits is a pure
function of the input.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .gridfile import GridData, PlotDataError, load_grid
from .recipes import (
    PANEL_GROUPS,
    QUANTITY_LABELS,
    FigureRecipe,
    RecipeError,
    axis_label,
    recipe_for_grid,
)

_DPI = 150
_SOFTWARE_TAG = "valleyqst-plots"

_DETERMINISM = {
    "svg.hashsalt": _SOFTWARE_TAG,
    # glyphs as paths: output independent of the font files installed
    "svg.fonttype": "path",
}


def _save(fig, out_dir: Path, stem: str, formats) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        path = out_dir / f"{stem}.{fmt}"
        if fmt == "svg":
            fig.savefig(path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(path, format="png", dpi=_DPI,
                        metadata={"Software": _SOFTWARE_TAG})
        written.append(path)
    plt.close(fig)
    return sorted(written)


def _fixed_note(grid: GridData) -> str:
    return ", ".join(f"{axis_label(k)} = {v:g}"
                     for k, v in sorted(grid.fixed.items()))


def _draw_panel(ax, grid: GridData, recipe: FigureRecipe):
    levels = np.asarray(recipe.levels)
    # clip to the level span for the fill only; probabilities can graze
    # the boundaries by rounding
    z = np.clip(grid.values.T, levels[0], levels[-1])
    filled = ax.contourf(grid.axis1.values, grid.axis2.values, z,
                         levels=levels, cmap=recipe.cmap)
    if np.ptp(grid.values) > 0.0:
        ax.contour(grid.axis1.values, grid.axis2.values, z,
                   levels=levels, colors="black", linewidths=0.4)
    ax.set_xscale(recipe.xscale)
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    return filled


def render_file(csv_path, out_dir=".", recipe: str | None = None,
                formats=None) -> list[Path]:
    """Render one grid CSV (plus metadata) into a single contour figure.

    Returns the written paths. ``recipe`` forces one of the known preset
    recipes; by default the grid's own metadata decides.
    """
    grid = load_grid(csv_path)
    chosen = recipe_for_grid(grid, recipe)
    formats = tuple(formats) if formats else chosen.formats
    with matplotlib.rc_context(_DETERMINISM):
        fig, ax = plt.subplots(figsize=(5.4, 4.2), dpi=_DPI,
                               layout="constrained")
        filled = _draw_panel(ax, grid, chosen)
        label = QUANTITY_LABELS.get(grid.quantity, grid.quantity)
        fig.colorbar(filled, ax=ax, label=label)
        title = f"{chosen.stem}: {label}"
        note = _fixed_note(grid)
        if note:
            title += f"  ({note})"
        ax.set_title(title, fontsize=10)
        return _save(fig, out_dir, chosen.stem or Path(csv_path).stem, formats)


def render_panels(csv_paths, out_dir=".", recipe: str = "fig9",
                  formats=("png", "svg")) -> list[Path]:
    """Render a panel group (one figure, caption order) from member CSVs.

    Every member grid of the group must be present exactly once; panels
    are placed by the group's caption order, not the argument order.
    """
    try:
        members = PANEL_GROUPS[recipe]
    except KeyError:
        raise RecipeError(
            f"unknown panel recipe {recipe!r}; choose from "
            f"{', '.join(PANEL_GROUPS)}") from None
    grids = {}
    for path in csv_paths:
        grid = load_grid(path)
        if grid.preset not in members:
            raise RecipeError(
                f"{path}: preset {grid.preset!r} is not part of recipe "
                f"{recipe!r}")
        if grid.preset in grids:
            raise RecipeError(f"duplicate preset {grid.preset!r} in panel set")
        grids[grid.preset] = grid
    missing = [m for m in members if m not in grids]
    if missing:
        raise RecipeError(
            f"panel recipe {recipe!r} is missing {', '.join(missing)}")

    ncols = 3
    nrows = (len(members) + ncols - 1) // ncols
    with matplotlib.rc_context(_DETERMINISM):
        fig, axes = plt.subplots(nrows, ncols,
                                 figsize=(3.6 * ncols, 3.1 * nrows),
                                 dpi=_DPI, layout="constrained",
                                 sharex=True, sharey=True)
        filled = None
        for k, (name, ax) in enumerate(zip(members, np.ravel(axes))):
            grid = grids[name]
            panel = recipe_for_grid(grid)
            filled = _draw_panel(ax, grid, panel)
            letter = chr(ord("a") + k)
            ax.set_title(f"({letter})  {_fixed_note(grid)}", fontsize=9)
            if k % ncols:
                ax.set_ylabel("")
            if k < (nrows - 1) * ncols:
                ax.set_xlabel("")
        quantity = grids[members[0]].quantity
        fig.colorbar(filled, ax=axes,
                     label=QUANTITY_LABELS.get(quantity, quantity))
        return _save(fig, out_dir, recipe, formats)


def render_table(json_path, out_dir=".", formats=("png", "svg")) -> list[Path]:
    """Render a baseline report JSON as a small summary table image."""
    json_path = Path(json_path)
    if not json_path.is_file():
        raise PlotDataError(f"missing report file {json_path}")
    try:
        report = json.loads(json_path.read_text())
    except json.JSONDecodeError as exc:
        raise PlotDataError(f"{json_path}: not valid JSON ({exc})") from exc
    if not isinstance(report, dict):
        raise PlotDataError(f"{json_path}: report must be a JSON object")

    rows = []
    for key in sorted(report):
        if key.endswith("_pass") or key in ("target", "tolerance"):
            continue
        value = report[key]
        if not isinstance(value, (int, float)):
            continue
        verdict = report.get(f"{key}_pass")
        rows.append([key, f"{value:.6f}",
                     "" if verdict is None else ("PASS" if verdict else "FAIL")])
    if not rows:
        raise PlotDataError(f"{json_path}: no numeric entries to tabulate")

    with matplotlib.rc_context(_DETERMINISM):
        fig, ax = plt.subplots(figsize=(4.8, 0.6 + 0.32 * len(rows)),
                               dpi=_DPI)
        ax.axis("off")
        table = ax.table(cellText=rows,
                         colLabels=["quantity", "value", "verdict"],
                         cellLoc="center", loc="center")
        table.scale(1.0, 1.3)
        if "target" in report and "tolerance" in report:
            ax.set_title(
                f"target {report['target']:g} within {report['tolerance']:g}",
                fontsize=10)
        return _save(fig, out_dir, json_path.stem, formats)


__all__ = ["render_file", "render_panels", "render_table"]
