"""Batch renderer for the transfer package's sweep grids.

Consumes only the files the main package writes (long-format CSV plus a
``.meta.json`` companion) and turns them into contour figures: one panel
per grid, or the six-grid qubit-phase set as a 2x3 panel figure. The
baseline report JSON renders as a summary table image. Output is
deterministic byte for byte so figures can be diffed in review.
"""

from .gridfile import AxisInfo, GridData, PlotDataError, load_grid
from .recipes import (
    DEFAULT_LEVELS,
    PANEL_GROUPS,
    SWEEP_PRESETS,
    FigureRecipe,
    RecipeError,
    axis_label,
    recipe_for_grid,
)
from .render import render_file, render_panels, render_table

__version__ = "0.1.0"

__all__ = [
    "AxisInfo",
    "DEFAULT_LEVELS",
    "FigureRecipe",
    "GridData",
    "PANEL_GROUPS",
    "PlotDataError",
    "RecipeError",
    "SWEEP_PRESETS",
    "axis_label",
    "load_grid",
    "recipe_for_grid",
    "render_file",
    "render_panels",
    "render_table",
    "__version__",
]
