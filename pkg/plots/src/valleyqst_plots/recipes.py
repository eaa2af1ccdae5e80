"""Figure recipes: how each known sweep grid should be drawn.

A recipe fixes the presentation of one contour panel: axis labels and
scales, the contour level policy, colormap, and the output stem and
formats. The sixteen producer presets get curated recipes; anything else
falls back to a generic recipe built from the grid's own metadata, so
unknown grids still render with correct axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gridfile import GridData


class RecipeError(ValueError):
    """A recipe does not exist or does not fit the given grids."""


#: Grid presets the producing tool defines, by figure family.
SWEEP_PRESETS = (
    "fig5a", "fig5b",
    "fig6a", "fig6b",
    "fig7a", "fig7b", "fig7c",
    "fig8a", "fig8b", "fig8c",
    "fig9a", "fig9b", "fig9c", "fig9d", "fig9e", "fig9f",
)

#: Multi-panel layouts: recipe id -> member presets in caption order.
PANEL_GROUPS = {
    "fig9": ("fig9a", "fig9b", "fig9c", "fig9d", "fig9e", "fig9f"),
}

#: Eleven evenly spaced probability levels; both plotted quantities live
#: in [0, 1].
DEFAULT_LEVELS = tuple(i / 10.0 for i in range(11))

_AXIS_LABELS = {
    "gamma_SE_prime": r"$\gamma'_{\mathrm{SE}}$",
    "gamma_iD_prime": r"$\gamma'_{\mathrm{iD}}$",
    "delta_omega_prime": r"$\Delta\omega'_{\mathrm{ph}}$",
    "ratio_BA": r"$|B/A|$",
    "phi_DC": r"$\varphi_{D/C}\,/\,\pi$",
    "ratio_beta": r"$|\beta/\alpha|$",
    "phi_beta": r"$\varphi_\beta\,/\,\pi$",
}

QUANTITY_LABELS = {"yield": "P", "fidelity": "F"}


def axis_label(name: str) -> str:
    """Pretty label for a sweep parameter; unknown names pass through."""
    return _AXIS_LABELS.get(name, name)


@dataclass(frozen=True)
class FigureRecipe:
    """Presentation of one contour panel."""

    preset_id: str | None
    xlabel: str
    ylabel: str
    xscale: str
    yscale: str
    levels: tuple[float, ...] = DEFAULT_LEVELS
    cmap: str = "viridis"
    stem: str | None = None
    formats: tuple[str, ...] = ("png", "svg")

    def __post_init__(self):
        if self.preset_id is not None and self.preset_id not in SWEEP_PRESETS:
            raise RecipeError(f"unknown sweep preset {self.preset_id!r}")
        if len(self.levels) < 2:
            raise RecipeError("need at least two contour levels")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise RecipeError("contour levels must increase monotonically")
        for scale in (self.xscale, self.yscale):
            if scale not in ("linear", "log"):
                raise RecipeError(f"axis scale must be linear or log, got {scale!r}")
        for fmt in self.formats:
            if fmt not in ("png", "svg"):
                raise RecipeError(f"unsupported output format {fmt!r}")


#: Axis names each preset must carry, for validating a forced recipe.
_EXPECTED_AXES = {
    "fig5a": ("gamma_SE_prime", "gamma_iD_prime"),
    "fig5b": ("gamma_SE_prime", "gamma_iD_prime"),
    "fig6a": ("delta_omega_prime", "gamma_iD_prime"),
    "fig6b": ("delta_omega_prime", "gamma_iD_prime"),
    "fig7a": ("gamma_SE_prime", "delta_omega_prime"),
    "fig7b": ("gamma_SE_prime", "delta_omega_prime"),
    "fig7c": ("gamma_SE_prime", "delta_omega_prime"),
    "fig8a": ("ratio_BA", "phi_DC"),
    "fig8b": ("ratio_BA", "phi_DC"),
    "fig8c": ("ratio_BA", "phi_DC"),
    "fig9a": ("ratio_beta", "phi_beta"),
    "fig9b": ("ratio_beta", "phi_beta"),
    "fig9c": ("ratio_beta", "phi_beta"),
    "fig9d": ("ratio_beta", "phi_beta"),
    "fig9e": ("ratio_beta", "phi_beta"),
    "fig9f": ("ratio_beta", "phi_beta"),
}


def recipe_for_grid(grid: GridData, recipe_id: str | None = None) -> FigureRecipe:
    """Choose the recipe for one grid.

    Labels always come from the grid's own metadata (the file is the
    authority on what was swept); a forced ``recipe_id`` only pins the
    preset identity and is rejected if the grid's axes disagree with it.
    """
    preset = grid.preset if grid.preset in SWEEP_PRESETS else None
    if recipe_id is not None:
        if recipe_id in PANEL_GROUPS:
            raise RecipeError(
                f"recipe {recipe_id!r} is a panel layout; pass all of "
                f"{', '.join(PANEL_GROUPS[recipe_id])}")
        if recipe_id not in SWEEP_PRESETS:
            raise RecipeError(
                f"unknown recipe {recipe_id!r}; choose from "
                f"{', '.join(SWEEP_PRESETS + tuple(PANEL_GROUPS))}")
        expected = _EXPECTED_AXES[recipe_id]
        got = (grid.axis1.name, grid.axis2.name)
        if got != expected:
            raise RecipeError(
                f"recipe {recipe_id!r} expects axes {expected[0]}/{expected[1]}, "
                f"file has {got[0]}/{got[1]}")
        preset = recipe_id
    return FigureRecipe(
        preset_id=preset,
        xlabel=axis_label(grid.axis1.name),
        ylabel=axis_label(grid.axis2.name),
        xscale=grid.axis1.scale,
        yscale=grid.axis2.scale,
        stem=preset or grid.source.stem,
    )


__all__ = [
    "DEFAULT_LEVELS",
    "FigureRecipe",
    "PANEL_GROUPS",
    "QUANTITY_LABELS",
    "RecipeError",
    "SWEEP_PRESETS",
    "axis_label",
    "recipe_for_grid",
]
