import pytest

from valleyqst_plots.gridfile import load_grid
from valleyqst_plots.recipes import (
    DEFAULT_LEVELS,
    PANEL_GROUPS,
    SWEEP_PRESETS,
    FigureRecipe,
    RecipeError,
    axis_label,
    recipe_for_grid,
)


def _recipe(**kwargs):
    defaults = dict(preset_id=None, xlabel="x", ylabel="y",
                    xscale="linear", yscale="linear")
    defaults.update(kwargs)
    return FigureRecipe(**defaults)


class TestFigureRecipe:
    def test_default_levels_span_unit_interval(self):
        assert len(DEFAULT_LEVELS) == 11
        assert DEFAULT_LEVELS[0] == 0.0
        assert DEFAULT_LEVELS[-1] == 1.0

    def test_levels_must_increase(self):
        with pytest.raises(RecipeError, match="monotonically"):
            _recipe(levels=(0.0, 0.5, 0.5, 1.0))

    def test_needs_two_levels(self):
        with pytest.raises(RecipeError, match="at least two"):
            _recipe(levels=(0.5,))

    def test_preset_must_be_known(self):
        with pytest.raises(RecipeError, match="unknown sweep preset"):
            _recipe(preset_id="fig99x")

    def test_scale_names_checked(self):
        with pytest.raises(RecipeError, match="linear or log"):
            _recipe(xscale="logit")

    def test_format_names_checked(self):
        with pytest.raises(RecipeError, match="unsupported output format"):
            _recipe(formats=("png", "pdf"))


class TestRecipeSelection:
    def test_known_preset_from_meta(self, make_pair):
        csv_path, _ = make_pair(preset="fig5a")
        recipe = recipe_for_grid(load_grid(csv_path))
        assert recipe.preset_id == "fig5a"
        assert recipe.stem == "fig5a"
        assert recipe.xscale == "log" and recipe.yscale == "log"
        assert "gamma" in recipe.xlabel and "SE" in recipe.xlabel

    def test_unknown_grid_gets_generic_recipe(self, make_pair):
        csv_path, _ = make_pair(
            stem="scan7",
            axis1=("custom_knob", [0.0, 1.0, 2.0, 3.0], "linear"),
            axis2=("other_knob", [0.0, 0.5, 1.0], "linear"),
            preset=None)
        recipe = recipe_for_grid(load_grid(csv_path))
        assert recipe.preset_id is None
        assert recipe.stem == "scan7"
        assert recipe.xlabel == "custom_knob"  # no prettier name known
        assert recipe.levels == DEFAULT_LEVELS

    def test_forced_recipe_checks_axes(self, make_pair):
        csv_path, _ = make_pair()  # gamma axes
        with pytest.raises(RecipeError, match="expects axes ratio_BA/phi_DC"):
            recipe_for_grid(load_grid(csv_path), "fig8a")

    def test_forced_recipe_matching_axes(self, make_pair):
        csv_path, _ = make_pair(preset=None)
        recipe = recipe_for_grid(load_grid(csv_path), "fig5b")
        assert recipe.preset_id == "fig5b"
        assert recipe.stem == "fig5b"

    def test_panel_recipe_rejected_for_single_grid(self, make_pair):
        csv_path, _ = make_pair()
        with pytest.raises(RecipeError, match="panel layout"):
            recipe_for_grid(load_grid(csv_path), "fig9")

    def test_unknown_recipe_id(self, make_pair):
        csv_path, _ = make_pair()
        with pytest.raises(RecipeError, match="unknown recipe"):
            recipe_for_grid(load_grid(csv_path), "fig12")


def test_panel_groups_reference_known_presets():
    for members in PANEL_GROUPS.values():
        assert all(m in SWEEP_PRESETS for m in members)


def test_axis_label_fallback():
    assert axis_label("ratio_BA") == r"$|B/A|$"
    assert axis_label("something_else") == "something_else"
