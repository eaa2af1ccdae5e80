import numpy as np
import pytest

from valleyqst_plots.gridfile import (
    PlotDataError,
    load_grid,
    meta_path_for,
)


def test_roundtrip(make_pair):
    csv_path, _ = make_pair(preset="fig5a", quantity="yield")
    grid = load_grid(csv_path)
    assert grid.preset == "fig5a"
    assert grid.quantity == "yield"
    assert grid.axis1.name == "gamma_SE_prime"
    assert grid.axis1.scale == "log"
    assert grid.axis2.name == "gamma_iD_prime"
    assert grid.values.shape == (4, 3)
    assert grid.axis1.values[0] == pytest.approx(0.01)
    assert grid.axis2.values[-1] == pytest.approx(100.0)
    assert grid.values[0, 0] == pytest.approx(0.05)
    assert grid.fixed == {"delta_omega_prime": 0.5}


def test_meta_path_convention(tmp_path):
    assert meta_path_for(tmp_path / "sweep.csv") == tmp_path / "sweep.meta.json"


def test_missing_csv(tmp_path):
    with pytest.raises(PlotDataError, match="missing grid file"):
        load_grid(tmp_path / "absent.csv")


def test_missing_meta(make_pair):
    csv_path, meta_path = make_pair()
    meta_path.unlink()
    with pytest.raises(PlotDataError, match="missing metadata file"):
        load_grid(csv_path)


def test_shape_mismatch_truncated(make_pair):
    csv_path, _ = make_pair()
    lines = csv_path.read_bytes().split(b"\r\n")
    csv_path.write_bytes(b"\r\n".join(lines[:-3]) + b"\r\n")
    with pytest.raises(PlotDataError, match="shape mismatch"):
        load_grid(csv_path)


def test_shape_mismatch_reordered(make_pair):
    csv_path, _ = make_pair()
    lines = csv_path.read_bytes().split(b"\r\n")
    lines[1], lines[4] = lines[4], lines[1]  # cross two axis1 blocks
    csv_path.write_bytes(b"\r\n".join(lines))
    with pytest.raises(PlotDataError, match="axis1-major"):
        load_grid(csv_path)


def test_header_must_match_meta(make_pair):
    csv_path, _ = make_pair()
    body = csv_path.read_bytes().split(b"\r\n", 1)[1]
    csv_path.write_bytes(b"wrong,names,value\r\n" + body)
    with pytest.raises(PlotDataError, match="does not match metadata axes"):
        load_grid(csv_path)


def test_non_numeric_cell(make_pair):
    csv_path, _ = make_pair()
    lines = csv_path.read_bytes().split(b"\r\n")
    lines[1] = lines[1].rsplit(b",", 1)[0] + b",oops"
    csv_path.write_bytes(b"\r\n".join(lines))
    with pytest.raises(PlotDataError, match="non-numeric cell"):
        load_grid(csv_path)


def test_meta_must_be_json(make_pair):
    csv_path, meta_path = make_pair()
    meta_path.write_text("{not json")
    with pytest.raises(PlotDataError, match="not valid JSON"):
        load_grid(csv_path)


def test_meta_needs_axes(make_pair):
    csv_path, meta_path = make_pair()
    meta_path.write_text('{"quantity": "yield", "axis1": {"name": "x", '
                         '"points": 4, "scale": "log"}}')
    with pytest.raises(PlotDataError, match="lacks 'axis2'"):
        load_grid(csv_path)


def test_explicit_meta_path(make_pair, tmp_path):
    csv_path, meta_path = make_pair()
    moved = tmp_path / "elsewhere.json"
    moved.write_text(meta_path.read_text())
    meta_path.unlink()
    grid = load_grid(csv_path, moved)
    assert grid.values.shape == (4, 3)


def test_unknown_preset_is_kept_verbatim(make_pair):
    csv_path, _ = make_pair(preset="exploratory")
    assert load_grid(csv_path).preset == "exploratory"


def test_values_row_major_layout(make_pair):
    # sixteenths survive the twelve-digit text round trip exactly
    vals = np.arange(12, dtype=float).reshape(4, 3) / 16.0
    csv_path, _ = make_pair(values=vals)
    grid = load_grid(csv_path)
    assert np.array_equal(grid.values, vals)
