"""Half-box grid geometry, boundary classification, field snapshots."""

import numpy as np
import pytest

from hardylab import DiscreteField, HalfBoxGrid, field_from_function, load_field, save_field


def test_grid_geometry_invariants():
    grid = HalfBoxGrid(2, 0.45, 16)
    assert grid.h == pytest.approx(2 * 0.45 / 16)
    pts = grid.interior_points()
    r = np.linalg.norm(pts, axis=1)
    # nearest interior node to the singular point sits at distance h
    assert r.min() == pytest.approx(grid.h)
    assert r.min() >= grid.h / 2.0
    # inclusion of the box between the two half-balls
    assert r.max() <= 0.45 * np.sqrt(2)
    assert np.all(pts[:, -1] > 0)


def test_grid_origin_is_flat_boundary_node():
    grid = HalfBoxGrid(3, 0.4, 8)
    idx = grid.origin_index()
    lat = grid.lateral_axis()
    ver = grid.vertical_axis()
    assert lat[idx[0]] == 0.0 and lat[idx[1]] == 0.0 and ver[idx[2]] == 0.0
    masks = grid.boundary_masks()
    assert masks["flat"][idx]


def test_boundary_classification_partitions():
    grid = HalfBoxGrid(2, 0.45, 12)
    masks = grid.boundary_masks()
    both = masks["flat"] & masks["lateral_top"]
    assert not both.any()
    total_boundary = masks["flat"].sum() + masks["lateral_top"].sum()
    shape = grid.node_shape
    interior = (shape[0] - 2) * (shape[1] - 2)
    assert total_boundary == np.prod(shape) - interior


def test_grid_validation():
    with pytest.raises(ValueError):
        HalfBoxGrid(2, 0.8, 16)  # halfwidth too large: box leaves the unit ball
    with pytest.raises(ValueError):
        HalfBoxGrid(2, 0.45, 15)  # odd cell count
    with pytest.raises(ValueError):
        HalfBoxGrid(4, 0.3, 16)


def test_field_from_function_boundary_split():
    grid = HalfBoxGrid(2, 0.45, 8)
    fld = field_from_function(
        grid, lambda x: np.ones(len(x)), boundary_fn=lambda x: np.zeros(len(x))
    )
    assert np.all(fld.interior == 1.0)
    assert np.all(fld.values[..., 0] == 0.0)
    assert np.all(fld.values[0, :] == 0.0)


def test_field_requires_finite_values():
    grid = HalfBoxGrid(2, 0.45, 8)
    bad = np.zeros(grid.node_shape)
    bad[2, 2] = np.nan
    with pytest.raises(ValueError):
        DiscreteField(grid, bad)


def test_field_snapshot_roundtrip(tmp_path):
    grid = HalfBoxGrid(2, 0.45, 10)
    rng = np.random.default_rng(0)
    fld = DiscreteField(grid, rng.normal(size=grid.node_shape), beta=3.0, epsilon=0.01)
    path = tmp_path / "field.txt"
    save_field(fld, path)
    back = load_field(path)
    assert back.grid.N == 2 and back.grid.n == 10
    assert back.beta == 3.0 and back.epsilon == 0.01
    assert np.array_equal(back.values, fld.values)


def test_field_snapshot_rejects_other_files(tmp_path):
    path = tmp_path / "not_a_field.txt"
    path.write_text("something else\n")
    with pytest.raises(ValueError):
        load_field(path)


def test_trace_flat_accessor():
    grid = HalfBoxGrid(2, 0.45, 8)
    fld = field_from_function(grid, lambda x: x[:, -1])
    assert np.allclose(fld.trace_flat(), 0.0)
