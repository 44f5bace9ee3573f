"""Half-box tensor grids with the singular point at a flat-boundary node.

The domain is the axis-aligned half-box ``(-a, a)^{N-1} x (0, a)`` with the
origin lying at the center of the flat face ``{x_N = 0}``.  The halfwidth is
restricted to ``a < 1/sqrt(N)`` so the closed box sits inside the unit
half-ball (which keeps the critical-branch log kernel positive on it, and
gives the inclusion ``B_a^+ subset Omega subset B_{a sqrt(N)}^+``).

Grid layout: ``n`` cells across each lateral axis (spacing ``h = 2a/n``) and
``n/2`` cells vertically, so nodes are the points ``(-a + i h, ..., k h)``.
No interior node coincides with the origin; the nearest interior node sits at
distance ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class HalfBoxGrid:
    N: int
    a: float
    n: int

    def __post_init__(self):
        if self.N not in (2, 3):
            raise ValueError("half-box grids implemented for N in {2, 3}")
        if not (0.0 < self.a < 1.0 / np.sqrt(self.N)):
            raise ValueError(
                f"halfwidth must satisfy 0 < a < 1/sqrt(N) = {1.0/np.sqrt(self.N):.6f}"
            )
        if self.n < 4 or self.n % 2:
            raise ValueError("n must be an even number of cells >= 4")

    @property
    def h(self) -> float:
        return 2.0 * self.a / self.n

    @property
    def m(self) -> int:
        """Vertical cell count (height a = m h)."""
        return self.n // 2

    @property
    def node_shape(self) -> tuple[int, ...]:
        return (self.n + 1,) * (self.N - 1) + (self.m + 1,)

    @property
    def interior_shape(self) -> tuple[int, ...]:
        return (self.n - 1,) * (self.N - 1) + (self.m - 1,)

    @property
    def num_interior(self) -> int:
        return int(np.prod(self.interior_shape))

    def lateral_axis(self) -> np.ndarray:
        return -self.a + self.h * np.arange(self.n + 1)

    def vertical_axis(self) -> np.ndarray:
        return self.h * np.arange(self.m + 1)

    def interior_points(self) -> np.ndarray:
        """All interior nodes as an (M, N) array in C (lexicographic) order."""
        lat = self.lateral_axis()[1:-1]
        ver = self.vertical_axis()[1:-1]
        grids = np.meshgrid(*([lat] * (self.N - 1) + [ver]), indexing="ij")
        return np.column_stack([g.ravel() for g in grids])

    def interior_r2(self) -> np.ndarray:
        pts = self.interior_points()
        return np.sum(pts * pts, axis=1)

    def interior_slices(self) -> tuple[slice, ...]:
        return tuple(slice(1, -1) for _ in range(self.N))

    def flat_points(self) -> np.ndarray:
        """Flat-boundary nodes (x', 0), full lateral grid, lexicographic."""
        lat = self.lateral_axis()
        grids = np.meshgrid(*([lat] * (self.N - 1)), indexing="ij")
        pts = np.column_stack([g.ravel() for g in grids])
        return np.column_stack([pts, np.zeros(pts.shape[0])])

    def boundary_masks(self) -> dict[str, np.ndarray]:
        """Partition of boundary nodes into {flat, lateral_top} over node_shape."""
        shape = self.node_shape
        idx = np.indices(shape)
        on_flat = idx[-1] == 0
        on_any = np.zeros(shape, dtype=bool)
        for axis in range(self.N - 1):
            on_any |= (idx[axis] == 0) | (idx[axis] == self.n)
        on_any |= idx[-1] == self.m
        lateral_top = on_any & ~on_flat
        flat = on_flat
        return {"flat": flat, "lateral_top": lateral_top}

    def origin_index(self) -> tuple[int, ...]:
        return (self.n // 2,) * (self.N - 1) + (0,)


@dataclass(eq=False)
class DiscreteField:
    """Node-indexed values on a half-box grid (boundary nodes included)."""

    grid: HalfBoxGrid
    values: np.ndarray
    beta: float = float("nan")
    epsilon: float = float("nan")

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.node_shape:
            raise ValueError(
                f"values shape {self.values.shape} != node shape {self.grid.node_shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("discrete fields must be finite at every node")

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.grid.interior_slices()]

    def interior_vector(self) -> np.ndarray:
        return self.interior.ravel()

    def trace_flat(self) -> np.ndarray:
        """Values on the flat boundary x_N = 0, lateral lexicographic order."""
        return self.values[..., 0].ravel()

    def copy(self) -> "DiscreteField":
        return DiscreteField(self.grid, self.values.copy(), self.beta, self.epsilon)


def field_from_function(
    grid: HalfBoxGrid, fn, boundary_fn=None, beta: float = float("nan"), epsilon: float = float("nan")
) -> DiscreteField:
    """Sample a vectorized function at all nodes (optionally a different one on the boundary).

    ``fn`` maps (M, N) points to (M,) values and is applied to interior nodes;
    ``boundary_fn`` (default: ``fn``) is applied on boundary nodes.
    """
    lat = grid.lateral_axis()
    ver = grid.vertical_axis()
    grids = np.meshgrid(*([lat] * (grid.N - 1) + [ver]), indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    values = np.empty(pts.shape[0])
    masks = grid.boundary_masks()
    boundary = (masks["flat"] | masks["lateral_top"]).ravel()
    inner_fn = fn
    outer_fn = boundary_fn if boundary_fn is not None else fn
    values[~boundary] = np.asarray(inner_fn(pts[~boundary]), dtype=float)
    values[boundary] = np.asarray(outer_fn(pts[boundary]), dtype=float)
    return DiscreteField(grid, values.reshape(grid.node_shape), beta, epsilon)


def save_field(field: DiscreteField, path) -> None:
    """Write a field snapshot: header (N, a, n, beta, epsilon), then node values.

    Values follow in lexicographic node order, one per line, full precision.
    """
    g = field.grid
    path = Path(path)
    with path.open("w") as fh:
        fh.write("hardylab-field 1\n")
        fh.write(f"{g.N} {g.a!r} {g.n} {field.beta!r} {field.epsilon!r}\n")
        for v in field.values.ravel():
            fh.write(f"{v!r}\n")


def load_field(path) -> DiscreteField:
    path = Path(path)
    with path.open() as fh:
        magic = fh.readline().strip()
        if magic != "hardylab-field 1":
            raise ValueError(f"not a hardylab field file: {path}")
        N_s, a_s, n_s, beta_s, eps_s = fh.readline().split()
        grid = HalfBoxGrid(int(N_s), float(a_s), int(n_s))
        data = np.array([float(line) for line in fh], dtype=float)
    return DiscreteField(grid, data.reshape(grid.node_shape), float(beta_s), float(eps_s))
