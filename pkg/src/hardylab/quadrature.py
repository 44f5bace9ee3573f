"""Graded quadrature on half-balls, half-boxes, disks and hemispheres.

The singular weights ``|x|^{tau_plus}`` (surface) and ``x_N |x|^{tau_plus}``
(volume) are integrable but unbounded near the origin for negative exponents.
They are handled purely geometrically: radial shells graded toward the origin
with ratio 1/2, a midpoint evaluation per cell, and exact per-cell measures,
so no cell center ever touches ``|x| = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateRegion, NonFiniteIntegrand
from .params import HardyParams

VOLUME_KINDS = ("volume_halfball", "volume_halfbox")
SURFACE_KINDS = ("surface_flat_disk", "surface_hemisphere")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Cell centers and exact cell measures for one graded decomposition."""

    kind: str
    centers: np.ndarray  # (M, N)
    weights: np.ndarray  # (M,)
    grading: float
    levels: int
    base_resolution: int
    outer: float
    inner_cut: float

    @property
    def ncells(self) -> int:
        return self.centers.shape[0]

    def total_weight(self) -> float:
        return float(np.sum(self.weights))


def _shell_edges(outer: float, inner_cut: float, levels: int) -> list[tuple[float, float]]:
    """Geometric shells [r/2, r] from outer inward; last shell clipped at inner_cut."""
    shells = []
    hi = outer
    for _ in range(levels):
        lo = hi * 0.5
        if inner_cut >= lo:
            if inner_cut < hi:
                shells.append((inner_cut, hi))
            return shells
        shells.append((lo, hi))
        hi = lo
    return shells


def _polar_cells_2d(r_lo, r_hi, n_r, n_t, theta_hi, weight_power=2):
    r_edges = np.linspace(r_lo, r_hi, n_r + 1)
    t_edges = np.linspace(0.0, theta_hi, n_t + 1)
    rc = 0.5 * (r_edges[:-1] + r_edges[1:])
    tc = 0.5 * (t_edges[:-1] + t_edges[1:])
    if weight_power == 2:
        rw = 0.5 * (r_edges[1:] ** 2 - r_edges[:-1] ** 2)
    else:
        rw = r_edges[1:] - r_edges[:-1]
    tw = np.diff(t_edges)
    R, T = np.meshgrid(rc, tc, indexing="ij")
    W = np.outer(rw, tw)
    centers = np.column_stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()])
    return centers, W.ravel()


def _spherical_cells_3d(r_lo, r_hi, n_r, n_p, n_f):
    r_edges = np.linspace(r_lo, r_hi, n_r + 1)
    p_edges = np.linspace(0.0, 0.5 * np.pi, n_p + 1)  # polar angle from x3-axis
    f_edges = np.linspace(0.0, 2.0 * np.pi, n_f + 1)
    rc = 0.5 * (r_edges[:-1] + r_edges[1:])
    pc = 0.5 * (p_edges[:-1] + p_edges[1:])
    fc = 0.5 * (f_edges[:-1] + f_edges[1:])
    rw = (r_edges[1:] ** 3 - r_edges[:-1] ** 3) / 3.0
    pw = np.cos(p_edges[:-1]) - np.cos(p_edges[1:])
    fw = np.diff(f_edges)
    R, P, F = np.meshgrid(rc, pc, fc, indexing="ij")
    W = rw[:, None, None] * pw[None, :, None] * fw[None, None, :]
    sin_p = np.sin(P)
    centers = np.column_stack(
        [
            (R * sin_p * np.cos(F)).ravel(),
            (R * sin_p * np.sin(F)).ravel(),
            (R * np.cos(P)).ravel(),
        ]
    )
    return centers, W.ravel()


def _halfbox_shell_cells(s_lo, s_hi, m, dim):
    """Tensor cells of the half-box of halfwidth s_hi with the s_lo half-box removed.

    m (a multiple of 4 when s_lo = s_hi/2) lateral cells align cell faces with
    the inner box, so the decomposition is exact.
    """
    h = 2.0 * s_hi / m
    lat = -s_hi + h * (np.arange(m) + 0.5)
    ver = h * (np.arange(m // 2) + 0.5)
    grids = np.meshgrid(*([lat] * (dim - 1) + [ver]), indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    if s_lo > 0.0:
        inside = np.all(np.abs(pts[:, :-1]) < s_lo, axis=1) & (pts[:, -1] < s_lo)
        pts = pts[~inside]
    w = np.full(pts.shape[0], h**dim)
    return pts, w


def build_rule(
    kind: str,
    outer: float,
    inner_cut: float = 0.0,
    base_resolution: int = 64,
    levels: int = 12,
    dim: int = 2,
) -> QuadratureRule:
    """Build a graded midpoint rule of the requested kind.

    ``outer`` is the ball radius / box halfwidth; ``inner_cut > 0`` removes
    the inner region (punctured-domain integrals); with ``inner_cut = 0`` the
    innermost core is covered by plain subdivision so that total weight equals
    the region measure exactly.
    """
    if not (outer > inner_cut >= 0.0):
        raise DegenerateRegion(f"need outer > inner_cut >= 0, got {outer}, {inner_cut}")
    if base_resolution < 4:
        raise ValueError("base_resolution must be >= 4")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if kind not in VOLUME_KINDS + SURFACE_KINDS:
        raise ValueError(f"unknown rule kind {kind!r}")
    if kind == "surface_hemisphere" and dim not in (2, 3):
        raise ValueError("hemisphere rules implemented for N in {2, 3}")

    shells = _shell_edges(outer, inner_cut, levels)
    core = inner_cut == 0.0 and len(shells) == levels
    parts: list[tuple[np.ndarray, np.ndarray]] = []

    if kind == "volume_halfball":
        n_r = max(4, base_resolution // 2)
        if dim == 2:
            n_t = base_resolution
            for lo, hi in shells:
                parts.append(_polar_cells_2d(lo, hi, n_r, n_t, np.pi))
            if core:
                parts.append(_polar_cells_2d(0.0, shells[-1][0], n_r, n_t, np.pi))
        elif dim == 3:
            n_p = max(4, base_resolution // 2)
            n_f = base_resolution
            for lo, hi in shells:
                parts.append(_spherical_cells_3d(lo, hi, n_r, n_p, n_f))
            if core:
                parts.append(_spherical_cells_3d(0.0, shells[-1][0], n_r, n_p, n_f))
        else:
            raise ValueError("volume_halfball implemented for N in {2, 3}")

    elif kind == "volume_halfbox":
        m = max(4, 4 * (base_resolution // 8))
        hi = outer
        for lo, _hi in shells:
            parts.append(_halfbox_shell_cells(lo, _hi, m, dim))
        if core:
            parts.append(_halfbox_shell_cells(0.0, shells[-1][0], m, dim))

    elif kind == "surface_flat_disk":
        n_r = max(2, base_resolution // 8)
        if dim == 2:
            # boundary is the segment (-outer, outer) on the x1-axis
            for lo, hi in shells + ([(0.0, shells[-1][0])] if core else []):
                edges = np.linspace(lo, hi, n_r + 1)
                mid = 0.5 * (edges[:-1] + edges[1:])
                w = np.diff(edges)
                pts = np.zeros((2 * n_r, 2))
                pts[:n_r, 0] = mid
                pts[n_r:, 0] = -mid
                parts.append((pts, np.concatenate([w, w])))
        elif dim == 3:
            n_t = base_resolution
            for lo, hi in shells + ([(0.0, shells[-1][0])] if core else []):
                centers2, w = _polar_cells_2d(lo, hi, n_r, n_t, 2.0 * np.pi)
                pts = np.column_stack([centers2, np.zeros(centers2.shape[0])])
                parts.append((pts, w))
        else:
            raise ValueError("surface_flat_disk implemented for N in {2, 3}")

    elif kind == "surface_hemisphere":
        if dim == 2:
            t_edges = np.linspace(0.0, np.pi, base_resolution + 1)
            tc = 0.5 * (t_edges[:-1] + t_edges[1:])
            pts = outer * np.column_stack([np.cos(tc), np.sin(tc)])
            parts.append((pts, outer * np.diff(t_edges)))
        else:
            n_p = max(4, base_resolution // 2)
            n_f = base_resolution
            p_edges = np.linspace(0.0, 0.5 * np.pi, n_p + 1)
            f_edges = np.linspace(0.0, 2.0 * np.pi, n_f + 1)
            pc = 0.5 * (p_edges[:-1] + p_edges[1:])
            fc = 0.5 * (f_edges[:-1] + f_edges[1:])
            pw = np.cos(p_edges[:-1]) - np.cos(p_edges[1:])
            fw = np.diff(f_edges)
            P, F = np.meshgrid(pc, fc, indexing="ij")
            W = outer**2 * np.outer(pw, fw)
            sin_p = np.sin(P)
            pts = outer * np.column_stack(
                [
                    (sin_p * np.cos(F)).ravel(),
                    (sin_p * np.sin(F)).ravel(),
                    np.cos(P).ravel(),
                ]
            )
            parts.append((pts, W.ravel()))

    centers = np.ascontiguousarray(np.vstack([c for c, _ in parts]))
    weights = np.ascontiguousarray(np.concatenate([w for _, w in parts]))
    return QuadratureRule(
        kind=kind,
        centers=centers,
        weights=weights,
        grading=0.5,
        levels=levels,
        base_resolution=base_resolution,
        outer=outer,
        inner_cut=inner_cut,
    )


def _evaluate(f, centers: np.ndarray) -> np.ndarray:
    values = np.asarray(f(centers), dtype=float)
    if values.shape != (centers.shape[0],):
        raise ValueError("integrand must map (M, N) points to (M,) values")
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        raise NonFiniteIntegrand(
            f"integrand not finite at cell {bad}, center {centers[bad]}",
            cell_index=bad,
            center=centers[bad],
        )
    return values


def integrate(rule: QuadratureRule, f) -> float:
    """Midpoint integral of a vectorized integrand against the plain measure."""
    values = _evaluate(f, rule.centers)
    return _kernels.weighted_sum(values, rule.weights)


def integrate_gamma(p: HardyParams, rule: QuadratureRule, f) -> float:
    """Integral of f against the weighted volume measure lam(x) dx."""
    if rule.kind not in VOLUME_KINDS:
        raise ValueError("integrate_gamma requires a volume rule")
    values = _evaluate(f, rule.centers)
    lam = _kernels.halfspace_weight(rule.centers, p.tau_plus)
    return _kernels.weighted_sum(values * lam, rule.weights)


def integrate_omega_beta(p: HardyParams, rule: QuadratureRule, g) -> float:
    """Integral of g against the weighted surface measure |x|^{tau_plus} d(omega)."""
    if rule.kind not in SURFACE_KINDS:
        raise ValueError("integrate_omega_beta requires a surface rule")
    values = _evaluate(g, rule.centers)
    w = _kernels.radial_power(rule.centers, p.tau_plus)
    return _kernels.weighted_sum(values * w, rule.weights)
