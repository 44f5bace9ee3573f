"""Sparse finite-difference solver for the regularized half-box problems.

The operator ``-Laplace + beta/(|x|^2 + eps)`` is discretized with the
standard (2N+1)-point stencil on a :class:`~hardylab.grid.HalfBoxGrid`,
Dirichlet boundary nodes eliminated.  The potential is evaluated at node
coordinates; by construction no node sits at the origin, so ``eps = 0`` means
the raw inverse-square potential (finite at every node).

Positive definiteness is certified, not assumed, whenever ``beta < 0``: the
smallest eigenvalue is computed by shift-inverted Lanczos from a Gershgorin
lower bound.  For ``beta >= 0`` the matrix is a weakly diagonally dominant
Z-matrix (an M-matrix), which also carries the discrete comparison principle;
for certified ``beta < 0`` the matrix is a Stieltjes matrix (symmetric
positive-definite Z-matrix), so inverse positivity still holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import MonotonicityViolated, NotPositiveDefinite, SolverDiverged
from .fields import TestFunction, lambda_small_values, lstar_radial
from .grid import DiscreteField, HalfBoxGrid
from .numerics import fit_loglog_slope
from .params import HardyParams
from .supersolutions import dual_bound_t

_laplacian_cache: dict[tuple[int, float, int], sp.csr_matrix] = {}


@dataclass(frozen=True)
class SolveConfig:
    epsilon: float = 0.0
    linear_tolerance: float = 1e-10
    max_iterations: int = 0  # 0: direct factorization
    symmetric: bool = True
    certify_spd: str = "auto"  # "auto" | "always" | "never"
    eig_tol: float = 1e-6

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0")


@dataclass(eq=False)
class AssembledOperator:
    p: HardyParams
    grid: HalfBoxGrid
    cfg: SolveConfig
    matrix: sp.csr_matrix
    potential: np.ndarray
    m_matrix: bool
    spd_min_eig: float | None
    _lu: object = dc_field(default=None, repr=False)

    def lu(self):
        if self._lu is None:
            self._lu = spla.splu(self.matrix.tocsc())
        return self._lu


def _neg_laplacian(grid: HalfBoxGrid) -> sp.csr_matrix:
    key = (grid.N, grid.a, grid.n)
    if key not in _laplacian_cache:
        h2 = grid.h * grid.h

        def second_diff(k):
            return sp.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(k, k), format="csr")

        sizes = list(grid.interior_shape)
        terms = []
        for axis, k in enumerate(sizes):
            mats = [sp.identity(s, format="csr") for s in sizes]
            mats[axis] = second_diff(k)
            term = mats[0]
            for mtx in mats[1:]:
                term = sp.kron(term, mtx, format="csr")
            terms.append(term)
        _laplacian_cache[key] = sum(terms[1:], terms[0]) / h2
    return _laplacian_cache[key]


def _gershgorin_floor(A: sp.csr_matrix) -> float:
    diag = A.diagonal()
    abs_rows = np.abs(A).sum(axis=1).A1 - np.abs(diag)
    return float(np.min(diag - abs_rows))


def assemble(p: HardyParams, grid: HalfBoxGrid, cfg: SolveConfig) -> AssembledOperator:
    """Stencil + diagonal potential, with diagnostics and optional SPD certificate."""
    A = _neg_laplacian(grid).copy()
    r2 = grid.interior_r2()
    potential = p.beta / (r2 + cfg.epsilon)
    A = (A + sp.diags(potential)).tocsr()

    diag = A.diagonal()
    offdiag_rowsum = np.abs(A).sum(axis=1).A1 - np.abs(diag)
    m_matrix = bool(np.all(diag - offdiag_rowsum >= -1e-12) and np.all(diag > 0))

    min_eig = None
    want_cert = cfg.certify_spd == "always" or (cfg.certify_spd == "auto" and p.beta < 0)
    if want_cert:
        sigma = _gershgorin_floor(A) - 1.0
        try:
            vals = spla.eigsh(
                A, k=1, sigma=sigma, which="LM", tol=cfg.eig_tol, return_eigenvectors=False
            )
        except RuntimeError as exc:  # factorization breakdown
            raise NotPositiveDefinite(f"eigenvalue certificate failed: {exc}") from exc
        min_eig = float(vals[0])
        if min_eig <= 0.0:
            raise NotPositiveDefinite(
                f"operator not positive definite at this resolution: min eig {min_eig:.3e}"
                " (coefficient too far below the boundary Hardy threshold)"
            )
    return AssembledOperator(p, grid, cfg, A, potential, m_matrix, min_eig)


def _sample(fn_or_value, points: np.ndarray) -> np.ndarray:
    if callable(fn_or_value):
        return np.asarray(fn_or_value(points), dtype=float)
    return np.full(points.shape[0], float(fn_or_value))


def _boundary_values(grid: HalfBoxGrid, g) -> np.ndarray:
    """Full node array holding g on boundary nodes and 0 at interior nodes."""
    lat = grid.lateral_axis()
    ver = grid.vertical_axis()
    grids = np.meshgrid(*([lat] * (grid.N - 1) + [ver]), indexing="ij")
    pts = np.column_stack([gg.ravel() for gg in grids])
    masks = grid.boundary_masks()
    boundary = (masks["flat"] | masks["lateral_top"]).ravel()
    full = np.zeros(pts.shape[0])
    full[boundary] = _sample(g, pts[boundary])
    return full.reshape(grid.node_shape)


def _dirichlet_rhs(grid: HalfBoxGrid, gfull: np.ndarray) -> np.ndarray:
    """Transfer of boundary data to interior right-hand side (divided by h^2)."""
    inner = grid.interior_slices()
    acc = np.zeros(grid.interior_shape)
    for axis in range(grid.N):
        for shift in (-1, +1):
            sl = list(inner)
            lo, hi = 1 + shift, (gfull.shape[axis] - 1) + shift
            sl[axis] = slice(lo, hi if hi != 0 else None)
            acc += gfull[tuple(sl)]
    return acc.ravel() / (grid.h * grid.h)


def solve_with(op: AssembledOperator, f, g) -> DiscreteField:
    """Solve the assembled system for source f and Dirichlet data g."""
    grid, cfg = op.grid, op.cfg
    rhs = _sample(f, grid.interior_points())
    gfull = _boundary_values(grid, g)
    rhs = rhs + _dirichlet_rhs(grid, gfull)
    u = op.lu().solve(rhs)
    norm = np.linalg.norm(rhs)
    if norm > 0:
        res = np.linalg.norm(op.matrix @ u - rhs) / norm
        if res > max(cfg.linear_tolerance, 1e-12):
            raise SolverDiverged(f"relative residual {res:.3e} above tolerance")
    full = gfull.copy()
    full[grid.interior_slices()] = u.reshape(grid.interior_shape)
    return DiscreteField(grid, full, beta=op.p.beta, epsilon=cfg.epsilon)


def solve_regularized(p: HardyParams, grid: HalfBoxGrid, cfg: SolveConfig, f, g) -> DiscreteField:
    """Assemble and solve ``(-Laplace + beta/(|x|^2+eps)) u = f``, ``u = g`` on the boundary."""
    return solve_with(assemble(p, grid, cfg), f, g)


# ---------------------------------------------------------------------------
# epsilon sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepReport:
    epsilons: list[float]
    direction: str  # "decreasing_with_epsilon_down" | "increasing_with_epsilon_down" | "constant"
    max_violation: float


def epsilon_sweep(
    p: HardyParams,
    grid: HalfBoxGrid,
    cfg: SolveConfig,
    f,
    g,
    eps_sequence,
    tol: float = 1e-9,
) -> tuple[list[DiscreteField], SweepReport]:
    """Solve along a decreasing epsilon sequence and certify the monotone order.

    For nonnegative data, shrinking epsilon strengthens the potential, so the
    solutions decrease nodewise as epsilon decreases when ``beta > 0`` and
    increase when ``beta < 0`` (at ``beta = 0`` they coincide).  A nodewise
    violation beyond ``tol`` raises :class:`MonotonicityViolated`.
    """
    eps = [float(e) for e in eps_sequence]
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps_sequence must be strictly decreasing and positive")
    pts = grid.interior_points()
    if np.any(_sample(f, pts) < 0):
        raise ValueError("epsilon sweep monotonicity requires f >= 0")
    fields = []
    for e in eps:
        cfg_e = SolveConfig(
            epsilon=e,
            linear_tolerance=cfg.linear_tolerance,
            certify_spd=cfg.certify_spd,
            eig_tol=cfg.eig_tol,
        )
        fields.append(solve_regularized(p, grid, cfg_e, f, g))

    worst = 0.0
    worst_node = None
    for prev, nxt in zip(fields, fields[1:]):
        diff = prev.values - nxt.values  # >= 0 expected for beta > 0
        if p.beta < 0:
            diff = -diff
        low = float(diff.min())
        if low < worst:
            worst = low
            worst_node = np.unravel_index(int(np.argmin(diff)), diff.shape)
    if p.beta != 0.0 and worst < -tol:
        raise MonotonicityViolated(
            f"epsilon-monotonicity violated by {-worst:.3e} at node {worst_node}",
            node_index=worst_node,
            violation=-worst,
        )
    direction = (
        "constant"
        if p.beta == 0.0
        else ("decreasing_with_epsilon_down" if p.beta > 0 else "increasing_with_epsilon_down")
    )
    return fields, SweepReport(eps, direction, max(0.0, -worst))


# ---------------------------------------------------------------------------
# grid quadrature of the regularized identity
# ---------------------------------------------------------------------------

def _interior_volume_sum(grid: HalfBoxGrid, values: np.ndarray) -> float:
    return float(np.sum(values)) * grid.h**grid.N


def _flat_weight_origin_cell(p: HardyParams, h: float) -> float:
    """Integral of |x'|^{tau_plus} over the flat-boundary cell at the origin.

    The square cell is replaced by the equal-measure disk, exact for N = 2.
    """
    tau = p.tau_plus
    if p.N == 2:
        return 2.0 * (0.5 * h) ** (tau + 1.0) / (tau + 1.0)
    radius = h / np.sqrt(np.pi)
    return 2.0 * np.pi * radius ** (tau + 2.0) / (tau + 2.0)


def flat_boundary_pairing(p: HardyParams, grid: HalfBoxGrid, gvals: np.ndarray, dn_xi: np.ndarray) -> float:
    """int over the flat boundary of g * (d xi / d nu) with the tau-weighted measure.

    ``gvals``/``dn_xi`` are nodal values on the flat boundary (lexicographic);
    the outward normal there is -e_N, so ``dn_xi = -(normal slope of xi)`` must
    already carry the sign.  The origin node's singular weight |x'|^{tau_plus}
    is integrated analytically over its cell.
    """
    pts = grid.flat_points()
    rp = np.sqrt(np.sum(pts[:, :-1] ** 2, axis=1))
    origin = rp == 0.0
    weights = np.zeros_like(rp)
    weights[~origin] = rp[~origin] ** p.tau_plus * grid.h ** (p.N - 1)
    weights[origin] = _flat_weight_origin_cell(p, grid.h)
    return float(np.sum(gvals * dn_xi * weights))


@dataclass
class RegularizedIdentityReport:
    lhs: float
    source_term: float
    boundary_term: float
    correction: float
    defect: float
    scale: float


def _xi_ratio_values(p: HardyParams, xi: TestFunction, pts: np.ndarray) -> np.ndarray:
    if xi.ratio_profile is not None:
        r = np.sqrt(np.sum(pts * pts, axis=1))
        return xi.ratio_profile.g(r)
    return xi.ratio_field.value_batch(pts)


def _xi_lstar_values(p: HardyParams, xi: TestFunction, pts: np.ndarray) -> np.ndarray:
    if xi.ratio_profile is not None:
        r = np.sqrt(np.sum(pts * pts, axis=1))
        return lstar_radial(p, xi.ratio_profile, r)
    from .fields import apply_L_beta_star_batch

    return apply_L_beta_star_batch(p, xi.ratio_field, pts)


def _require_interior_support(grid: HalfBoxGrid, xi: TestFunction) -> None:
    if not xi.vanishes_on_flat or xi.ratio_field is None and xi.ratio_profile is None:
        raise ValueError("test function must vanish on the flat boundary (xi = x_N * ratio)")
    if xi.support_radius >= grid.a:
        raise ValueError("test function support must stay away from the lateral/top boundary")


def residual_identity_regularized(
    p: HardyParams,
    grid: HalfBoxGrid,
    field: DiscreteField,
    f,
    g,
    xi: TestFunction,
    eps: float,
) -> RegularizedIdentityReport:
    """Defect of the weighted identity satisfied by the regularized solution.

    All four terms are evaluated by grid quadrature:
    ``int u Lstar(xi/x_N) dgamma  -  int f xi / x_N dgamma
    + int_boundary g (d xi/d nu) domega  -  beta eps int u xi /((|x|^2+eps)|x|^2 x_N) dgamma``.
    """
    _require_interior_support(grid, xi)
    pts = grid.interior_points()
    lam = lambda_small_values(p, pts)
    uvals = field.interior_vector()
    ratio = _xi_ratio_values(p, xi, pts)
    lstar = _xi_lstar_values(p, xi, pts)
    r2 = grid.interior_r2()

    lhs = _interior_volume_sum(grid, uvals * lstar * lam)
    source = _interior_volume_sum(grid, _sample(f, pts) * ratio * lam)
    correction = p.beta * eps * _interior_volume_sum(
        grid, uvals * ratio * lam / ((r2 + eps) * r2)
    )

    flat_pts = grid.flat_points()
    gvals = _sample(g, flat_pts)
    dn_xi = -_xi_ratio_values(p, xi, flat_pts)  # outward normal is -e_N
    boundary = flat_boundary_pairing(p, grid, gvals, dn_xi)

    defect = lhs - (source - boundary + correction)
    scale = max(abs(lhs), abs(source), abs(boundary), abs(correction), 1e-300)
    return RegularizedIdentityReport(lhs, source, boundary, correction, defect, scale)


def correction_rate_sweep(
    p: HardyParams,
    grid: HalfBoxGrid,
    cfg: SolveConfig,
    f,
    g,
    xi: TestFunction,
    eps_sequence,
) -> tuple[list[float], float]:
    """Corrections of the regularized identity along an epsilon sweep and the fitted decay rate."""
    corrections = []
    for e in eps_sequence:
        cfg_e = SolveConfig(epsilon=float(e), linear_tolerance=cfg.linear_tolerance,
                            certify_spd=cfg.certify_spd, eig_tol=cfg.eig_tol)
        u = solve_regularized(p, grid, cfg_e, f, g)
        rep = residual_identity_regularized(p, grid, u, f, g, xi, float(e))
        corrections.append(rep.correction)
    slope = fit_loglog_slope(list(eps_sequence), corrections)
    return corrections, slope


# ---------------------------------------------------------------------------
# dual problems by conjugation
# ---------------------------------------------------------------------------

@dataclass
class DualResult:
    w: DiscreteField
    primal: DiscreteField
    t_bound: float


def dual_solve(
    p: HardyParams,
    grid: HalfBoxGrid,
    cfg: SolveConfig,
    rhs_kind: str = "one",
    rhs=None,
) -> DualResult:
    """Solve the conjugated problem ``Lstar (w / x_N) = rhs`` with w = 0 on the boundary.

    Implemented by the exact conjugation: solve the primal moderate problem
    ``(-Laplace + beta/|x|^2) W = lam * rhs`` with zero Dirichlet data and set
    ``w = W x_N / lam = W |x|^{-tau_plus}``.  For the built-in sources the
    barrier slope ``t`` with ``0 <= w <= t x_N`` is returned.
    """
    pts = grid.interior_points()
    lam = lambda_small_values(p, pts)
    if rhs_kind == "one":
        source = lam
    elif rhs_kind == "one_over_xN":
        source = lam / pts[:, -1]
    elif rhs_kind == "custom":
        if rhs is None:
            raise ValueError("custom rhs_kind requires the rhs callable")
        source = lam * np.asarray(rhs(pts), dtype=float)
    else:
        raise ValueError(f"unknown rhs_kind {rhs_kind!r}")

    primal = solve_regularized(p, grid, cfg, lambda x, s=source: s, 0.0)

    r = np.sqrt(grid.interior_r2())
    wvals = np.zeros(grid.node_shape)
    wvals[grid.interior_slices()] = (
        primal.interior_vector() * r ** (-p.tau_plus)
    ).reshape(grid.interior_shape)
    w = DiscreteField(grid, wvals, beta=p.beta, epsilon=cfg.epsilon)

    t_bound = float("nan")
    if rhs_kind in ("one", "one_over_xN"):
        t_bound = dual_bound_t(p, rhs_kind, rmax=grid.a * np.sqrt(grid.N))
    return DualResult(w=w, primal=primal, t_bound=t_bound)


# ---------------------------------------------------------------------------
# manufactured solutions
# ---------------------------------------------------------------------------

def manufactured_pair(p: HardyParams, grid: HalfBoxGrid, eps: float):
    """Smooth solution vanishing on the whole boundary and its exact source.

    ``u* = sin(pi x_N / a) prod_i cos(pi x_i / (2a))`` is an eigenfunction of
    the Laplacian, vanishes linearly on the flat boundary, and has nonzero
    per-axis fourth derivatives (so the stencil's h^2 truncation is exercised).
    The source is ``-Laplace u* + beta u*/(|x|^2 + eps)`` in closed form.
    """
    a = grid.a
    eigenvalue = (np.pi / a) ** 2 * (1.0 + 0.25 * (grid.N - 1))

    def u_star(x):
        val = np.sin(np.pi * x[:, -1] / a)
        for j in range(x.shape[1] - 1):
            val = val * np.cos(0.5 * np.pi * x[:, j] / a)
        return val

    def source(x):
        r2 = np.sum(x * x, axis=1)
        return (eigenvalue + p.beta / (r2 + eps)) * u_star(x)

    return u_star, source


def manufactured_errors(p: HardyParams, ns, a: float = 0.45, eps: float = 0.0) -> list[float]:
    """Discrete-L2 errors of the manufactured solve over a grid family."""
    errors = []
    for n in ns:
        grid = HalfBoxGrid(p.N, a, int(n))
        u_star, source = manufactured_pair(p, grid, eps)
        cfg = SolveConfig(epsilon=eps)
        u = solve_regularized(p, grid, cfg, source, 0.0)
        diff = u.interior_vector() - u_star(grid.interior_points())
        errors.append(float(np.sqrt(grid.h**grid.N * np.sum(diff * diff))))
    return errors


def convergence_orders(errors, ratio: float = 2.0) -> list[float]:
    return [float(np.log(e1 / e2) / np.log(ratio)) for e1, e2 in zip(errors, errors[1:])]
