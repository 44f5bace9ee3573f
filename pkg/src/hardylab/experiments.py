"""Singularity-coefficient calculus and the boundary-data experiments.

The central tool is :func:`extract_k`: given a discrete field and its data
(f, g), the weighted identity determines a single number k — the Dirac
coefficient of the field's boundary singularity at the origin — as

``k(xi) = [ int u Lstar(xi/x_N) dgamma - int f xi/x_N dgamma
            + int_bnd g (d xi/d nu) domega ] / (c_beta * dxi/dx_N(0))``

for every admissible test function xi.  Consistency of k across a family of
test functions with different support radii is itself the test that one Dirac
term explains the data.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import CollarUnresolved, DegenerateTestFunction
from .fields import (
    TestFunction,
    bump_profile,
    lambda_fund_field,
    lambda_fund_values,
    lambda_small_values,
    radial_field,
    xi_bump,
)
from .grid import DiscreteField, HalfBoxGrid
from .params import HardyParams
from .solver import (
    SolveConfig,
    _interior_volume_sum,
    _sample,
    _xi_lstar_values,
    _xi_ratio_values,
    _require_interior_support,
    flat_boundary_pairing,
    solve_regularized,
)


def default_xi_family(p: HardyParams, grid: HalfBoxGrid, rhos=(0.2, 0.3, 0.4, 0.5, 0.6)) -> list[TestFunction]:
    """The standard five-member test family xi = x_N eta0(2|x|/rho), rho = c*a."""
    return [xi_bump(p.N, float(c) * grid.a) for c in rhos]


@dataclass
class KReport:
    per_xi: list[float]
    mean: float
    spread: float  # (max - min) / max(|mean|, floor)

    def k(self) -> float:
        return self.mean


def extract_k(
    p: HardyParams,
    grid: HalfBoxGrid,
    field: DiscreteField,
    f,
    g,
    xi_family: list[TestFunction],
    spread_floor: float = 1.0,
) -> KReport:
    """Dirac coefficient of ``field`` against each test function, with spread.

    ``spread_floor`` sets the scale against which the spread is normalized
    when the mean is close to zero (e.g. the coefficient of the singular
    kernel itself, so 'k = 0 within 2%' is meaningful).
    """
    pts = grid.interior_points()
    lam = lambda_small_values(p, pts)
    uvals = field.interior_vector()
    flat_pts = grid.flat_points()
    gvals = _sample(g, flat_pts)
    estimates = []
    for xi in xi_family:
        _require_interior_support(grid, xi)
        dn0 = xi.origin_normal_derivative
        if abs(dn0) < 1e-12:
            raise DegenerateTestFunction("test function has vanishing normal slope at 0")
        lstar = _xi_lstar_values(p, xi, pts)
        ratio = _xi_ratio_values(p, xi, pts)
        t_u = _interior_volume_sum(grid, uvals * lstar * lam)
        t_f = _interior_volume_sum(grid, _sample(f, pts) * ratio * lam)
        dn_xi = -_xi_ratio_values(p, xi, flat_pts)
        t_g = flat_boundary_pairing(p, grid, gvals, dn_xi)
        estimates.append((t_u - t_f + t_g) / (p.c_beta * dn0))
    mean = float(np.mean(estimates))
    spread = float(np.max(estimates) - np.min(estimates)) / max(abs(mean), spread_floor)
    return KReport(per_xi=estimates, mean=mean, spread=spread)


# ---------------------------------------------------------------------------
# harmonic extension of boundary data and its weighted identity
# ---------------------------------------------------------------------------

def poisson_extension(grid: HalfBoxGrid, g, cfg: SolveConfig | None = None) -> DiscreteField:
    """Discrete harmonic extension: -Laplace u = 0 in the box, u = g on the boundary."""
    from .params import make_params

    cfg = cfg or SolveConfig()
    p0 = make_params(grid.N, 0.0)
    return solve_regularized(p0, grid, cfg, 0.0, g)


@dataclass
class PoissonIdentityReport:
    lhs: float
    volume_term: float
    boundary_term: float
    defect: float
    scale: float


def verify_identity_g(
    p: HardyParams,
    grid: HalfBoxGrid,
    extension: DiscreteField,
    g,
    xi: TestFunction,
) -> PoissonIdentityReport:
    """Defect of the harmonic-extension identity

    ``int P[g] Lstar(xi/x_N) dgamma
        = beta int P[g]/|x|^2 (xi/x_N) dgamma - int_bnd g (d xi/d nu) domega``.
    """
    _require_interior_support(grid, xi)
    pts = grid.interior_points()
    lam = lambda_small_values(p, pts)
    uvals = extension.interior_vector()
    lstar = _xi_lstar_values(p, xi, pts)
    ratio = _xi_ratio_values(p, xi, pts)
    r2 = grid.interior_r2()

    lhs = _interior_volume_sum(grid, uvals * lstar * lam)
    volume = p.beta * _interior_volume_sum(grid, uvals * ratio * lam / r2)
    flat_pts = grid.flat_points()
    gvals = _sample(g, flat_pts)
    dn_xi = -_xi_ratio_values(p, xi, flat_pts)
    boundary = flat_boundary_pairing(p, grid, gvals, dn_xi)
    defect = lhs - (volume - boundary)
    scale = max(abs(lhs), abs(volume), abs(boundary), 1e-300)
    return PoissonIdentityReport(lhs, volume, boundary, defect, scale)


def gamma_truncation_sweep(
    p: HardyParams, grid: HalfBoxGrid, extension: DiscreteField, radii
) -> list[float]:
    """Truncated integrals ``int_{|x| > r} P[g]/|x|^2 dgamma`` along shrinking r.

    A bounded, Cauchy sweep signals an integrable weighted mass; monotone
    unbounded growth signals the divergent branch of the dichotomy.
    """
    pts = grid.interior_points()
    lam = lambda_small_values(p, pts)
    r2 = grid.interior_r2()
    uvals = extension.interior_vector()
    integrand = uvals * lam / r2
    out = []
    for r in radii:
        keep = r2 > float(r) ** 2
        out.append(float(np.sum(integrand[keep])) * grid.h**grid.N)
    return out


# ---------------------------------------------------------------------------
# nonexistence mechanism: truncated divergent sources
# ---------------------------------------------------------------------------

@dataclass
class BlowupReport:
    radii: list[float]
    truncated_masses: list[float]
    probe_values: list[float]
    probe_node: tuple[int, ...]

    @property
    def probe_increments(self) -> list[float]:
        return [b - a for a, b in zip(self.probe_values, self.probe_values[1:])]


def log_divergent_source(p: HardyParams):
    """f(x) = |x|^{-N-1-tau_plus}: its weighted mass diverges logarithmically at 0."""

    def f(x):
        r = np.sqrt(np.sum(x * x, axis=1))
        return r ** (-p.N - 1.0 - p.tau_plus)

    return f


def _nearest_interior_node(grid: HalfBoxGrid, point: np.ndarray) -> tuple[int, ...]:
    lat_idx = [int(round((point[j] + grid.a) / grid.h)) for j in range(grid.N - 1)]
    ver_idx = int(round(point[-1] / grid.h))
    idx = [min(max(i, 1), grid.n - 1) for i in lat_idx] + [min(max(ver_idx, 1), grid.m - 1)]
    return tuple(idx)


def blowup_experiment(
    p: HardyParams,
    grid: HalfBoxGrid,
    f,
    radii,
    cfg: SolveConfig | None = None,
    probe_point=None,
) -> BlowupReport:
    """Solve with the source truncated outside shrinking balls and track a probe node.

    For a source whose weighted mass diverges at the origin the probe values
    grow without bound as the truncation radius shrinks (each halving adds a
    mass increment bounded below); for integrable sources they are Cauchy.
    """
    cfg = cfg or SolveConfig()
    radii = [float(r) for r in radii]
    if any(b >= a for a, b in zip(radii, radii[1:])) or radii[-1] <= 0:
        raise ValueError("truncation radii must be strictly decreasing and positive")
    if probe_point is None:
        probe_point = np.full(grid.N, 0.5 * grid.a / np.sqrt(grid.N))
    probe = _nearest_interior_node(grid, np.asarray(probe_point, dtype=float))

    pts = grid.interior_points()
    r2 = grid.interior_r2()
    base = np.asarray(f(pts), dtype=float)
    lam = lambda_small_values(p, pts)

    masses, probes = [], []
    for r in radii:
        keep = r2 > r * r
        fvals = np.where(keep, base, 0.0)
        masses.append(float(np.sum(fvals * lam)) * grid.h**grid.N)
        u = solve_regularized(p, grid, cfg, lambda x, v=fvals: v, 0.0)
        probes.append(float(u.values[probe]))
    return BlowupReport(radii, masses, probes, probe)


# ---------------------------------------------------------------------------
# fundamental solution of the box domain
# ---------------------------------------------------------------------------

@dataclass
class LambdaOmegaReport:
    field: DiscreteField
    w2: DiscreteField
    shell_radii: list[float]
    shell_ratio_errors: list[float] = dc_field(default_factory=list)
    min_value: float = float("nan")


def lambda_omega_construction(
    p: HardyParams,
    grid: HalfBoxGrid,
    r0: float | None = None,
    cfg: SolveConfig | None = None,
) -> LambdaOmegaReport:
    """Fundamental solution of the half-box with unit Dirac coefficient.

    Construction: multiply the half-space kernel by the cutoff equal to 1 on
    [0, r0/2] and 0 beyond r0, compute the commutator source
    ``-grad(eta) . grad(Lam) - Lam Laplace(eta)`` (smooth, supported in the
    collar), solve the moderate problem for its correction w2, and return
    ``Lam * eta - w2``.  The report tracks how the ratio to the free kernel
    approaches 1 on shrinking node shells.
    """
    cfg = cfg or SolveConfig()
    r0 = 0.8 * grid.a if r0 is None else float(r0)
    if r0 >= grid.a:
        raise ValueError("cutoff radius must be < the box halfwidth")
    if r0 < 16.0 * grid.h:
        raise CollarUnresolved(
            f"collar [r0/2, r0] needs >= 8 cells across; r0 = {r0:.4g}, h = {grid.h:.4g}"
        )

    eta = radial_field(bump_profile(2.0 / r0))
    lam_f = lambda_fund_field(p)
    pts = grid.interior_points()
    r = np.sqrt(grid.interior_r2())
    collar = (r >= 0.25 * r0) & (r <= 1.25 * r0)
    rhs = np.zeros(pts.shape[0])
    if np.any(collar):
        sub = pts[collar]
        grad_eta = eta.gradient_batch(sub)
        lap_eta = eta.laplacian(sub)
        grad_lam = lam_f.gradient_batch(sub)
        lam_vals = lam_f.value_batch(sub)
        rhs[collar] = -np.sum(grad_eta * grad_lam, axis=1) - lam_vals * lap_eta

    w2 = solve_regularized(p, grid, cfg, lambda x, v=rhs: v, 0.0)

    # Lam * eta at every node (zero on the whole boundary: x_N = 0 kills the
    # flat part, eta kills the lateral/top part since r >= a > r0 there)
    values = np.zeros(grid.node_shape)
    inner = grid.interior_slices()
    cut = eta.value_batch(pts)
    values[inner] = (lambda_fund_values(p, pts) * cut).reshape(grid.interior_shape)
    values[inner] -= w2.interior
    field = DiscreteField(grid, values, beta=p.beta, epsilon=cfg.epsilon)

    shell_radii = []
    shell_errors = []
    s = 2.0 * grid.h
    lam_vals_all = lambda_fund_values(p, pts)
    ratio = field.interior_vector() / lam_vals_all
    while 2.0 * s <= 0.5 * r0:
        sel = (r >= s) & (r < 2.0 * s)
        if np.any(sel):
            shell_radii.append(s)
            shell_errors.append(float(np.max(np.abs(ratio[sel] - 1.0))))
        s *= 2.0
    return LambdaOmegaReport(
        field=field,
        w2=w2,
        shell_radii=shell_radii,
        shell_ratio_errors=shell_errors,
        min_value=float(values.min()),
    )
