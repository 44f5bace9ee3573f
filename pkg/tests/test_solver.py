"""Assembly diagnostics, solves, monotonicity, duality, regularized identity."""

import numpy as np
import pytest

from hardylab import (
    HalfBoxGrid,
    MonotonicityViolated,
    SolveConfig,
    assemble,
    dual_solve,
    epsilon_sweep,
    make_params,
    residual_identity_regularized,
    solve_regularized,
)
from hardylab.fields import xi_bump
from hardylab.solver import (
    convergence_orders,
    correction_rate_sweep,
    manufactured_errors,
    manufactured_pair,
)


def test_assemble_flat_case_is_plain_laplacian():
    p = make_params(2, 0.0)
    grid = HalfBoxGrid(2, 0.45, 8)
    op = assemble(p, grid, SolveConfig())
    assert op.m_matrix
    assert np.all(op.potential == 0.0)
    h2 = grid.h**2
    assert op.matrix.diagonal() == pytest.approx(np.full(grid.num_interior, 4.0 / h2))


def test_assemble_positive_shift_keeps_m_matrix():
    p = make_params(2, 3.0)
    grid = HalfBoxGrid(2, 0.45, 16)
    op = assemble(p, grid, SolveConfig(epsilon=0.01))
    assert op.m_matrix
    assert np.all(op.potential > 0.0)


def test_assemble_critical_certificate_passes():
    p = make_params(2, -1.0)
    grid = HalfBoxGrid(2, 0.45, 16)
    op = assemble(p, grid, SolveConfig(epsilon=1e-4))
    assert op.spd_min_eig is not None and op.spd_min_eig > 0.0
    assert not op.m_matrix  # negative potential breaks diagonal dominance


def test_zero_data_gives_zero_solution():
    p = make_params(2, 1.0)
    grid = HalfBoxGrid(2, 0.45, 12)
    u = solve_regularized(p, grid, SolveConfig(), 0.0, 0.0)
    assert np.allclose(u.values, 0.0)


def test_boundary_data_attained_exactly():
    p = make_params(2, 1.0)
    grid = HalfBoxGrid(2, 0.45, 12)
    g = lambda x: 1.0 + x[:, 0] ** 2
    u = solve_regularized(p, grid, SolveConfig(), 0.0, g)
    masks = grid.boundary_masks()
    lat = grid.lateral_axis()
    expected_flat = 1.0 + lat**2
    assert np.allclose(u.values[:, 0], expected_flat)


@pytest.mark.parametrize("beta", [-0.5, 0.0, 3.0])
def test_manufactured_convergence_second_order(beta):
    p = make_params(2, beta)
    errs = manufactured_errors(p, (16, 32, 64))
    for order in convergence_orders(errs):
        assert order == pytest.approx(2.0, abs=0.3)


def test_manufactured_pair_consistency():
    p = make_params(2, 3.0)
    grid = HalfBoxGrid(2, 0.45, 16)
    u_star, source = manufactured_pair(p, grid, eps=0.0)
    pts = grid.interior_points()
    # the source is the operator applied to u*: check one value by hand
    x = pts[[10]]
    r2 = float(np.sum(x[0] * x[0]))
    eig = (np.pi / grid.a) ** 2 * 1.25
    assert source(x)[0] == pytest.approx((eig + p.beta / r2) * u_star(x)[0])


def test_discrete_comparison_random_nonnegative(rng):
    # nonnegative data yields nonnegative solutions (inverse positivity)
    grid = HalfBoxGrid(2, 0.45, 16)
    for beta in (-0.5, 0.0, 3.0):
        p = make_params(2, beta)
        for _ in range(5):
            c = rng.uniform(0.2, 2.0)
            f = lambda x, c=c: c * (1.0 + np.cos(3 * x[:, 0])) * x[:, 1]
            u = solve_regularized(p, grid, SolveConfig(), f, 0.0)
            assert u.values.min() >= -1e-10


def test_discrete_comparison_ordered_pairs(rng):
    grid = HalfBoxGrid(2, 0.45, 16)
    p = make_params(2, -0.5)
    base = lambda x: 1.0 + 0.5 * np.sin(2 * x[:, 0])
    extra = lambda x: 0.3 * (1.0 + np.cos(x[:, 1]))
    u2 = solve_regularized(p, grid, SolveConfig(), base, 0.1)
    u1 = solve_regularized(
        p, grid, SolveConfig(), lambda x: base(x) + extra(x), 0.2
    )
    assert np.all(u1.values >= u2.values - 1e-9)


@pytest.mark.parametrize(
    "beta,expect",
    [(3.0, "decreasing_with_epsilon_down"), (-0.5, "increasing_with_epsilon_down"), (0.0, "constant")],
)
def test_epsilon_sweep_direction(beta, expect):
    p = make_params(2, beta)
    grid = HalfBoxGrid(2, 0.45, 16)
    eps = [0.25, 0.0625, 0.015625]
    fields, report = epsilon_sweep(p, grid, SolveConfig(), 1.0, 0.0, eps)
    assert report.direction == expect
    assert report.max_violation <= 1e-9
    first, last = fields[0].interior_vector(), fields[-1].interior_vector()
    if beta > 0:
        assert np.all(first >= last - 1e-12)
    elif beta < 0:
        assert np.all(last >= first - 1e-12)
    else:
        assert np.allclose(first, last)


def test_epsilon_sweep_validation():
    p = make_params(2, 1.0)
    grid = HalfBoxGrid(2, 0.45, 8)
    with pytest.raises(ValueError):
        epsilon_sweep(p, grid, SolveConfig(), 1.0, 0.0, [0.1, 0.2])
    with pytest.raises(ValueError):
        epsilon_sweep(p, grid, SolveConfig(), lambda x: -np.ones(len(x)), 0.0, [0.1, 0.05])


def test_regularized_identity_flat_case_has_no_correction():
    p = make_params(2, 0.0)
    grid = HalfBoxGrid(2, 0.45, 24)
    xi = xi_bump(2, 0.5 * grid.a)
    u = solve_regularized(p, grid, SolveConfig(epsilon=0.01), 1.0, 0.0)
    rep = residual_identity_regularized(p, grid, u, 1.0, 0.0, xi, 0.01)
    assert rep.correction == 0.0
    assert abs(rep.defect) / rep.scale < 0.05


def test_regularized_identity_defect_shrinks():
    p = make_params(2, 3.0)
    rel = []
    for n in (24, 48, 96):
        grid = HalfBoxGrid(2, 0.45, n)
        xi = xi_bump(2, 0.5 * grid.a)
        u = solve_regularized(p, grid, SolveConfig(epsilon=0.01), 1.0, 0.0)
        rep = residual_identity_regularized(p, grid, u, 1.0, 0.0, xi, 0.01)
        rel.append(abs(rep.defect) / rep.scale)
    assert rel[-1] < rel[0]
    assert rel[-1] < 0.02


def test_correction_decay_rates():
    # observed decay is at least the proof's branch bound, and the corrections
    # carry the sign of beta
    for beta, bound in ((3.0, 0.5), (-0.5, np.sqrt(0.5) / 2.0)):
        p = make_params(2, beta)
        grid = HalfBoxGrid(2, 0.45, 48)
        eps = [e for e in (4.0 ** (-j) for j in range(1, 8)) if e >= grid.h**2 / 4]
        xi = xi_bump(2, 0.5 * grid.a)
        corr, slope = correction_rate_sweep(p, grid, SolveConfig(), 1.0, 0.0, xi, eps)
        assert slope >= bound - 0.3
        assert all(np.sign(c) == np.sign(beta) for c in corr)


def test_dual_solve_bounds_and_ordering():
    p = make_params(2, 3.0)
    grid = HalfBoxGrid(2, 0.45, 32)
    xn = grid.interior_points()[:, -1]
    res1 = dual_solve(p, grid, SolveConfig(), "one")
    res2 = dual_solve(p, grid, SolveConfig(), "one_over_xN")
    for res in (res1, res2):
        w = res.w.interior_vector()
        assert w.min() >= -1e-9
        assert np.max(w - res.t_bound * xn) <= 1e-6
    # the 1/x_N source dominates the constant source on this domain (x_N < 1)
    assert np.all(res2.w.values >= res1.w.values - 1e-12)
    # w / x_N stays bounded up to the flat boundary
    ratio = res1.w.interior_vector() / xn
    assert ratio.max() <= res1.t_bound + 1e-6


def test_dual_solve_custom_rhs_roundtrip():
    p = make_params(2, 1.0)
    grid = HalfBoxGrid(2, 0.45, 16)
    res = dual_solve(p, grid, SolveConfig(), "custom", rhs=lambda x: np.ones(len(x)))
    ref = dual_solve(p, grid, SolveConfig(), "one")
    assert np.allclose(res.w.values, ref.w.values)
    with pytest.raises(ValueError):
        dual_solve(p, grid, SolveConfig(), "custom")
    with pytest.raises(ValueError):
        dual_solve(p, grid, SolveConfig(), "mystery")
