"""Closed-form kernels, cutoffs, operators: checked against finite differences."""

import math

import numpy as np
import pytest

from hardylab import (
    EvalAtSingularity,
    LogBranchOutOfRange,
    apply_L_beta,
    apply_L_beta_star,
    cutoff_eta0,
    cutoff_eta_n,
    cutoff_eta_r0,
    hardy_symbol,
    lambda_fund,
    lambda_small,
    lstar_radial,
    make_params,
)
from hardylab.fields import (
    affine_field,
    apply_L_beta_star_batch,
    bump_profile,
    coordinate_field,
    cutoff_eta0_d1,
    cutoff_eta0_d2,
    lambda_fund_field,
    lambda_fund_values,
    lambda_small_field,
    neglog_power_profile,
    power_profile,
    product_field,
    radial_field,
    shifted_radial_field,
    sqrt_neglog_power_profile,
    sum_field,
    xn2_radial_field,
    xn_radial_field,
    xi_bump,
    zeta_bump,
)
from conftest import fd_gradient, fd_laplacian, halfball_samples


# ---------------------------------------------------------------------------
# cutoffs
# ---------------------------------------------------------------------------

def test_cutoff_plateaus():
    assert cutoff_eta0(0.5) == 1.0
    assert cutoff_eta0(3.0) == 0.0
    assert cutoff_eta0(1.5) == 0.5  # quintic blend is antisymmetric about the midpoint


def test_cutoff_is_monotone_decreasing():
    r = np.linspace(0.0, 2.5, 400)
    v = cutoff_eta0(r)
    assert np.all(np.diff(v) <= 1e-15)
    assert np.all((v >= 0.0) & (v <= 1.0))


@pytest.mark.parametrize("knot", [1.0, 2.0])
def test_cutoff_c2_at_knots(knot):
    # value, first and second derivative continuous across the knots
    h = 1e-6
    for f, tol in ((cutoff_eta0, 1e-11), (cutoff_eta0_d1, 1e-5), (cutoff_eta0_d2, 1e-4)):
        assert abs(f(knot + h) - f(knot - h)) < tol
    # FD of value matches stated first derivative near the knots
    for r in (0.9, 1.1, 1.5, 1.9, 2.1):
        fd = (cutoff_eta0(r + h) - cutoff_eta0(r - h)) / (2 * h)
        assert fd == pytest.approx(cutoff_eta0_d1(r), abs=1e-7)


def test_derived_cutoffs():
    assert cutoff_eta_r0(0.2, 0.05) == 1.0
    assert cutoff_eta_r0(0.2, 0.25) == 0.0
    assert cutoff_eta_n(10, 0.05) == 0.0  # 1 - eta0(0.5)
    assert cutoff_eta_n(10, 0.25) == 1.0  # 1 - eta0(2.5)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def test_regular_kernel_values():
    p = make_params(2, 0.0)
    assert lambda_small(p, (0.3, 0.4)) == pytest.approx(0.4)
    assert lambda_small(p, (0.7, 0.0)) == 0.0
    p3 = make_params(2, 3.0)
    assert lambda_small(p3, (0.0, 1.0)) == pytest.approx(1.0)


def test_singular_kernel_values():
    p = make_params(2, 0.0)
    # tau_minus = -2, |x| = 1 on the (0.6, 0.8) point
    assert lambda_fund(p, (0.6, 0.8)) == pytest.approx(0.8)
    # critical branch at N=2: -x_N |x|^{-1} ln|x| with x_N = |x| = 1/e gives
    # (1/e) * e * 1 = 1 (recomputed by hand; tau_minus = -N/2 = -1 here)
    pc = make_params(2, -1.0)
    x = (0.0, 1.0 / math.e)
    assert lambda_fund(pc, x) == pytest.approx(1.0, rel=1e-12)
    p3 = make_params(2, 3.0)
    assert lambda_fund(p3, (0.0, 1.0)) == pytest.approx(1.0)


def test_kernel_singularity_guards():
    p = make_params(2, 1.0)
    with pytest.raises(EvalAtSingularity):
        lambda_small(p, (0.0, 0.0))
    pc = make_params(2, -1.0)
    with pytest.raises(LogBranchOutOfRange):
        lambda_fund(pc, (0.0, 1.5))


def test_kernels_annihilated_by_operator(rng):
    # both kernels solve the homogeneous equation: 1000 random points, 1e-10
    for N, beta in ((2, 3.0), (2, -1.0), (3, -2.25), (3, 1.0)):
        p = make_params(N, beta)
        lam = lambda_small_field(p)
        Lam = lambda_fund_field(p)
        pts = halfball_samples(rng, N, 250, rmin=0.05, rmax=0.9, xn_min=0.01)
        for x in pts:
            rr2 = float(np.sum(x * x))
            # tolerance relative to the size of the cancelling terms
            scale_lam = max(1.0, abs(beta) * abs(lam.value(x)) / rr2)
            scale_fund = max(1.0, abs(beta) * abs(Lam.value(x)) / rr2)
            assert abs(apply_L_beta(p, lam, x)) < 1e-10 * scale_lam
            assert abs(apply_L_beta(p, Lam, x)) < 1e-10 * scale_fund


# ---------------------------------------------------------------------------
# operator on the power family: closed form and FD oracle
# ---------------------------------------------------------------------------

def test_power_family_closed_form_frozen():
    # tau=-1, N=2, beta=1 at (0.3, 0.4): symbol = 1 - (-1)(1) = 2, so
    # 2 * 0.4 * 0.5^{-3} = 6.4 (value confirmed by the FD oracle below)
    p = make_params(2, 1.0)
    u = xn_radial_field(power_profile(-1.0))
    assert hardy_symbol(p, -1.0) == pytest.approx(2.0)
    assert apply_L_beta(p, u, (0.3, 0.4)) == pytest.approx(6.4, rel=1e-12)


def test_power_family_formula_vs_fd(rng):
    # L(x_N |x|^tau) = hardy_symbol(tau) x_N |x|^{tau-2}, FD h = 1e-4, 1e-5 rel
    for N, beta in ((2, -0.5), (3, 2.0)):
        p = make_params(N, beta)
        for tau in (-1.2, 0.7, 1.5):
            u = xn_radial_field(power_profile(tau))
            for x in halfball_samples(rng, N, 8, rmin=0.25, rmax=0.8, xn_min=0.15):
                exact = hardy_symbol(p, tau) * x[-1] * np.linalg.norm(x) ** (tau - 2.0)
                assert apply_L_beta(p, u, x) == pytest.approx(exact, rel=1e-12)
                fd = -fd_laplacian(u, x) + beta * u.value(x) / float(np.sum(x * x))
                assert fd == pytest.approx(exact, rel=1e-5)


def test_field_derivatives_vs_fd(rng):
    fields = [
        xn_radial_field(power_profile(-1.7)),
        xn2_radial_field(power_profile(0.6)),
        xn_radial_field(neglog_power_profile(-1.0)),
        xn_radial_field(sqrt_neglog_power_profile(-1.5)),
        radial_field(bump_profile(2.5)),
        shifted_radial_field(bump_profile(4.0), [0.2, 0.25]),
        product_field(
            xn_radial_field(power_profile(1.0)), affine_field(0.4, [0.3, -0.2])
        ),
        sum_field(coordinate_field(0), radial_field(power_profile(2.0)), 0.5, 1.0),
    ]
    pts = halfball_samples(rng, 2, 10, rmin=0.15, rmax=0.7, xn_min=0.1)
    for fld in fields:
        for x in pts:
            assert np.allclose(fld.gradient(x), fd_gradient(fld, x), atol=1e-6)
            assert fld.laplacian(x) == pytest.approx(fd_laplacian(x=x, field=fld), abs=2e-4, rel=1e-4)


# ---------------------------------------------------------------------------
# conjugated operator
# ---------------------------------------------------------------------------

def test_conjugated_operator_on_constant():
    p = make_params(3, 2.0)
    one = affine_field(1.0, [0.0, 0.0, 0.0])
    assert apply_L_beta_star(p, one, (0.2, 0.1, 0.3)) == pytest.approx(0.0, abs=1e-14)


def test_conjugated_operator_flat_case(rng):
    # at beta = 0 the conjugated operator is -Laplace - (2/x_N) d/dx_N
    p = make_params(2, 0.0)
    zeta = product_field(radial_field(bump_profile(2.0)), affine_field(0.7, [0.4, -0.3]))
    for x in halfball_samples(rng, 2, 10, rmin=0.2, rmax=0.8, xn_min=0.1):
        expected = -fd_laplacian(zeta, x) - 2.0 / x[-1] * fd_gradient(zeta, x)[-1]
        assert apply_L_beta_star(p, zeta, x) == pytest.approx(expected, rel=2e-5, abs=1e-6)


def test_conjugation_identity(rng):
    # lam^{-1} L(lam w / x_N) = Lstar(w / x_N) for w = x_N * poly, analytically,
    # at 100 random points within 1e-8
    for N, beta in ((2, 1.0), (3, -1.5)):
        p = make_params(N, beta)
        poly = affine_field(0.8, rng.uniform(-0.5, 0.5, N))
        lam_poly = product_field(xn_radial_field(power_profile(p.tau_plus)), poly)
        pts = halfball_samples(rng, N, 50, rmin=0.1, rmax=0.8, xn_min=0.05)
        for x in pts:
            lhs = apply_L_beta(p, lam_poly, x) / lambda_small(p, x)
            rhs = apply_L_beta_star(p, poly, x)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-8)


def test_radial_conjugated_formula(rng):
    # the radial closed form agrees with the generic batch evaluation
    p = make_params(3, 1.5)
    prof = bump_profile(3.0)
    fld = radial_field(prof)
    pts = halfball_samples(rng, 3, 40, rmin=0.1, rmax=0.9, xn_min=0.05)
    r = np.linalg.norm(pts, axis=1)
    closed = lstar_radial(p, prof, r)
    generic = apply_L_beta_star_batch(p, fld, pts)
    assert np.allclose(closed, generic, rtol=1e-12, atol=1e-12)


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

def test_zeta_bump_structure():
    z = zeta_bump(2, 0.8)
    assert z.origin_value == 1.0
    assert z.support_radius == 0.8
    assert z.field.value((0.1, 0.2)) == 1.0          # flat region
    assert z.field.value((0.9, 0.2)) == 0.0          # outside support


def test_xi_bump_structure():
    xi = xi_bump(2, 0.6)
    assert xi.vanishes_on_flat
    assert xi.origin_normal_derivative == 1.0
    assert xi.field.value((0.2, 0.0)) == 0.0
    # ratio value on the flat part equals the radial bump
    assert xi.ratio_profile is not None
    x = np.array([[0.1, 0.05]])
    assert xi.field.value_batch(x)[0] == pytest.approx(0.05 * xi.ratio_profile.g(np.linalg.norm(x[0])))


def test_vectorized_kernel_matches_scalar(rng):
    p = make_params(3, -2.0)
    pts = halfball_samples(rng, 3, 20, rmin=0.05, rmax=0.9, xn_min=0.0)
    vals = lambda_fund_values(p, pts)
    for x, v in zip(pts, vals):
        assert lambda_fund(p, x) == pytest.approx(v)
