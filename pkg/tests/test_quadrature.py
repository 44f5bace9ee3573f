"""Graded quadrature: exactness, convergence, singular-weight behavior."""

import math

import numpy as np
import pytest

from hardylab import (
    DegenerateRegion,
    NonFiniteIntegrand,
    build_rule,
    integrate,
    integrate_gamma,
    integrate_omega_beta,
    make_params,
)
from hardylab import _kernels
from hardylab.fields import lambda_fund_values


def ones(x):
    return np.ones(x.shape[0])


# ---------------------------------------------------------------------------
# exactness of the decomposition
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "kind,dim,measure",
    [
        ("volume_halfball", 2, math.pi / 2.0),
        ("volume_halfball", 3, 2.0 * math.pi / 3.0),
        ("volume_halfbox", 2, 2.0 * 0.45 * 0.45),
        ("volume_halfbox", 3, (2 * 0.45) ** 2 * 0.45),
        ("surface_flat_disk", 2, 2.0),
        ("surface_flat_disk", 3, math.pi),
        ("surface_hemisphere", 2, math.pi),
        ("surface_hemisphere", 3, 2.0 * math.pi),
    ],
)
def test_total_weight_is_region_measure(kind, dim, measure):
    outer = 0.45 if kind == "volume_halfbox" else 1.0
    rule = build_rule(kind, outer, base_resolution=16, levels=8, dim=dim)
    assert rule.total_weight() == pytest.approx(measure, rel=1e-10)


def test_cells_avoid_origin_and_lower_halfspace():
    for kind, dim in (("volume_halfball", 2), ("volume_halfball", 3),
                      ("surface_flat_disk", 3), ("volume_halfbox", 2)):
        rule = build_rule(kind, 0.8, base_resolution=16, levels=10, dim=dim)
        r = np.sqrt(np.sum(rule.centers**2, axis=1))
        assert np.all(r > 0.0)
        assert np.all(rule.weights > 0.0)
        if kind.startswith("volume"):
            assert np.all(rule.centers[:, -1] > 0.0)


def test_degenerate_region_rejected():
    with pytest.raises(DegenerateRegion):
        build_rule("volume_halfball", 0.5, inner_cut=0.5)
    with pytest.raises(ValueError):
        build_rule("volume_halfball", 1.0, base_resolution=2)
    with pytest.raises(ValueError):
        build_rule("mystery_kind", 1.0)


# ---------------------------------------------------------------------------
# reference values
# ---------------------------------------------------------------------------

def test_halfdisk_area_example():
    rule = build_rule("volume_halfball", 1.0, base_resolution=64, levels=12, dim=2)
    assert integrate(rule, ones) == pytest.approx(math.pi / 2.0, abs=1e-6)


def test_hemisphere_height_squared_example():
    # int over the upper unit hemisphere of x_N^2 = |S^2| / (2*3)
    rule = build_rule("surface_hemisphere", 1.0, base_resolution=2048, levels=1, dim=3)
    assert integrate(rule, lambda x: x[:, 2] ** 2) == pytest.approx(
        2.0 * math.pi / 3.0, rel=1e-6
    )


def test_flat_disk_plain_weight_example():
    p = make_params(2, 0.0)  # tau_plus = 0
    rule = build_rule("surface_flat_disk", 1.0, base_resolution=32, levels=12, dim=2)
    assert integrate_omega_beta(p, rule, ones) == pytest.approx(2.0, abs=1e-8)


def test_flat_disk_singular_weight_example():
    # int_{-1}^{1} |y| dy = 1 with the tau_plus = 1 weight
    p = make_params(2, 3.0)
    rule = build_rule("surface_flat_disk", 1.0, base_resolution=64, levels=16, dim=2)
    assert integrate_omega_beta(p, rule, ones) == pytest.approx(1.0, rel=1e-6)


def test_flat_disk_negative_weight_converges():
    # weight |y|^{tau_plus} with tau_plus < 0 is integrable; grading handles it
    p = make_params(2, -0.75)  # tau_plus = -0.5
    vals = []
    for levels in (16, 24, 32):
        rule = build_rule("surface_flat_disk", 1.0, base_resolution=64, levels=levels, dim=2)
        vals.append(integrate_omega_beta(p, rule, ones))
    exact = 2.0 / (1.0 + p.tau_plus)
    assert vals[-1] == pytest.approx(exact, rel=1e-3)
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


def test_gamma_moment_example():
    # f = 1 against the weighted volume measure at beta = 0: int x_N dx = 2/3
    p = make_params(2, 0.0)
    rule = build_rule("volume_halfball", 1.0, base_resolution=512, levels=14, dim=2)
    assert integrate_gamma(p, rule, ones) == pytest.approx(2.0 / 3.0, rel=1e-5)


def test_gamma_inverse_kernel_reduces_to_area():
    p = make_params(2, 0.0)
    rule = build_rule("volume_halfball", 1.0, base_resolution=512, levels=14, dim=2)
    inv = lambda x: 1.0 / (x[:, -1] * np.ones(x.shape[0]))
    # f = 1/lam with tau_plus = 0 means f = 1/x_N; f * lam = 1 recovers area
    assert integrate_gamma(p, rule, inv) == pytest.approx(math.pi / 2.0, rel=1e-5)


def test_gamma_singular_kernel_over_radius_stable():
    # Lam/|x| is dgamma-integrable; one extra grading level moves the result
    # by less than 1e-3 relative
    p = make_params(2, 3.0)
    f = lambda x: lambda_fund_values(p, x) / np.sqrt(np.sum(x * x, axis=1))
    vals = []
    for levels in (12, 13):
        rule = build_rule("volume_halfball", 1.0, base_resolution=96, levels=levels, dim=2)
        vals.append(integrate_gamma(p, rule, f))
    assert np.isfinite(vals).all()
    assert abs(vals[1] - vals[0]) < 1e-3 * abs(vals[1])


def test_grading_increments_decrease():
    # for integrands in the weighted-integrable class, level increments shrink
    p = make_params(2, -0.99)  # tau_plus = -0.9, near the integrability threshold
    f = lambda x: np.sum(x * x, axis=1) ** (p.tau_plus / 2.0)
    vals = [
        integrate_gamma(
            p, build_rule("volume_halfball", 1.0, base_resolution=64, levels=lv, dim=2), f
        )
        for lv in (6, 8, 10, 12, 14)
    ]
    increments = np.abs(np.diff(vals))
    assert np.all(np.diff(increments) < 0.0)


def test_refinement_convergence_factor():
    # midpoint rule is second order: halving cell size cuts the error by >= 3
    rule_c = build_rule("volume_halfball", 1.0, base_resolution=32, levels=10, dim=2)
    rule_f = build_rule("volume_halfball", 1.0, base_resolution=64, levels=10, dim=2)
    f = lambda x: np.cos(3.0 * x[:, 0]) * x[:, 1]
    exact_ish = integrate(
        build_rule("volume_halfball", 1.0, base_resolution=512, levels=10, dim=2), f
    )
    e_c = abs(integrate(rule_c, f) - exact_ish)
    e_f = abs(integrate(rule_f, f) - exact_ish)
    assert e_c / e_f >= 3.0


def test_inner_cut_puncture():
    rule = build_rule("volume_halfball", 1.0, inner_cut=0.25, base_resolution=32, levels=12, dim=2)
    r = np.sqrt(np.sum(rule.centers**2, axis=1))
    assert r.min() > 0.25
    annulus = math.pi / 2.0 * (1.0 - 0.25**2)
    assert rule.total_weight() == pytest.approx(annulus, rel=1e-10)


def test_nonfinite_integrand_reported():
    rule = build_rule("volume_halfball", 1.0, base_resolution=16, levels=4, dim=2)

    def bad(x):
        v = np.ones(x.shape[0])
        v[7] = np.inf
        return v

    with pytest.raises(NonFiniteIntegrand) as err:
        integrate(rule, bad)
    assert err.value.cell_index == 7


def test_kind_mismatch_rejected():
    p = make_params(2, 0.0)
    vol = build_rule("volume_halfball", 1.0, base_resolution=16, levels=4, dim=2)
    surf = build_rule("surface_flat_disk", 1.0, base_resolution=16, levels=4, dim=2)
    with pytest.raises(ValueError):
        integrate_omega_beta(p, vol, ones)
    with pytest.raises(ValueError):
        integrate_gamma(p, surf, ones)


def test_backend_parity():
    # the active kernel backend agrees with the numpy reference path
    rng = np.random.default_rng(7)
    pts = rng.uniform(0.05, 1.0, size=(20000, 3))
    w = rng.uniform(0.0, 1.0, size=20000)
    v_ref = _kernels._np_halfspace_weight(pts, -1.3)
    v_act = _kernels.halfspace_weight(pts, -1.3)
    assert np.allclose(v_ref, v_act, rtol=1e-13, atol=0.0)
    s_ref = _kernels._np_weighted_sum(v_ref, w)
    s_act = _kernels.weighted_sum(v_act, w)
    assert s_act == pytest.approx(s_ref, rel=1e-12)
    assert _kernels.radial_power(pts, 0.7) == pytest.approx(
        _kernels._np_radial_power(pts, 0.7), rel=1e-13
    )


def test_integration_is_linear():
    p = make_params(2, 1.0)
    rule = build_rule("surface_flat_disk", 1.0, base_resolution=32, levels=10, dim=2)
    g1 = lambda x: np.cos(x[:, 0])
    g2 = lambda x: x[:, 0] ** 2
    combined = lambda x: 2.0 * g1(x) - 3.0 * g2(x)
    lhs = integrate_omega_beta(p, rule, combined)
    rhs = 2.0 * integrate_omega_beta(p, rule, g1) - 3.0 * integrate_omega_beta(p, rule, g2)
    assert lhs == pytest.approx(rhs, abs=1e-10)
