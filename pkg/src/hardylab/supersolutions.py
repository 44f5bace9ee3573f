"""Explicit barrier (supersolution) families and their parameter recipes.

Two families dominate the sources used by the solver module:

* the V family ``t x_N |x|^{-N/2} - s x_N^2 |x|^{tau_plus}`` (log-corrected on
  the critical branch) dominates bounded sources for beta in [beta0, 0);
* the W family ``t lam(x) - s (x_N |x|^{tau_plus+2} + l x_N^2 |x|^{tau_plus})``
  dominates the |x|^{tau_plus} source appearing in the dual problems.

All residuals below are exact closed forms of ``(-Laplace + beta/|x|^2)``
applied to the families; the test suite cross-checks them against a finite
difference oracle and against :func:`hardylab.fields.apply_L_beta` with the
hand-coded Hessians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvalAtSingularity, LogBranchOutOfRange, RecipeDivergent
from .fields import (
    ScalarField,
    neglog_power_profile,
    power_profile,
    sqrt_neglog_power_profile,
    sum_field,
    xn2_radial_field,
    xn_radial_field,
)
from .params import HardyParams, hardy_symbol

_MAX_DOUBLINGS = 80


@dataclass(frozen=True)
class SupersolutionParams:
    """Certified barrier parameters; ``l`` is used only by the W family."""

    s0: float
    t0: float
    l: float = 0.0
    family: str = "V"


def _radii(x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(x * x, axis=-1))


def _check_unit_halfball(x: np.ndarray, critical_log: bool) -> None:
    r = _radii(x)
    if np.any(r == 0.0):
        raise EvalAtSingularity("barrier evaluated at the origin")
    if critical_log and np.any(r >= 1.0):
        raise LogBranchOutOfRange("critical-branch barrier requires |x| < 1")


# ---------------------------------------------------------------------------
# V family
# ---------------------------------------------------------------------------

def supersolution_V(p: HardyParams, s: float, t: float, x) -> np.ndarray | float:
    """Barrier value V_{t,s}(x) on the unit half-ball."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    _check_unit_halfball(x, critical_log=True)
    r = _radii(x)
    xn = x[:, -1]
    half = -0.5 * p.N
    if p.critical:
        val = t * xn * r**half * np.sqrt(-np.log(r)) - s * xn**2 * r**half
    else:
        val = t * xn * r**half - s * xn**2 * r**p.tau_plus
    return float(val[0]) if val.shape == (1,) else val


def supersolution_V_residual(p: HardyParams, s: float, t: float, x) -> np.ndarray | float:
    """Exact (-Laplace + beta/|x|^2) V_{t,s}."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    _check_unit_halfball(x, critical_log=True)
    r = _radii(x)
    xn = x[:, -1]
    half = -0.5 * p.N
    if p.critical:
        val = (
            0.25 * t * xn * r ** (half - 2.0) * (-np.log(r)) ** (-1.5)
            + 2.0 * s * r**half
            - s * p.N * xn**2 * r ** (half - 2.0)
        )
    else:
        val = (
            t * (p.beta - p.beta0) * xn * r ** (half - 2.0)
            + 2.0 * s * r**p.tau_plus
            + 2.0 * s * p.tau_plus * xn**2 * r ** (p.tau_plus - 2.0)
        )
    return float(val[0]) if val.shape == (1,) else val


def supersolution_V_field(p: HardyParams, s: float, t: float) -> ScalarField:
    """V_{t,s} as a ScalarField with exact derivatives (non-value-checked)."""
    half = -0.5 * p.N
    if p.critical:
        first = xn_radial_field(sqrt_neglog_power_profile(half))
        second = xn2_radial_field(power_profile(half))
    else:
        first = xn_radial_field(power_profile(half))
        second = xn2_radial_field(power_profile(p.tau_plus))
    return sum_field(first, second, a=t, b=-s)


def choose_V_params(p: HardyParams, f_bound, domain_samples) -> SupersolutionParams:
    """Deterministic barrier parameters dominating |f|.

    ``s0`` is half the sampled supremum of |f(x)| / |x|^{tau_plus}; ``t0`` is
    the smallest doubling of ``s0`` for which the sign-critical part of the
    residual is nonnegative on every sample, which certifies
    ``residual >= 2 s0 |x|^{tau_plus} >= |f|`` there.
    """
    if not (p.beta0 <= p.beta < 0.0):
        raise ValueError("the V-family recipe applies for beta in [beta0, 0)")
    x = np.atleast_2d(np.asarray(domain_samples, dtype=float))
    _check_unit_halfball(x, critical_log=True)
    r = _radii(x)
    fb = np.abs(np.asarray(f_bound(x), dtype=float))
    ratios = fb / r**p.tau_plus
    if not np.all(np.isfinite(ratios)):
        raise RecipeDivergent("sampled sup of |f| / |x|^{tau_plus} is not finite")
    s0 = 0.5 * float(np.max(ratios))
    if s0 == 0.0:
        return SupersolutionParams(s0=0.0, t0=0.0, family="V")

    xn = x[:, -1]
    half = -0.5 * p.N
    if p.critical:
        positive = 0.25 * xn * r ** (half - 2.0) * (-np.log(r)) ** (-1.5)
        negative = -s0 * p.N * xn**2 * r ** (half - 2.0)
    else:
        positive = (p.beta - p.beta0) * xn * r ** (half - 2.0)
        negative = 2.0 * s0 * p.tau_plus * xn**2 * r ** (p.tau_plus - 2.0)

    t0 = s0
    for _ in range(_MAX_DOUBLINGS):
        if np.all(t0 * positive + negative >= 0.0):
            return SupersolutionParams(s0=s0, t0=t0, family="V")
        t0 *= 2.0
    raise RecipeDivergent("doubling search for t0 did not certify the residual sign")


# ---------------------------------------------------------------------------
# W family
# ---------------------------------------------------------------------------

def supersolution_W(p: HardyParams, s: float, t: float, l: float, x) -> np.ndarray | float:
    """Barrier value W_{t,s,l}(x) = t lam - s (x_N |x|^{tau+ + 2} + l x_N^2 |x|^{tau+})."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    _check_unit_halfball(x, critical_log=False)
    r = _radii(x)
    xn = x[:, -1]
    val = t * xn * r**p.tau_plus - s * (
        xn * r ** (p.tau_plus + 2.0) + l * xn**2 * r**p.tau_plus
    )
    return float(val[0]) if val.shape == (1,) else val


def supersolution_W_residual(p: HardyParams, s: float, t: float, l: float, x) -> np.ndarray | float:
    """Exact (-Laplace + beta/|x|^2) W_{t,s,l}.

    Closed form ``s [ -c2 lam + 2 l |x|^{tau+} + 2 tau+ l x_N^2 |x|^{tau+ - 2} ]``
    with ``c2 = hardy_symbol(tau_plus + 2) = -4 (1 + sqrt(beta - beta0)) < 0``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    _check_unit_halfball(x, critical_log=False)
    r = _radii(x)
    xn = x[:, -1]
    c2 = hardy_symbol(p, p.tau_plus + 2.0)
    val = s * (
        -c2 * xn * r**p.tau_plus
        + 2.0 * l * r**p.tau_plus
        + 2.0 * p.tau_plus * l * xn**2 * r ** (p.tau_plus - 2.0)
    )
    return float(val[0]) if val.shape == (1,) else val


def supersolution_W_field(p: HardyParams, s: float, t: float, l: float) -> ScalarField:
    lam = xn_radial_field(power_profile(p.tau_plus))
    mid = xn_radial_field(power_profile(p.tau_plus + 2.0))
    quad = xn2_radial_field(power_profile(p.tau_plus))
    return sum_field(sum_field(lam, mid, a=t, b=-s), quad, a=1.0, b=-s * l)


def choose_W_params(p: HardyParams, domain_samples, l: float = 1.0) -> SupersolutionParams:
    """Parameters making W a positive supersolution for the |x|^{tau_plus} source.

    Uses the pointwise bound x_N <= |x| to pick ``s`` so that the residual is
    at least |x|^{tau_plus}, then certifies positivity of W and the residual
    inequality on the samples by a doubling search for ``t``.
    """
    margin = 1.0 + min(p.tau_plus, 0.0)  # 1 - |tau+| when tau+ < 0
    if margin <= 0.0:
        raise RecipeDivergent(
            "W-family domination fails for tau_plus <= -1 (needs |tau_plus| < 1)"
        )
    s = 1.0 / (2.0 * l * margin)
    x = np.atleast_2d(np.asarray(domain_samples, dtype=float))
    _check_unit_halfball(x, critical_log=False)
    r = _radii(x)
    rmax = float(np.max(r))
    t = s * (rmax**2 + l * rmax)
    target = r**p.tau_plus
    for _ in range(_MAX_DOUBLINGS):
        pos = np.asarray(supersolution_W(p, s, t, l, x))
        res = np.asarray(supersolution_W_residual(p, s, t, l, x))
        interior = x[:, -1] > 0.0
        if np.all(pos[interior] > 0.0) and np.all(res >= target - 1e-12):
            return SupersolutionParams(s0=s, t0=t, l=l, family="W")
        t *= 2.0
    raise RecipeDivergent("doubling search for the W-family t did not certify")


def dual_bound_t(p: HardyParams, rhs_kind: str, rmax: float) -> float:
    """The slope t in the bound 0 <= w <= t x_N for the dual problems.

    For the constant source the conjugated problem is dominated by the V-like
    barrier ``t lam - s x_N |x|^{tau+ + 2}`` with ``s = -1/c2`` and residual
    exactly ``lam``; for the 1/x_N source the W family applies.
    """
    if rhs_kind == "one":
        c2 = hardy_symbol(p, p.tau_plus + 2.0)
        s = -1.0 / c2
        # positivity of x_N |x|^{tau+} (t - s |x|^2) needs t > s rmax^2
        return s * max(1.0, 1.5 * rmax**2)
    if rhs_kind == "one_over_xN":
        margin = 1.0 + min(p.tau_plus, 0.0)
        if margin <= 0.0:
            raise RecipeDivergent("no W-family bound for tau_plus <= -1")
        l = 1.0
        s = 1.0 / (2.0 * l * margin)
        return s * (rmax**2 + l * rmax) * 2.0
    raise ValueError(f"unknown rhs_kind {rhs_kind!r}")
