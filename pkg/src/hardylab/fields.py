"""Closed-form scalar fields with exact first and second derivatives.

Every explicit function used by the identity checks is assembled here from a
small kit: radial profiles ``g(|x|)`` with hand-coded ``g'``/``g''``, the
half-space kernels ``x_N g(|x|)`` and ``x_N^2 g(|x|)``, affine factors, and
product/sum combinators.  Nothing is differentiated numerically; finite
differences only appear in the test suite as an independent oracle.

All evaluators are vectorized over points: ``x`` may be a single point of
shape ``(N,)`` or a batch of shape ``(M, N)``.  The last coordinate is the
half-space height ``x_N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .errors import EvalAtSingularity, LogBranchOutOfRange
from .params import HardyParams

Array = np.ndarray


# ---------------------------------------------------------------------------
# cutoff eta0 and derived cutoffs
# ---------------------------------------------------------------------------

def cutoff_eta0(r):
    """C^2 cutoff: 1 on [0,1], 0 on [2,inf), quintic Hermite blend on [1,2]."""
    r = np.asarray(r, dtype=float)
    u = np.clip(r - 1.0, 0.0, 1.0)
    out = 1.0 - u**3 * (10.0 - 15.0 * u + 6.0 * u * u)
    return out if out.ndim else float(out)


def cutoff_eta0_d1(r):
    """First derivative of :func:`cutoff_eta0`."""
    r = np.asarray(r, dtype=float)
    u = r - 1.0
    inside = (u > 0.0) & (u < 1.0)
    u = np.where(inside, u, 0.0)
    out = np.where(inside, -30.0 * u * u * (1.0 - u) ** 2, 0.0)
    return out if out.ndim else float(out)


def cutoff_eta0_d2(r):
    """Second derivative of :func:`cutoff_eta0`."""
    r = np.asarray(r, dtype=float)
    u = r - 1.0
    inside = (u > 0.0) & (u < 1.0)
    u = np.where(inside, u, 0.0)
    out = np.where(inside, -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u), 0.0)
    return out if out.ndim else float(out)


def cutoff_eta_r0(r0: float, r):
    """Cutoff equal to 1 on [0, r0/2] and 0 beyond r0."""
    return cutoff_eta0(np.asarray(r, dtype=float) * (2.0 / r0))


def cutoff_eta_n(n: int, r):
    """Complementary cutoff vanishing near 0: 1 - eta0(n r)."""
    return 1.0 - cutoff_eta0(n * np.asarray(r, dtype=float))


# ---------------------------------------------------------------------------
# radial profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialProfile:
    """A function of r = |x| with exact first and second derivatives."""

    g: Callable[[Array], Array]
    dg: Callable[[Array], Array]
    d2g: Callable[[Array], Array]

    def __call__(self, r):
        return self.g(np.asarray(r, dtype=float))


def power_profile(tau: float) -> RadialProfile:
    """g(r) = r^tau."""
    return RadialProfile(
        g=lambda r: r**tau,
        dg=lambda r: tau * r ** (tau - 1.0),
        d2g=lambda r: tau * (tau - 1.0) * r ** (tau - 2.0),
    )


def neglog_power_profile(tau: float) -> RadialProfile:
    """g(r) = -r^tau ln r, positive for r < 1."""

    def g(r):
        return -(r**tau) * np.log(r)

    def dg(r):
        return -r ** (tau - 1.0) * (tau * np.log(r) + 1.0)

    def d2g(r):
        return -r ** (tau - 2.0) * (tau * (tau - 1.0) * np.log(r) + 2.0 * tau - 1.0)

    return RadialProfile(g, dg, d2g)


def sqrt_neglog_power_profile(tau: float) -> RadialProfile:
    """g(r) = r^tau (-ln r)^(1/2), for the critical-branch barrier family."""

    def g(r):
        return r**tau * np.sqrt(-np.log(r))

    def dg(r):
        L = -np.log(r)
        return r ** (tau - 1.0) * (tau * np.sqrt(L) - 0.5 / np.sqrt(L))

    def d2g(r):
        L = -np.log(r)
        s = np.sqrt(L)
        return r ** (tau - 2.0) * (
            tau * (tau - 1.0) * s - (tau - 0.5) / s - 0.25 / (L * s)
        )

    return RadialProfile(g, dg, d2g)


def bump_profile(scale: float) -> RadialProfile:
    """g(r) = eta0(scale * r): flat equal to 1 near 0, support r <= 2/scale."""
    return RadialProfile(
        g=lambda r: cutoff_eta0(scale * r),
        dg=lambda r: scale * cutoff_eta0_d1(scale * r),
        d2g=lambda r: scale * scale * cutoff_eta0_d2(scale * r),
    )


def scaled_profile(profile: RadialProfile, factor: float) -> RadialProfile:
    return RadialProfile(
        g=lambda r: factor * profile.g(r),
        dg=lambda r: factor * profile.dg(r),
        d2g=lambda r: factor * profile.d2g(r),
    )


# ---------------------------------------------------------------------------
# scalar fields
# ---------------------------------------------------------------------------

def _as_batch(x) -> tuple[Array, bool]:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return x[None, :], True
    return x, False


@dataclass(frozen=True)
class ScalarField:
    """Scalar field with exact gradient and Hessian callbacks.

    ``value`` maps (M, N) -> (M,); ``gradient`` maps (M, N) -> (M, N);
    ``hessian`` maps (M, N) -> (M, N, N).  Single points of shape (N,) are
    accepted everywhere and returned unbatched.
    """

    value_batch: Callable[[Array], Array]
    gradient_batch: Callable[[Array], Array]
    hessian_batch: Callable[[Array], Array]

    def value(self, x):
        xb, single = _as_batch(x)
        v = self.value_batch(xb)
        return float(v[0]) if single else v

    def gradient(self, x):
        xb, single = _as_batch(x)
        g = self.gradient_batch(xb)
        return g[0] if single else g

    def hessian(self, x):
        xb, single = _as_batch(x)
        h = self.hessian_batch(xb)
        return h[0] if single else h

    def laplacian(self, x):
        xb, single = _as_batch(x)
        lap = np.trace(self.hessian_batch(xb), axis1=-2, axis2=-1)
        return float(lap[0]) if single else lap


def _radPQ(x: Array):
    """Radius, unit direction and projector helpers for batch x of shape (M,N)."""
    r = np.sqrt(np.sum(x * x, axis=-1))
    xhat = x / r[:, None]
    return r, xhat


def radial_field(profile: RadialProfile) -> ScalarField:
    """u(x) = g(|x|); requires |x| > 0 at evaluation points."""

    def value(x):
        r = np.sqrt(np.sum(x * x, axis=-1))
        return profile.g(r)

    def gradient(x):
        r, xhat = _radPQ(x)
        return profile.dg(r)[:, None] * xhat

    def hessian(x):
        r, xhat = _radPQ(x)
        M, N = x.shape
        eye = np.eye(N)
        outer = np.einsum("mi,mj->mij", xhat, xhat)
        d1 = profile.dg(r) / r
        d2 = profile.d2g(r)
        return d2[:, None, None] * outer + d1[:, None, None] * (eye[None] - outer)

    return ScalarField(value, gradient, hessian)


def xn_radial_field(profile: RadialProfile) -> ScalarField:
    """u(x) = x_N * g(|x|): the half-space kernel family."""

    def value(x):
        r = np.sqrt(np.sum(x * x, axis=-1))
        return x[:, -1] * profile.g(r)

    def gradient(x):
        r, xhat = _radPQ(x)
        g = profile.g(r)
        d1 = profile.dg(r)
        grad = x[:, -1][:, None] * d1[:, None] * xhat
        grad[:, -1] += g
        return grad

    def hessian(x):
        r, xhat = _radPQ(x)
        M, N = x.shape
        eye = np.eye(N)
        outer = np.einsum("mi,mj->mij", xhat, xhat)
        d1 = profile.dg(r)
        d2 = profile.d2g(r)
        H = x[:, -1][:, None, None] * (
            d2[:, None, None] * outer + (d1 / r)[:, None, None] * (eye[None] - outer)
        )
        H[:, -1, :] += d1[:, None] * xhat
        H[:, :, -1] += d1[:, None] * xhat
        return H

    return ScalarField(value, gradient, hessian)


def xn2_radial_field(profile: RadialProfile) -> ScalarField:
    """u(x) = x_N^2 * g(|x|): the quadratic barrier family."""

    def value(x):
        r = np.sqrt(np.sum(x * x, axis=-1))
        return x[:, -1] ** 2 * profile.g(r)

    def gradient(x):
        r, xhat = _radPQ(x)
        g = profile.g(r)
        d1 = profile.dg(r)
        xn = x[:, -1]
        grad = (xn * xn)[:, None] * d1[:, None] * xhat
        grad[:, -1] += 2.0 * xn * g
        return grad

    def hessian(x):
        r, xhat = _radPQ(x)
        M, N = x.shape
        eye = np.eye(N)
        outer = np.einsum("mi,mj->mij", xhat, xhat)
        d1 = profile.dg(r)
        d2 = profile.d2g(r)
        xn = x[:, -1]
        H = (xn * xn)[:, None, None] * (
            d2[:, None, None] * outer + (d1 / r)[:, None, None] * (eye[None] - outer)
        )
        cross = (2.0 * xn)[:, None] * d1[:, None] * xhat
        H[:, -1, :] += cross
        H[:, :, -1] += cross
        H[:, -1, -1] += 2.0 * profile.g(r)
        return H

    return ScalarField(value, gradient, hessian)


def shifted_radial_field(profile: RadialProfile, center) -> ScalarField:
    """u(x) = g(|x - center|)."""
    center = np.asarray(center, dtype=float)
    base = radial_field(profile)
    return ScalarField(
        value_batch=lambda x: base.value_batch(x - center),
        gradient_batch=lambda x: base.gradient_batch(x - center),
        hessian_batch=lambda x: base.hessian_batch(x - center),
    )


def affine_field(c0: float, cvec) -> ScalarField:
    """u(x) = c0 + cvec . x."""
    cvec = np.asarray(cvec, dtype=float)

    def value(x):
        return c0 + x @ cvec

    def gradient(x):
        return np.broadcast_to(cvec, x.shape).copy()

    def hessian(x):
        M, N = x.shape
        return np.zeros((M, N, N))

    return ScalarField(value, gradient, hessian)


def coordinate_field(index: int) -> ScalarField:
    """u(x) = x_index."""

    def value(x):
        return x[:, index].copy()

    def gradient(x):
        g = np.zeros_like(x)
        g[:, index] = 1.0
        return g

    def hessian(x):
        M, N = x.shape
        return np.zeros((M, N, N))

    return ScalarField(value, gradient, hessian)


def const_field(c: float) -> ScalarField:
    def value(x):
        return np.full(x.shape[0], float(c))

    def gradient(x):
        return np.zeros_like(x)

    def hessian(x):
        M, N = x.shape
        return np.zeros((M, N, N))

    return ScalarField(value, gradient, hessian)


def sum_field(f1: ScalarField, f2: ScalarField, a: float = 1.0, b: float = 1.0) -> ScalarField:
    return ScalarField(
        value_batch=lambda x: a * f1.value_batch(x) + b * f2.value_batch(x),
        gradient_batch=lambda x: a * f1.gradient_batch(x) + b * f2.gradient_batch(x),
        hessian_batch=lambda x: a * f1.hessian_batch(x) + b * f2.hessian_batch(x),
    )


def scale_field(f: ScalarField, a: float) -> ScalarField:
    return ScalarField(
        value_batch=lambda x: a * f.value_batch(x),
        gradient_batch=lambda x: a * f.gradient_batch(x),
        hessian_batch=lambda x: a * f.hessian_batch(x),
    )


def product_field(f1: ScalarField, f2: ScalarField) -> ScalarField:
    """Pointwise product with exact product-rule derivatives."""

    def value(x):
        return f1.value_batch(x) * f2.value_batch(x)

    def gradient(x):
        v1 = f1.value_batch(x)[:, None]
        v2 = f2.value_batch(x)[:, None]
        return v1 * f2.gradient_batch(x) + v2 * f1.gradient_batch(x)

    def hessian(x):
        v1 = f1.value_batch(x)[:, None, None]
        v2 = f2.value_batch(x)[:, None, None]
        g1 = f1.gradient_batch(x)
        g2 = f2.gradient_batch(x)
        cross = np.einsum("mi,mj->mij", g1, g2)
        return (
            v1 * f2.hessian_batch(x)
            + v2 * f1.hessian_batch(x)
            + cross
            + np.transpose(cross, (0, 2, 1))
        )

    return ScalarField(value, gradient, hessian)


# ---------------------------------------------------------------------------
# the two explicit kernels
# ---------------------------------------------------------------------------

def _check_point(p: HardyParams, x, need_positive_xn: bool = False) -> Array:
    x = np.asarray(x, dtype=float)
    if x.shape != (p.N,):
        raise ValueError(f"expected a point of shape ({p.N},), got {x.shape}")
    r = float(np.sqrt(np.sum(x * x)))
    if r == 0.0:
        raise EvalAtSingularity("singular kernel evaluated at the origin")
    if x[-1] < 0.0:
        raise ValueError("points must lie in the closed upper half-space (x_N >= 0)")
    if need_positive_xn and x[-1] == 0.0:
        raise ValueError("operator evaluation requires x_N > 0")
    return x


def lambda_small_values(p: HardyParams, x: Array) -> Array:
    """Vectorized regular kernel x_N |x|^tau_plus (no validation)."""
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(x * x, axis=-1))
    return x[..., -1] * r**p.tau_plus


def lambda_fund_values(p: HardyParams, x: Array) -> Array:
    """Vectorized singular kernel (log-corrected on the critical branch)."""
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(x * x, axis=-1))
    if p.critical:
        return -x[..., -1] * r**p.tau_minus * np.log(r)
    return x[..., -1] * r**p.tau_minus


def lambda_small(p: HardyParams, x) -> float:
    """Regular kernel lambda(x) = x_N |x|^tau_plus at a single point."""
    x = _check_point(p, x)
    return float(lambda_small_values(p, x))


def lambda_fund(p: HardyParams, x) -> float:
    """Singular kernel at a single point.

    On the critical branch the kernel is ``-x_N |x|^tau_minus ln|x|`` and is
    only positive (and only used) inside the unit half-ball; evaluation at
    |x| >= 1 raises ``LogBranchOutOfRange``.
    """
    x = _check_point(p, x)
    if p.critical and float(np.sqrt(np.sum(x * x))) >= 1.0:
        raise LogBranchOutOfRange(
            "critical-branch kernel requires |x| < 1 so the log factor is positive"
        )
    return float(lambda_fund_values(p, x))


def lambda_small_field(p: HardyParams) -> ScalarField:
    return xn_radial_field(power_profile(p.tau_plus))


def lambda_fund_field(p: HardyParams) -> ScalarField:
    if p.critical:
        return xn_radial_field(neglog_power_profile(p.tau_minus))
    return xn_radial_field(power_profile(p.tau_minus))


# ---------------------------------------------------------------------------
# operator applications
# ---------------------------------------------------------------------------

def apply_L_beta(p: HardyParams, u: ScalarField, x) -> float:
    """(-Laplace + beta/|x|^2) u at a point with x_N > 0, |x| > 0."""
    x = _check_point(p, x, need_positive_xn=True)
    r2 = float(np.sum(x * x))
    return -u.laplacian(x) + p.beta * u.value(x) / r2


def apply_L_beta_batch(p: HardyParams, u: ScalarField, x: Array) -> Array:
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    return -u.laplacian(x) + p.beta * u.value_batch(x) / r2


def apply_L_beta_star(p: HardyParams, zeta: ScalarField, x) -> float:
    """Conjugated operator at a point with x_N > 0, |x| > 0.

    This is the operator obtained by conjugating with the regular kernel:
    ``-Laplace - (2 tau_plus / |x|^2) x . grad - (2 / x_N) d/dx_N``.
    """
    x = _check_point(p, x, need_positive_xn=True)
    return float(apply_L_beta_star_batch(p, zeta, x[None, :])[0])


def apply_L_beta_star_batch(p: HardyParams, zeta: ScalarField, x: Array) -> Array:
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    grad = zeta.gradient_batch(x)
    lap = np.trace(zeta.hessian_batch(x), axis1=-2, axis2=-1)
    radial = np.sum(x * grad, axis=-1)
    return -lap - 2.0 * p.tau_plus * radial / r2 - 2.0 * grad[:, -1] / x[:, -1]


def lstar_radial(p: HardyParams, profile: RadialProfile, r) -> Array:
    """Conjugated operator on a purely radial function g(|x|).

    Closed form ``-g'' - (1 + 2 sqrt(beta - beta0)) g' / r``; well defined up
    to the flat boundary since the drift term's x_N cancels.
    """
    r = np.asarray(r, dtype=float)
    return -profile.d2g(r) - (1.0 + 2.0 * p.sqrt_disc) * profile.dg(r) / r


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Compactly supported test function with closed-form derivatives.

    ``field`` is the function itself.  For the boundary-vanishing family
    (xi = x_N * h) the radial part of the ratio xi / x_N is retained in
    ``ratio_profile`` when it is purely radial, so the conjugated operator
    can be evaluated without dividing by x_N.
    """

    field: ScalarField
    support_radius: float
    origin_value: float
    origin_normal_derivative: float
    vanishes_on_flat: bool
    ratio_profile: RadialProfile | None = None
    ratio_field: ScalarField | None = dc_field(default=None)

    def value(self, x):
        return self.field.value(x)


def zeta_bump(dim: int, rho: float, affine: ScalarField | None = None) -> TestFunction:
    """Smooth-up-to-boundary factor: eta0(2|x|/rho) times an optional affine factor.

    Flat (identically its center value) for |x| <= rho/2 and supported in
    |x| <= rho.
    """
    prof = bump_profile(2.0 / rho)
    f: ScalarField = radial_field(prof)
    origin = np.zeros((1, dim))
    origin_value = 1.0
    origin_dn = 0.0
    if affine is not None:
        f = product_field(f, affine)
        origin_value = float(affine.value_batch(origin)[0])
        origin_dn = float(affine.gradient_batch(origin)[0, -1])
    return TestFunction(
        field=f,
        support_radius=rho,
        origin_value=origin_value,
        origin_normal_derivative=origin_dn,
        vanishes_on_flat=False,
        ratio_profile=prof if affine is None else None,
    )


def xi_bump(p_dim: int, rho: float, affine: ScalarField | None = None) -> TestFunction:
    """Boundary-vanishing test function xi = x_N * eta0(2|x|/rho) (* affine).

    The normal derivative at the origin equals the ratio's origin value.
    """
    prof = bump_profile(2.0 / rho)
    ratio: ScalarField = radial_field(prof)
    ratio_profile: RadialProfile | None = prof
    dn0 = 1.0
    if affine is not None:
        ratio = product_field(ratio, affine)
        ratio_profile = None
        dn0 = float(affine.value_batch(np.zeros((1, p_dim)))[0])
    fld = product_field(coordinate_field(p_dim - 1), ratio)
    return TestFunction(
        field=fld,
        support_radius=rho,
        origin_value=0.0,
        origin_normal_derivative=dn0,
        vanishes_on_flat=True,
        ratio_profile=ratio_profile,
        ratio_field=ratio,
    )
