"""Exponents and constants of the boundary-singular Hardy operator.

The operator under study is ``-Laplace + beta/|x|^2`` on half-space-like
domains, with the potential singular at a boundary point (the origin).
Everything downstream is driven by the two characteristic exponents
``tau_minus <= tau_plus``, the roots of ``beta - tau*(tau + N) = 0``, and by
the Dirac weight ``c_beta`` carried by the singular kernel.

``c_beta`` is defined here as the exact limit of the surface flux of the
kernel pair across shrinking hemispheres (see :func:`hardylab.identities.
surface_flux_density`), which is what the distributional identity produces:

* ``sqrt(beta - beta0) * |S^{N-1}| / N``  for ``beta > beta0``,
* ``|S^{N-1}| / (2N)``                    at the critical ``beta = beta0``.

The critical branch is half the value sometimes quoted alongside the
non-critical formula; the flux of the log-corrected kernel carries no
factor 2, and the identity verifications in this package resolve the
discrepancy in favour of the flux (see ``tests/test_acceptance.py``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterBelowCritical


def sphere_area(N: int) -> float:
    """Surface measure |S^{N-1}| of the unit sphere in R^N."""
    if N < 1:
        raise ValueError(f"dimension must be >= 1, got {N}")
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)


@dataclass(frozen=True)
class HardyParams:
    """Derived constants for one (N, beta) pair.  Immutable value object."""

    N: int
    beta: float
    beta0: float
    sqrt_disc: float
    tau_minus: float
    tau_plus: float
    c_beta: float
    sphere: float  # |S^{N-1}|

    @property
    def critical(self) -> bool:
        """True on the log-corrected branch beta == -N^2/4."""
        return self.sqrt_disc == 0.0


def make_params(N: int, beta: float) -> HardyParams:
    """Build the exponent/constant bundle for dimension ``N`` and coefficient ``beta``.

    Raises ``ParameterBelowCritical`` for ``beta < -N^2/4``, where the
    characteristic exponents leave the real line.
    """
    if not isinstance(N, (int,)) or N < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {N!r}")
    beta = float(beta)
    beta0 = -0.25 * N * N
    if beta < beta0:
        raise ParameterBelowCritical(
            f"beta={beta} is below the critical value -N^2/4 = {beta0}"
        )
    sqrt_disc = math.sqrt(max(beta - beta0, 0.0))
    tau_minus = -0.5 * N - sqrt_disc
    tau_plus = -0.5 * N + sqrt_disc
    area = sphere_area(N)
    if sqrt_disc > 0.0:
        c_beta = sqrt_disc * area / N
    else:
        c_beta = area / (2.0 * N)
    return HardyParams(
        N=N,
        beta=beta,
        beta0=beta0,
        sqrt_disc=sqrt_disc,
        tau_minus=tau_minus,
        tau_plus=tau_plus,
        c_beta=c_beta,
        sphere=area,
    )


def hardy_symbol(p: HardyParams, tau: float) -> float:
    """Coefficient function ``beta - tau*(tau + N)``.

    This is the factor produced by applying the operator to the power family:
    ``(-Laplace + beta/|x|^2)(x_N |x|^tau) = hardy_symbol(tau) * x_N |x|^(tau-2)``.
    It vanishes exactly at ``tau_minus`` and ``tau_plus``.
    """
    return p.beta - tau * (tau + p.N)
