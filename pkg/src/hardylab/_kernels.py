"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Backend selection is controlled by the ``HARDY_NUMBA`` environment variable
at import time:

* unset or ``auto`` -- use numba when importable, else numpy;
* ``1`` / ``on``    -- require numba (ImportError if missing);
* ``0`` / ``off``   -- force the pure-numpy path.

Both paths are deterministic for a fixed input ordering: the numpy path
relies on numpy's pairwise summation, the numba path implements the same
blocked pairwise scheme explicitly.  Results between the two backends agree
to accumulation roundoff only (covered by a parity test).
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("HARDY_NUMBA", "auto").strip().lower()
_use_numba = False
if _flag in ("1", "on", "true", "yes"):
    from numba import njit  # noqa: F401  (hard requirement)

    _use_numba = True
elif _flag in ("0", "off", "false", "no"):
    _use_numba = False
else:
    try:
        from numba import njit  # noqa: F401

        _use_numba = True
    except ImportError:
        _use_numba = False


def backend_name() -> str:
    return "numba" if _use_numba else "numpy"


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def _np_halfspace_weight(points: np.ndarray, tau: float) -> np.ndarray:
    r = np.sqrt(np.sum(points * points, axis=1))
    return points[:, -1] * r**tau


def _np_radial_power(points: np.ndarray, tau: float) -> np.ndarray:
    r = np.sqrt(np.sum(points * points, axis=1))
    return r**tau


def _np_weighted_sum(values: np.ndarray, weights: np.ndarray) -> float:
    # numpy's reduction is pairwise for contiguous float64 input
    return float(np.sum(values * weights))


if _use_numba:
    from numba import njit

    @njit(fastmath=False)
    def _nb_halfspace_weight(points, tau):
        m, n = points.shape
        out = np.empty(m)
        for i in range(m):
            s = 0.0
            for j in range(n):
                s += points[i, j] * points[i, j]
            out[i] = points[i, n - 1] * np.sqrt(s) ** tau
        return out

    @njit(fastmath=False)
    def _nb_radial_power(points, tau):
        m, n = points.shape
        out = np.empty(m)
        for i in range(m):
            s = 0.0
            for j in range(n):
                s += points[i, j] * points[i, j]
            out[i] = np.sqrt(s) ** tau
        return out

    @njit(fastmath=False)
    def _nb_pairwise(prod, lo, hi):
        # blocked pairwise reduction, fixed order
        n = hi - lo
        if n <= 64:
            s = 0.0
            for i in range(lo, hi):
                s += prod[i]
            return s
        mid = lo + n // 2
        return _nb_pairwise(prod, lo, mid) + _nb_pairwise(prod, mid, hi)

    @njit(fastmath=False)
    def _nb_weighted_sum(values, weights):
        prod = values * weights
        return _nb_pairwise(prod, 0, prod.shape[0])

    def halfspace_weight(points: np.ndarray, tau: float) -> np.ndarray:
        return _nb_halfspace_weight(np.ascontiguousarray(points), float(tau))

    def radial_power(points: np.ndarray, tau: float) -> np.ndarray:
        return _nb_radial_power(np.ascontiguousarray(points), float(tau))

    def weighted_sum(values: np.ndarray, weights: np.ndarray) -> float:
        return float(
            _nb_weighted_sum(
                np.ascontiguousarray(values, dtype=np.float64),
                np.ascontiguousarray(weights, dtype=np.float64),
            )
        )

else:
    halfspace_weight = _np_halfspace_weight
    radial_power = _np_radial_power
    weighted_sum = _np_weighted_sum
