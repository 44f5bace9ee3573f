"""Shared fixtures and independent numerical oracles for the test suite.

The finite-difference helpers here are deliberately primitive (central
differences, optionally Richardson-improved); they exist so the closed-form
derivatives and operator formulas in the package are checked against
something that shares none of their code paths.
"""

import numpy as np
import pytest


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)


def fd_gradient(field, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (field.value(x + e) - field.value(x - e)) / (2.0 * h)
    return g


def fd_laplacian(field, x, h=1e-4):
    x = np.asarray(x, dtype=float)
    s = 0.0
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        s += (field.value(x + e) - 2.0 * field.value(x) + field.value(x - e)) / h**2
    return s


def fd_laplacian_richardson(field, x, h=1e-4):
    """Second-order Richardson combination of two central Laplacians."""
    coarse = fd_laplacian(field, x, h)
    fine = fd_laplacian(field, x, 0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def fd_apply_operator(beta, field, x, h=1e-4):
    """(-Laplace + beta/|x|^2) u by finite differences only."""
    x = np.asarray(x, dtype=float)
    return -fd_laplacian(field, x, h) + beta * field.value(x) / float(np.sum(x * x))


def halfball_samples(rng, N, count, rmin=0.02, rmax=0.95, xn_min=1e-3):
    """Random points in the upper unit half-ball, bounded away from the origin."""
    pts = []
    while len(pts) < count:
        x = rng.uniform(-rmax, rmax, size=N)
        x[-1] = rng.uniform(xn_min, rmax)
        r = float(np.linalg.norm(x))
        if rmin <= r <= rmax:
            pts.append(x)
    return np.array(pts)
