import math

import numpy as np
import pytest

from banachgeo import spaces


@pytest.fixture(scope="session")
def octagon():
    return spaces.preset_space("regular_2n_gon", 4)


@pytest.fixture(scope="session")
def hexagon():
    return spaces.preset_space("regular_2n_gon", 3)


@pytest.fixture(scope="session")
def cube():
    return spaces.preset_space("linf", 3)


@pytest.fixture(scope="session")
def cross3():
    return spaces.preset_space("l1", 3)


@pytest.fixture(scope="session")
def prism():
    return spaces.preset_space("octagonal_prism")


@pytest.fixture()
def rng():
    return np.random.default_rng(20240601)


def grid_min_norm_on_line(space, x, y, lam_max=4.0, points=20001):
    """Oracle: dense-grid minimum of ||x + t*y|| over [-lam_max, lam_max]."""
    lams = np.linspace(-lam_max, lam_max, points)
    best = math.inf
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for t in lams:
        best = min(best, spaces.norm(space, x + t * y))
    return best


def grid_definitional_ok(space, x, y, eps, lam_max=6.0, points=120001):
    """Oracle: the deficit inequality on a dense lambda grid."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = spaces.norm(space, x)
    ny = spaces.norm(space, y)
    lams = np.linspace(-lam_max, lam_max, points)
    worst = 0.0
    for t in lams:
        nz = spaces.norm(space, x + t * y)
        worst = min(worst, nz * nz - nx * nx + 2.0 * eps * nx * abs(t) * ny)
    return worst


def sphere_grid_max_functional(space, f, g, count=200_000, seed=0):
    """Oracle for the screening constants: max |f(z)| over ker g
    intersected with the unit sphere, by dense random sampling."""
    from banachgeo import geometry

    rng = np.random.default_rng(seed)
    B = geometry.nullspace_basis(np.asarray(g, dtype=float))
    Z = rng.normal(size=(count, B.shape[1])) @ B.T
    f = np.asarray(f, dtype=float)
    if space.kind == "polyhedral":
        norms = (Z @ space.D.T).max(axis=1)
    else:
        norms = (np.abs(Z) ** space.p).sum(axis=1) ** (1.0 / space.p)
    ok = norms > 1e-12
    return float((np.abs(Z[ok] @ f) / norms[ok]).max())
