"""Seeded random generators for spaces, sphere points and orthogonal pairs."""

import math

import numpy as np

from . import geometry, spaces
from .errors import UnsupportedSpace


def random_polyhedral_space(dim, vertex_pairs, rng, tol=spaces.DEFAULT_TOL):
    """Random symmetric polytope ball with 2*vertex_pairs vertices.

    Points are drawn on the Euclidean sphere, so every input point is an
    extreme point of the hull.
    """
    while True:
        pts = rng.normal(size=(vertex_pairs, dim))
        norms = np.linalg.norm(pts, axis=1)
        if (norms < 1e-6).any():
            continue
        pts /= norms[:, None]
        if np.linalg.matrix_rank(pts, tol=1e-9) < dim:
            continue
        # reject nearly parallel pairs; they make needle facets
        unit = pts
        gram = np.abs(unit @ unit.T) - np.eye(vertex_pairs)
        if gram.max() > 1.0 - 1e-3:
            continue
        return spaces.build_polyhedral(pts, mode="float", tol=tol)


def random_sphere_point(space, rng):
    while True:
        x = rng.normal(size=space.dim)
        n = spaces.norm(space, x)
        if n > 1e-9:
            return x / n


def random_bj_orthogonal_pair(space, rng):
    """A pair (x, y) of unit vectors with x BJ-orthogonal to y.

    Picks a supporting functional f at a random x and a random unit
    kernel vector of f; f(y) = 0 certifies orthogonality.
    """
    x = random_sphere_point(space, rng)
    ss = spaces.support_set(space, x)
    f = ss.extremes[int(rng.integers(0, len(ss.extremes)))].array
    B = geometry.nullspace_basis(f)
    while True:
        y = B @ rng.normal(size=B.shape[1])
        n = spaces.norm(space, y)
        if n > 1e-9:
            return x, y / n


def random_operator(domain, codomain, rng):
    from .operators import Operator

    M = rng.normal(size=(codomain.dim, domain.dim))
    return Operator(M, domain, codomain)


def random_scaled_signed_permutation(n, rng, lo=0.5, hi=2.5):
    perm = rng.permutation(n)
    signs = rng.choice([-1.0, 1.0], size=n)
    M = np.zeros((n, n))
    for i, j in enumerate(perm):
        M[j, i] = signs[i]
    return float(rng.uniform(lo, hi)) * M


def dihedral_element(space, j, reflect=False, scale=1.0):
    """Scaled symmetry of a regular polygon ball: rotation by j*pi/n,
    optionally composed with the x-axis reflection."""
    from .operators import Operator

    preset = space.preset or ""
    if not preset.startswith("regular_2n_gon("):
        raise UnsupportedSpace("dihedral elements need a regular polygon preset")
    n = len(space.vertices) // 2
    th = j * math.pi / n
    c, s = math.cos(th), math.sin(th)
    R = np.array([[c, -s], [s, c]])
    if reflect:
        R = R @ np.array([[1.0, 0.0], [0.0, -1.0]])
    return Operator(scale * R, space, space)
