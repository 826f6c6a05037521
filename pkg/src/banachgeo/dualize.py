"""Facet enumeration for centrally symmetric polytopes given by vertices.

Brute force over all n-subsets of candidate points: each subset with an
invertible coordinate matrix determines a hyperplane {f . x = 1}; the
subset supports a facet exactly when every point lies on the near side.
Deliberately simple so it works identically in exact (Fraction) and
float arithmetic at desk scale (<= 64 points, dimension <= 4).
"""

from fractions import Fraction
from itertools import combinations

import numpy as np

from . import rational
from .errors import NumericallyIllConditioned


def enumerate_facets_float(V, tol):
    """Facet functionals of conv(V rows) as an array, float mode.

    Returns (D, incidence) with D (k, n) renormalized so that
    max_i D[j] . V[i] = 1 exactly, and incidence a list of index tuples.
    Raises NumericallyIllConditioned when distinct candidate facets are
    too close to separate at the working tolerance.
    """
    V = np.asarray(V, dtype=np.float64)
    m, n = V.shape
    subsets = np.array(list(combinations(range(m), n)), dtype=np.intp)
    A = V[subsets]  # (K, n, n)
    dets = np.linalg.det(A)
    scale = np.maximum(np.abs(A).reshape(len(A), -1).max(axis=1), 1.0) ** n
    nonsingular = np.abs(dets) > 1e-12 * scale
    if not nonsingular.any():
        return np.empty((0, n)), []
    rhs = np.ones((int(nonsingular.sum()), n, 1))
    F = np.linalg.solve(A[nonsingular], rhs)[:, :, 0]
    vals = F @ V.T
    supporting = (vals <= 1.0 + tol).all(axis=1)
    cands = F[supporting]
    if len(cands) == 0:
        return np.empty((0, n)), []

    # cluster duplicates coming from different subsets of one facet
    merge_tol = max(1e3 * tol, 1e-10)
    reps = []
    clusters = []
    order = np.lexsort(cands.T[::-1])
    for row in cands[order]:
        placed = False
        for ci, rep in enumerate(reps):
            if np.max(np.abs(row - rep)) <= merge_tol:
                clusters[ci].append(row)
                placed = True
                break
        if not placed:
            reps.append(row)
            clusters.append([row])
    for ci, members in enumerate(clusters):
        arr = np.array(members)
        diam = np.max(arr.max(axis=0) - arr.min(axis=0)) if len(arr) > 1 else 0.0
        if diam > merge_tol:
            raise NumericallyIllConditioned(
                "candidate facets cannot be separated at tol=%g" % tol
            )
        reps[ci] = arr.mean(axis=0)

    D = np.array(reps)
    # pin every facet value to exactly 1 at its touching vertices
    D /= (D @ V.T).max(axis=1)[:, None]
    inc_tol = 2.0 * tol
    incidence = []
    keep = []
    vals = D @ V.T
    for j in range(len(D)):
        inc = tuple(int(i) for i in np.nonzero(vals[j] >= 1.0 - inc_tol)[0])
        if len(inc) < n:
            continue
        if np.linalg.matrix_rank(V[list(inc)], tol=1e-9) < n:
            continue
        keep.append(j)
        incidence.append(inc)
    return D[keep], incidence


def enumerate_facets_exact(vertices):
    """Exact-mode facet enumeration; vertices is a list of Fraction tuples."""
    m = len(vertices)
    n = len(vertices[0])
    one = [Fraction(1)] * n
    found = {}
    for subset in combinations(range(m), n):
        A = [vertices[i] for i in subset]
        f = rational.solve(A, one)
        if f is None:
            continue
        if f in found:
            continue
        if all(rational.dot(f, v) <= 1 for v in vertices):
            found[f] = None
    duals = []
    incidence = []
    for f in found:
        inc = tuple(i for i, v in enumerate(vertices) if rational.dot(f, v) == 1)
        if len(inc) < n:
            continue
        if rational.rank([vertices[i] for i in inc]) < n:
            continue
        duals.append(f)
        incidence.append(inc)
    return duals, incidence
