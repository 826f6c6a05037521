"""Slices of polyhedral unit spheres and exact scans along their edges.

Every test this package certifies on a sphere slice (support-functional
margins, approximate-orthogonality margins) is piecewise linear along a
segment that stays inside one facet. The scanners below subdivide a
segment at every parameter where any relevant linear form vanishes, two
of them cross, or two of them sum to zero; between those parameters the
margin is linear, so evaluating the breakpoints gives the exact minimum
over the segment.
"""

from dataclasses import dataclass

import numpy as np


def nullspace_basis(c):
    """Orthonormal basis (columns) of the hyperplane {z : c.z = 0}."""
    c = np.asarray(c, dtype=np.float64)
    _, _, vh = np.linalg.svd(c[None, :])
    return vh[1:].T


def unit_norm(space_norm, v):
    n = space_norm(v)
    return v / n


def slice_polygon(D, c, tol):
    """Ordered vertices of {z : D z <= 1, c.z = 0} for 3-dimensional D.

    Slice vertices sit on pairs of facets; solve every pair against the
    kernel constraint and keep the feasible solutions, ordered by angle
    in an orthonormal basis of ker c.
    """
    D = np.asarray(D, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    k = len(D)
    ii, jj = np.triu_indices(k, 1)
    A = np.empty((len(ii), 3, 3))
    A[:, 0] = D[ii]
    A[:, 1] = D[jj]
    A[:, 2] = c
    dets = np.linalg.det(A)
    scale = np.maximum(np.abs(A).reshape(len(A), -1).max(axis=1) ** 3, 1e-12)
    ok = np.abs(dets) > 1e-12 * scale
    if not ok.any():
        return np.empty((0, 3))
    rhs = np.broadcast_to(np.array([1.0, 1.0, 0.0]), (int(ok.sum()), 3))
    Z = np.linalg.solve(A[ok], rhs[..., None])[:, :, 0]
    feasible = (Z @ D.T).max(axis=1) <= 1.0 + max(10 * tol, 1e-9)
    pts = Z[feasible]
    if len(pts) == 0:
        return np.empty((0, 3))
    keep = []
    for row in pts:
        if not any(np.max(np.abs(row - other)) <= max(100 * tol, 1e-7) for other in keep):
            keep.append(row)
    pts = np.array(keep)
    B = nullspace_basis(c)
    uv = pts @ B
    angles = np.arctan2(uv[:, 1], uv[:, 0])
    return pts[np.argsort(angles)]


def kernel_sphere_points_2d(space_norm, f):
    """The two antipodal unit-sphere points of ker f in dimension 2."""
    f = np.asarray(f, dtype=np.float64)
    d = np.array([-f[1], f[0]])
    d = unit_norm(space_norm, d)
    return np.vstack([d, -d])


def face_test_margin_fn(G, H, eps):
    """Margin of the test "some functional in the face conv(G) is
    eps-small on w relative to the norm max(H w)"; positive passes.

    G rows span the support face of a fixed point; H rows are the full
    symmetric dual-vertex set of the codomain norm.
    """
    G = np.atleast_2d(np.asarray(G, dtype=np.float64))
    H = np.atleast_2d(np.asarray(H, dtype=np.float64))

    def fn(W):
        W = np.atleast_2d(W)
        vg = W @ G.T
        lo = vg.min(axis=1)
        hi = vg.max(axis=1)
        minabs = np.maximum(np.maximum(lo, -hi), 0.0)
        nrm = (W @ H.T).max(axis=1)
        return eps * nrm - minabs

    return fn


def min_support_fn(G):
    """min over the face conv(G) of |f(w)| as a batched function of w."""
    G = np.atleast_2d(np.asarray(G, dtype=np.float64))

    def fn(W):
        W = np.atleast_2d(W)
        vg = W @ G.T
        lo = vg.min(axis=1)
        hi = vg.max(axis=1)
        return np.maximum(np.maximum(lo, -hi), 0.0)

    return fn


def _crossings(FA, FB, ts, zeros=True, pairs=True):
    FA = np.atleast_1d(FA)
    FB = np.atleast_1d(FB)
    q = len(FA)
    if zeros:
        for i in range(q):
            den = FA[i] - FB[i]
            if den != 0.0:
                t = FA[i] / den
                if 0.0 < t < 1.0:
                    ts.add(float(t))
    if pairs:
        for i in range(q):
            for j in range(i + 1, q):
                for sgn in (1.0, -1.0):
                    a = FA[i] + sgn * FA[j]
                    b = FB[i] + sgn * FB[j]
                    den = a - b
                    if den != 0.0:
                        t = a / den
                        if 0.0 < t < 1.0:
                            ts.add(float(t))


def segment_breakpoints(wa, wb, form_groups, zero_groups=()):
    """Sorted parameters in [0, 1] isolating the linear pieces.

    form_groups: matrices whose rows' zeros, pairwise crossings and
    pairwise sign-flips all subdivide; zero_groups: rows contributing
    zeros only.
    """
    ts = {0.0, 1.0}
    for M in form_groups:
        M = np.atleast_2d(np.asarray(M, dtype=np.float64))
        _crossings(M @ wa, M @ wb, ts, zeros=True, pairs=True)
    for M in zero_groups:
        M = np.atleast_2d(np.asarray(M, dtype=np.float64))
        _crossings(M @ wa, M @ wb, ts, zeros=True, pairs=False)
    return np.array(sorted(ts))


@dataclass
class SegmentScan:
    min_margin: float
    argmin: np.ndarray
    evals: int


def scan_min_margin(wa, wb, margin_fn, form_groups, zero_groups=()):
    """Exact minimum of a piecewise-linear margin over the segment [wa, wb]."""
    wa = np.asarray(wa, dtype=np.float64)
    wb = np.asarray(wb, dtype=np.float64)
    ts = segment_breakpoints(wa, wb, form_groups, zero_groups)
    W = wa[None, :] + ts[:, None] * (wb - wa)[None, :]
    margins = margin_fn(W)
    i = int(np.argmin(margins))
    return SegmentScan(float(margins[i]), W[i], len(ts))


def scan_min_of_max_violation(wa, wb, fn_a, fn_b, form_groups):
    """Exact minimum over the segment of max(-m_a(w), -m_b(w)).

    Positive result means every point of the segment fails at least one
    of the two tests. Subdivides at the union of both functions' pieces,
    then adds the crossing of (m_a - m_b) inside each piece.
    """
    wa = np.asarray(wa, dtype=np.float64)
    wb = np.asarray(wb, dtype=np.float64)
    ts = list(segment_breakpoints(wa, wb, form_groups))
    W = wa[None, :] + np.array(ts)[:, None] * (wb - wa)[None, :]
    ma = fn_a(W)
    mb = fn_b(W)
    extra = []
    diff = ma - mb
    for i in range(len(ts) - 1):
        if diff[i] * diff[i + 1] < 0.0:
            t = ts[i] + (ts[i + 1] - ts[i]) * diff[i] / (diff[i] - diff[i + 1])
            extra.append(t)
    if extra:
        W2 = wa[None, :] + np.array(extra)[:, None] * (wb - wa)[None, :]
        ma = np.concatenate([ma, fn_a(W2)])
        mb = np.concatenate([mb, fn_b(W2)])
        W = np.vstack([W, W2])
    viol = np.maximum(-ma, -mb)
    i = int(np.argmin(viol))
    return SegmentScan(float(viol[i]), W[i], len(W))


def fibonacci_sphere(count):
    """Deterministic quasi-uniform directions on the 2-sphere."""
    i = np.arange(count, dtype=np.float64)
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * i + 1.0) / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    theta = 2.0 * np.pi * i / phi
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


def cross_product_directions(rows):
    """Normalized pairwise cross products of the given 3-vectors."""
    rows = np.asarray(rows, dtype=np.float64)
    out = []
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            c = np.cross(rows[i], rows[j])
            n = np.linalg.norm(c)
            if n > 1e-12:
                out.append(c / n)
    return np.array(out) if out else np.empty((0, 3))


def dedupe_directions(rows, decimals=7):
    """Drop repeated directions (and antipodes), keeping first occurrence.

    Bucket-based: rows are sign-canonicalized, rounded and hashed, so two
    near-identical directions straddling a rounding boundary may both
    survive; that only costs a retried candidate.
    """
    rows = np.asarray(rows, dtype=np.float64)
    norms = np.linalg.norm(rows, axis=1)
    ok = norms > 1e-12
    unit = rows[ok] / norms[ok, None]
    lead = np.argmax(np.abs(unit) > 1e-9, axis=1)
    signs = np.sign(unit[np.arange(len(unit)), lead])
    unit = unit * signs[:, None]
    keys = np.round(unit, decimals)
    _, first = np.unique(keys, axis=0, return_index=True)
    return unit[np.sort(first)]
