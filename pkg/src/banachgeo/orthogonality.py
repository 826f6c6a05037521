"""Birkhoff-James orthogonality, its approximate version, and hyperspace
containment inside intersections of approximate-orthogonality sets.

Two independent decision procedures are provided for the approximate
test and cross-validated in the test suite:

* `is_eps_orthogonal` — the support-functional characterization: some
  f in the face J(x) has |f(y)| <= eps*||y||. Exact over the face
  because f -> f(y) is linear.
* `is_eps_orthogonal_definitional` — direct minimization of the deficit
  ||x + t*y||^2 - ||x||^2 + 2*eps*||x||*|t|*||y|| over t.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import geometry, kernels, rational, spaces
from .errors import (
    BadEpsilon,
    DependentFunctionals,
    UnsupportedDimension,
    UnsupportedSpace,
    ZeroVector,
)


@dataclass
class OrthoConfig:
    epsilon: float = 0.0
    tol: float = spaces.DEFAULT_TOL
    bracket_factor: float = 2.0
    grid: int = 2**20
    search_normals: int = 10_000

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise BadEpsilon(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.bracket_factor <= 1.0:
            raise ValueError("bracket_factor must exceed 1")


def _cfg(cfg):
    return cfg if cfg is not None else OrthoConfig()


def _tol(space, cfg):
    return 0.0 if space.is_exact else cfg.tol


def support_range(space, x, y):
    """(min, max) of f(y) over the support face J(x).

    The face is the convex hull of its extremes and f -> f(y) is linear,
    so the range is attained at extremes; for an l_1 point with free
    sign coordinates the interval is closed-form.
    """
    ss = spaces.support_set(space, x)
    y = spaces.coerce_point(space, y)
    if space.kind == "lp" and space.p == 1.0 and ss.free_indices:
        signs = ss.fixed_signs
        base = sum(s * yi for s, yi in zip(signs, y))
        spread = sum(abs(y[i]) for i in ss.free_indices)
        return float(base - spread), float(base + spread)
    vals = [f(y) for f in ss.extremes]
    return min(vals), max(vals)


def min_support_value(space, x, y):
    """min over the face J(x) of |f(y)|; zero iff x is BJ-orthogonal to y."""
    lo, hi = support_range(space, x, y)
    zero = Fraction(0) if space.is_exact else 0.0
    return max(lo, -hi, zero)


def eps_orthogonal_margin(space, x, y, cfg=None):
    """eps*||y|| - min |f(y)| over J(x); nonnegative means the test holds."""
    cfg = _cfg(cfg)
    ny = spaces.norm(space, y)
    if space.kind == "lp" and 1.0 < space.p < math.inf:
        x = spaces.coerce_point(space, x)
        y = spaces.coerce_point(space, y)
        nx = spaces.norm(space, x)
        if nx <= cfg.tol:
            raise ZeroVector("x must be nonzero")
        sip = kernels.lp_semi_inner(y[None, :], x[None, :], space.p)[0]
        return float(cfg.epsilon * ny - abs(sip) / nx)
    minabs = min_support_value(space, x, y)
    if space.is_exact:
        return Fraction(cfg.epsilon) * ny - minabs
    return float(cfg.epsilon * ny - minabs)


def is_eps_orthogonal(space, x, y, cfg=None) -> bool:
    cfg = _cfg(cfg)
    return eps_orthogonal_margin(space, x, y, cfg) >= -_tol(space, cfg)


def is_bj_orthogonal(space, x, y, cfg=None) -> bool:
    """x is BJ-orthogonal to y: ||x + t*y|| >= ||x|| for every scalar t.

    Decided as the eps = 0 instance of the support test; for smooth l_p
    spaces this is the vanishing of the compatible semi-inner product
    [y, x]_p.
    """
    cfg = _cfg(cfg)
    ny = spaces.norm(space, y)
    if space.kind == "lp" and 1.0 < space.p < math.inf:
        x = spaces.coerce_point(space, x)
        y = spaces.coerce_point(space, y)
        nx = spaces.norm(space, x)
        if nx <= cfg.tol:
            raise ZeroVector("x must be nonzero")
        sip = kernels.lp_semi_inner(y[None, :], x[None, :], space.p)[0]
        return abs(sip) <= cfg.tol * nx * max(ny, 1.0)
    minabs = min_support_value(space, x, y)
    if space.is_exact:
        return minabs == 0
    return minabs <= cfg.tol * (1.0 + float(ny))


def _definitional_iters(grid):
    # ternary search shrinks by 2/3; run at least to float resolution so
    # margins are comparable with the support-functional route at 1e-9
    from_grid = int(math.ceil(math.log(max(grid, 2)) / math.log(1.5)))
    return max(from_grid, 90)


def _definitional_xy(space, x, y, cfg):
    x = spaces.coerce_point(space, x)
    y = spaces.coerce_point(space, y)
    if space.is_exact:
        x = np.array([float(c) for c in x])
        y = np.array([float(c) for c in y])
    nx = spaces.norm(space, np.asarray(x, dtype=float))
    ny = spaces.norm(space, np.asarray(y, dtype=float))
    if float(nx) <= cfg.tol:
        raise ZeroVector("x must be nonzero")
    if float(ny) <= cfg.tol:
        raise ZeroVector("y must be nonzero")
    X = np.asarray(x, dtype=np.float64)[None, :]
    Y = np.asarray(y, dtype=np.float64)[None, :]
    if space.kind == "polyhedral":
        return space.D, None, X, Y, float(ny)
    if space.p == math.inf:
        D = np.vstack([np.eye(space.dim), -np.eye(space.dim)])
        return D, None, X, Y, float(ny)
    return None, space.p, X, Y, float(ny)


def definitional_deficit(space, x, y, cfg=None):
    """min over t of the deficit phi(t), normalized by ||x||^2.

    Nonpositive by construction (phi(0) = 0); zero exactly when the
    definitional inequality holds. Near the boundary the deficit decays
    quadratically in the epsilon gap, so use `definitional_margin` when
    margins must be comparable with the support-functional route.
    """
    cfg = _cfg(cfg)
    D, p, X, Y, _ = _definitional_xy(space, x, y, cfg)
    iters = _definitional_iters(cfg.grid)
    if D is not None:
        out = kernels.definitional_margins_poly(
            D, X, Y, cfg.epsilon, cfg.bracket_factor, iters
        )
    else:
        out = kernels.definitional_margins_lp(
            X, Y, p, cfg.epsilon, cfg.bracket_factor, iters
        )
    return float(out[0])


def definitional_eps_star(space, x, y, cfg=None):
    """Smallest epsilon at which the definitional test passes, found by
    bisection on the deficit sign. Uses only norm evaluations, so it is
    an independent oracle for (min support value)/||y||."""
    cfg = _cfg(cfg)
    D, p, X, Y, _ = _definitional_xy(space, x, y, cfg)
    out = kernels.definitional_eps_star(
        D, p, X, Y, cfg.bracket_factor, _definitional_iters(cfg.grid)
    )
    return float(out[0])


def definitional_margin(space, x, y, cfg=None):
    """(eps - eps_star) * ||y||: same scale as `eps_orthogonal_margin`."""
    cfg = _cfg(cfg)
    D, p, X, Y, ny = _definitional_xy(space, x, y, cfg)
    star = kernels.definitional_eps_star(
        D, p, X, Y, cfg.bracket_factor, _definitional_iters(cfg.grid)
    )
    return float((cfg.epsilon - star[0]) * ny)


def is_eps_orthogonal_definitional(space, x, y, cfg=None) -> bool:
    """Deficit-based decision, via the critical epsilon.

    The raw threshold `deficit >= -tol*||x||^2` has quadratic contact at
    the boundary and cannot resolve 1e-9 margins; comparing eps against
    the bisected critical value restores a linear scale while remaining
    a pure norm-minimization procedure.
    """
    cfg = _cfg(cfg)
    return definitional_margin(space, x, y, cfg) >= -cfg.tol


def bj_orthogonal_direction(space, x):
    """Some nonzero y with x BJ-orthogonal to y (a kernel vector of a
    supporting functional)."""
    ss = spaces.support_set(space, x)
    f = ss.extremes[0]
    if space.is_exact:
        vec = rational.kernel_vector([f.coeffs], space.dim)
        if vec is None:
            raise ZeroVector("support functional has trivial kernel")
        return vec
    B = geometry.nullspace_basis(f.array)
    return B[:, 0]


def dual_norm(space, coeffs):
    """Operator norm of a functional over the unit ball."""
    c = np.asarray([float(v) for v in coeffs], dtype=np.float64)
    if space.kind == "polyhedral":
        return float(np.abs(space.V @ c).max())
    if space.p == math.inf:
        return float(np.abs(c).sum())
    if space.p == 1.0:
        return float(np.abs(c).max())
    q = space.p / (space.p - 1.0)
    return float((np.abs(c) ** q).sum() ** (1.0 / q))


@dataclass
class PairThreshold:
    k1: float
    k2: float
    eps_pair: float


def _slice_vertices(D, g, tol):
    """Vertices of {z : D z <= 1, g.z = 0}, any ambient dimension."""
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[1]
    g = np.asarray(g, dtype=np.float64)
    rhs = np.concatenate([np.ones(n - 1), [0.0]])
    out = []
    for subset in combinations(range(len(D)), n - 1):
        A = np.vstack([D[list(subset)], g])
        if abs(np.linalg.det(A)) < 1e-12 * max(np.abs(A).max() ** n, 1e-12):
            continue
        z = np.linalg.solve(A, rhs)
        if (D @ z).max() <= 1.0 + max(10 * tol, 1e-9):
            out.append(z)
    return np.array(out) if out else np.empty((0, n))


def _lp_slice_max(space, f, g, grid=8192):
    """max |f(z)| over ker g on the l_p sphere by a deterministic
    direction grid (documented resolution) plus local polishing."""
    B = geometry.nullspace_basis(g)
    m = B.shape[1]
    if m == 1:
        dirs = np.array([[1.0]])
    elif m == 2:
        ang = np.linspace(0.0, np.pi, grid, endpoint=False)
        dirs = np.column_stack([np.cos(ang), np.sin(ang)])
    else:
        dirs = geometry.fibonacci_sphere(grid)[:, :m]
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    Z = dirs @ B.T
    norms = kernels.lp_norms(Z, space.p)
    vals = np.abs(Z @ np.asarray(f, dtype=float)) / norms
    best = int(np.argmax(vals))
    u = dirs[best]
    value = vals[best]
    step = 0.5
    while step > 1e-10:
        improved = False
        for k in range(m):
            for sgn in (1.0, -1.0):
                cand = u.copy()
                cand[k] += sgn * step
                z = B @ cand
                v = abs(z @ np.asarray(f, dtype=float)) / kernels.lp_norms(
                    z[None, :], space.p
                )[0]
                if v > value:
                    value, u = v, cand
                    improved = True
        if not improved:
            step *= 0.5
    return float(value)


def hyperspace_threshold(space, f, g, tol=None):
    """Screening constants for a pair of unit functionals.

    k1 = max |f(z)| over ker g intersected with the unit ball, k2
    symmetric, eps_pair = min(k1, k2) / 2: below eps_pair no hyperspace
    fits inside the intersection of the two approximate-orthogonality
    sets of smooth points supported by f and g.
    """
    fa = f.array if isinstance(f, spaces.Functional) else np.asarray(f, dtype=float)
    ga = g.array if isinstance(g, spaces.Functional) else np.asarray(g, dtype=float)
    if np.linalg.matrix_rank(np.vstack([fa, ga]), tol=1e-9) < 2:
        raise DependentFunctionals("f and g must be linearly independent")
    fa = fa / dual_norm(space, fa)
    ga = ga / dual_norm(space, ga)
    if tol is None:
        tol = getattr(space, "tol", spaces.DEFAULT_TOL) or spaces.DEFAULT_TOL
    if space.kind == "polyhedral":
        zf = _slice_vertices(space.D, ga, tol)
        zg = _slice_vertices(space.D, fa, tol)
        if len(zf) == 0 or len(zg) == 0:
            raise UnsupportedSpace("degenerate kernel slice")
        k1 = float(np.abs(zf @ fa).max())
        k2 = float(np.abs(zg @ ga).max())
    elif 1.0 < space.p < math.inf:
        k1 = _lp_slice_max(space, fa, ga)
        k2 = _lp_slice_max(space, ga, fa)
    else:
        raise UnsupportedSpace("use the polyhedral presets for p in {1, inf}")
    return PairThreshold(k1=k1, k2=k2, eps_pair=0.5 * min(k1, k2))


@dataclass
class EpsilonXDetail:
    value: float
    formula_value: float | None
    overridden: bool
    argmin_pair: tuple | None = None


# beyond this many dual vertices the pairwise slice sweep is not run
_EPSX_MAX_DUALS = 24


def epsilon_x_detail(space) -> EpsilonXDetail:
    """Space constant: min over independent dual-vertex pairs of eps_pair.

    The sequence-space presets linf(n)/l1(n) return 1 by stipulation;
    the swept formula value is still reported for transparency when the
    dual-vertex count is small enough to sweep.
    """
    if space.kind != "polyhedral":
        raise UnsupportedSpace("epsilon_x needs a polyhedral space or preset")
    preset = space.preset or ""
    overridden = preset.startswith("linf(") or preset.startswith("l1(")
    formula = None
    argmin = None
    if len(space.dual_vertices) <= _EPSX_MAX_DUALS:
        D = space.D
        best = math.inf
        for i in range(len(D)):
            for j in range(i + 1, len(D)):
                if j == space.opposite_dual(i):
                    continue
                th = hyperspace_threshold(space, D[i], D[j])
                if th.eps_pair < best:
                    best = th.eps_pair
                    argmin = (i, j)
        formula = best if best < math.inf else None
    if overridden:
        return EpsilonXDetail(1.0, formula, True, argmin)
    if formula is None:
        raise UnsupportedSpace(
            f"too many dual vertices ({len(space.dual_vertices)}) to sweep"
        )
    return EpsilonXDetail(formula, formula, False, argmin)


def epsilon_x(space) -> float:
    return epsilon_x_detail(space).value


@dataclass
class HyperspaceCertificate:
    basis: np.ndarray  # (2, n), spans the certified hyperspace
    checked_extremes: list  # (point, min-support vs x, min-support vs y)


@dataclass
class HyperspaceSearch:
    certificate: HyperspaceCertificate | None
    definitive: bool  # a "none" backed by the 2-subspace obstruction
    candidates_tried: int
    obstruction_margin: float | None = None


def _certify_plane(space, c, Gx, Gy, cfg):
    """Certificate for V = ker c inside both approximate-orthogonal sets.

    The slice of V with the unit sphere is a polygon; on each edge both
    test margins are piecewise linear, so scanning breakpoints decides
    the whole edge. Returns None unless every edge passes.
    """
    P = geometry.slice_polygon(space.D, c, space.tol)
    if len(P) < 2:
        return None
    fn_x = geometry.face_test_margin_fn(Gx, space.D, cfg.epsilon)
    fn_y = geometry.face_test_margin_fn(Gy, space.D, cfg.epsilon)
    # cheap rejection at the polygon corners before any edge scan
    if fn_x(P).min() < -cfg.tol or fn_y(P).min() < -cfg.tol:
        return None
    for k in range(len(P)):
        wa, wb = P[k], P[(k + 1) % len(P)]
        for fn, G in ((fn_x, Gx), (fn_y, Gy)):
            res = geometry.scan_min_margin(wa, wb, fn, [G, space.D])
            if res.min_margin < -cfg.tol:
                return None
    msx = geometry.min_support_fn(Gx)
    msy = geometry.min_support_fn(Gy)
    extremes = [
        (P[k].copy(), float(msx(P[k][None, :])[0]), float(msy(P[k][None, :])[0]))
        for k in range(len(P))
    ]
    canon = []
    for row in P:
        lead = row[np.nonzero(np.abs(row) > 1e-12)[0][0]]
        canon.append(row if lead > 0 else -row)
    basis = geometry.dedupe_directions(np.array(canon), decimals=6)
    basis_rows = [basis[0]]
    for row in basis[1:]:
        if np.linalg.matrix_rank(np.vstack(basis_rows + [row]), tol=1e-9) == 2:
            basis_rows.append(row)
            break
    # report basis vectors at sphere scale
    B = np.array(
        [row / spaces.norm(space, row) for row in basis_rows]
    )
    return HyperspaceCertificate(basis=B, checked_extremes=extremes)


def _coordinate_obstruction(space, x, y):
    """The explicit 2-subspace blocking a hyperspace in linf(3)/l1(3).

    Returns (plane normal, p, q) or None when the supports are not
    smooth and independent.
    """
    ssx = spaces.support_set(space, x)
    ssy = spaces.support_set(space, y)
    if len(ssx) != 1 or len(ssy) != 1:
        return None
    fx = ssx.extremes[0].array
    fy = ssy.extremes[0].array
    preset = space.preset or ""
    if preset.startswith("linf("):
        p = int(np.argmax(np.abs(fx)))
        q = int(np.argmax(np.abs(fy)))
        if p == q:
            return None
    elif preset.startswith("l1("):
        same = np.nonzero(fx * fy > 0)[0]
        opposite = np.nonzero(fx * fy < 0)[0]
        if len(same) == 0 or len(opposite) == 0:
            return None
        p, q = int(same[0]), int(opposite[0])
    else:
        return None
    r = ({0, 1, 2} - {p, q}).pop()
    c = np.zeros(3)
    c[r] = 1.0
    return c, p, q


def obstruction_margin(space, x, y, cfg):
    """min over the obstructing 2-subspace's sphere slice of the larger
    test violation; positive means the slice meets both approximate
    orthogonal sets only at 0."""
    ob = _coordinate_obstruction(space, x, y)
    if ob is None:
        return None
    c, _, _ = ob
    P = geometry.slice_polygon(space.D, c, space.tol)
    Gx = np.array([f.array for f in spaces.support_set(space, x).extremes])
    Gy = np.array([f.array for f in spaces.support_set(space, y).extremes])
    fn_x = geometry.face_test_margin_fn(Gx, space.D, cfg.epsilon)
    fn_y = geometry.face_test_margin_fn(Gy, space.D, cfg.epsilon)
    worst = math.inf
    for k in range(len(P)):
        wa, wb = P[k], P[(k + 1) % len(P)]
        res = geometry.scan_min_of_max_violation(
            wa, wb, fn_x, fn_y, [Gx, Gy, space.D]
        )
        worst = min(worst, res.min_margin)
    return worst


def hyperspace_search(space, x, y, cfg=None) -> HyperspaceSearch:
    """Search for a hyperspace inside the intersection of the two
    approximate-orthogonality sets (3-dimensional polyhedral spaces).

    Candidate plane normals: dual vertices, pairwise cross products of
    vertices and of dual vertices (these catch every example built from
    polytope data exactly), then a quasi-uniform grid. A None result is
    "not found under budget" unless the linf/l1 coordinate obstruction
    applies, which makes the negative definitive.
    """
    cfg = _cfg(cfg)
    if space.kind != "polyhedral":
        raise UnsupportedSpace("hyperspace search needs a polyhedral space")
    if space.dim != 3:
        raise UnsupportedDimension("hyperspace search is implemented for dim 3")
    spaces._require_nonzero(space, spaces.coerce_point(space, x))
    spaces._require_nonzero(space, spaces.coerce_point(space, y))

    margin = obstruction_margin(space, x, y, cfg)
    if margin is not None and margin > cfg.tol:
        return HyperspaceSearch(
            certificate=None, definitive=True, candidates_tried=0,
            obstruction_margin=margin,
        )

    V, D = space.V, space.D
    structured = [D, geometry.cross_product_directions(V),
                  geometry.cross_product_directions(D)]
    grid = geometry.fibonacci_sphere(cfg.search_normals)
    cands = geometry.dedupe_directions(np.vstack(structured + [grid]))
    Gx = np.array([f.array for f in spaces.support_set(space, x).extremes])
    Gy = np.array([f.array for f in spaces.support_set(space, y).extremes])
    tried = 0
    for c in cands:
        tried += 1
        cert = _certify_plane(space, c, Gx, Gy, cfg)
        if cert is not None:
            return HyperspaceSearch(
                certificate=cert, definitive=True, candidates_tried=tried,
                obstruction_margin=margin,
            )
    return HyperspaceSearch(
        certificate=None, definitive=False, candidates_tried=tried,
        obstruction_margin=margin,
    )


def contains_hyperspace_witness(space, x, y, cfg=None):
    """Optional certificate that some hyperspace sits inside
    x-perp-eps intersect y-perp-eps."""
    return hyperspace_search(space, x, y, cfg).certificate
