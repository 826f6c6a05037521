"""Finite-dimensional normed spaces and their supporting functionals.

Two space kinds are supported:

* `PolyhedralSpace` — the unit ball is a centrally symmetric polytope,
  stored with both its extreme points (vertices) and the extreme points
  of the dual ball (one functional per facet) plus facet incidence.
* `LpSpace` — the l_p norm on R^n for p in [1, inf].

Polyhedral spaces come in two arithmetic modes. In "exact" mode every
coordinate is a Fraction and comparisons are exact (tol = 0); in "float"
mode coordinates are float64 and ties are resolved with a
relative-plus-absolute tolerance `tol*(1 + ||x||)`.
"""

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from . import dualize, kernels, rational
from .errors import (
    AsymmetricInput,
    DegenerateSpan,
    DimensionMismatch,
    OutOfRange,
    UnknownPreset,
    UnsupportedP,
    UnsupportedSpace,
    ZeroVector,
)

DEFAULT_TOL = 1e-9

# l_1 support faces blow up as 2^(number of zero coordinates); beyond this
# dimension the face is reported symbolically instead of enumerated.
L1_ENUMERATION_MAX_DIM = 8


@dataclass(frozen=True)
class Functional:
    """A linear functional stored by its coefficient vector."""

    coeffs: tuple
    index: int | None = None

    def __call__(self, x):
        return sum(c * v for c, v in zip(self.coeffs, x))

    @property
    def array(self):
        return np.asarray([float(c) for c in self.coeffs])


@dataclass
class SupportSet:
    """Extreme supporting functionals at a point, with the achieved norm.

    For an l_1 point with zero coordinates in high dimension the face is
    too large to enumerate; then `free_indices`/`fixed_signs` describe it
    symbolically and `extremes` holds only two sample completions.
    """

    point: object
    value: object
    extremes: list
    indices: list | None = None
    free_indices: tuple = ()
    fixed_signs: tuple | None = None

    def __len__(self):
        return len(self.extremes)


@dataclass
class PolyhedralSpace:
    dim: int
    mode: str
    tol: float
    vertices: tuple  # tuple of coordinate tuples; Fractions in exact mode
    dual_vertices: tuple
    incidence: tuple  # incidence[j] = vertex indices on facet j
    preset: str | None = None
    _V: np.ndarray | None = field(default=None, repr=False, compare=False)
    _D: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def kind(self):
        return "polyhedral"

    @property
    def is_exact(self):
        return self.mode == "exact"

    @property
    def V(self):
        """Vertices as a float64 array (float mirror in exact mode)."""
        if self._V is None:
            self._V = np.array([[float(c) for c in v] for v in self.vertices])
        return self._V

    @property
    def D(self):
        if self._D is None:
            self._D = np.array([[float(c) for c in f] for f in self.dual_vertices])
        return self._D

    def dual_functional(self, j: int) -> Functional:
        return Functional(self.dual_vertices[j], index=j)

    def opposite_dual(self, j: int) -> int:
        """Index of -f for the dual vertex f at index j."""
        if self.is_exact:
            target = tuple(-c for c in self.dual_vertices[j])
            return self.dual_vertices.index(target)
        diffs = np.abs(self.D + self.D[j]).max(axis=1)
        k = int(np.argmin(diffs))
        if diffs[k] > 10 * self.tol + 1e-12:
            raise AsymmetricInput("dual vertex has no antipode")
        return k

    def facet_vertex_indices(self, j: int) -> tuple:
        return self.incidence[j]

    def representative(self, j: int):
        """Centroid of facet j, a relative-interior (hence smooth) point."""
        if self.is_exact:
            inc = self.incidence[j]
            k = Fraction(len(inc))
            return tuple(
                sum(self.vertices[i][c] for i in inc) / k for c in range(self.dim)
            )
        return self.V[list(self.incidence[j])].mean(axis=0)

    def edges(self):
        """Vertex-index pairs forming edges (shared membership in >= dim-1 facets)."""
        on_facets = [set() for _ in self.vertices]
        for j, inc in enumerate(self.incidence):
            for i in inc:
                on_facets[i].add(j)
        out = []
        for a, b in combinations(range(len(self.vertices)), 2):
            if len(on_facets[a] & on_facets[b]) >= self.dim - 1:
                out.append((a, b))
        return out


@dataclass
class LpSpace:
    dim: int
    p: float  # math.inf allowed
    tol: float = DEFAULT_TOL
    preset: str | None = None

    @property
    def kind(self):
        return "lp"

    @property
    def is_exact(self):
        return False

    @property
    def mode(self):
        return "float"


def coerce_point(space, x):
    """Validate and convert a point to the space's working representation."""
    if space.is_exact:
        coords = tuple(rational.to_fraction(c) for c in x)
        if len(coords) != space.dim:
            raise DimensionMismatch(
                f"point has {len(coords)} coords, space has dim {space.dim}"
            )
        return coords
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (space.dim,):
        raise DimensionMismatch(
            f"point has shape {arr.shape}, space has dim {space.dim}"
        )
    if not np.isfinite(arr).all():
        raise ZeroVector("point has non-finite coordinates")
    return arr


def norm(space, x):
    """Norm of x: dual-vertex maximum (polyhedral) or the l_p formula."""
    x = coerce_point(space, x)
    if space.kind == "polyhedral":
        if space.is_exact:
            return max(rational.dot(f, x) for f in space.dual_vertices)
        return float(kernels.poly_norms(space.D, x[None, :])[0])
    p = space.p
    if p == math.inf:
        return float(np.abs(x).max())
    return float(kernels.lp_norms(x[None, :], p)[0])


def _require_nonzero(space, x):
    nx = norm(space, x)
    if space.is_exact:
        if nx == 0:
            raise ZeroVector("operation requires a nonzero point")
    elif nx <= space.tol:
        raise ZeroVector("operation requires a nonzero point")
    return nx


def support_set(space, x) -> SupportSet:
    """Extreme supporting functionals at x (Ext of the support face).

    Polyhedral: the dual vertices whose value at x ties the norm within
    tol*(1+norm). l_p, 1<p<infty: the unique duality-map functional.
    l_1: the sign functional, with all sign completions at zero
    coordinates enumerated up to dimension 8 (symbolic beyond).
    l_inf: one signed coordinate functional per maximal coordinate.
    """
    x = coerce_point(space, x)
    nx = _require_nonzero(space, x)
    if space.kind == "polyhedral":
        if space.is_exact:
            idx = [
                j
                for j, f in enumerate(space.dual_vertices)
                if rational.dot(f, x) == nx
            ]
        else:
            vals = space.D @ x
            cut = nx - space.tol * (1.0 + nx)
            idx = [int(j) for j in np.nonzero(vals >= cut)[0]]
        extremes = [space.dual_functional(j) for j in idx]
        return SupportSet(point=x, value=nx, extremes=extremes, indices=idx)

    p = space.p
    if p == math.inf:
        ax = np.abs(x)
        cut = nx - space.tol * (1.0 + nx)
        extremes = []
        for i in np.nonzero(ax >= cut)[0]:
            coeff = np.zeros(space.dim)
            coeff[i] = 1.0 if x[i] > 0 else -1.0
            extremes.append(Functional(tuple(coeff)))
        return SupportSet(point=x, value=nx, extremes=extremes)
    if p == 1.0:
        cut = space.tol * (1.0 + nx)
        signs = [0 if abs(c) <= cut else (1 if c > 0 else -1) for c in x]
        free = tuple(i for i, s in enumerate(signs) if s == 0)
        if space.dim <= L1_ENUMERATION_MAX_DIM:
            extremes = []
            for completion in product((1.0, -1.0), repeat=len(free)):
                coeff = [float(s) for s in signs]
                for i, s in zip(free, completion):
                    coeff[i] = s
                extremes.append(Functional(tuple(coeff)))
            return SupportSet(
                point=x, value=nx, extremes=extremes,
                free_indices=free, fixed_signs=tuple(signs),
            )
        lo = [float(s) if s else -1.0 for s in signs]
        hi = [float(s) if s else 1.0 for s in signs]
        return SupportSet(
            point=x, value=nx,
            extremes=[Functional(tuple(hi)), Functional(tuple(lo))],
            free_indices=free, fixed_signs=tuple(signs),
        )
    coeff = np.sign(x) * np.abs(x) ** (p - 1.0) / nx ** (p - 1.0)
    return SupportSet(point=x, value=nx, extremes=[Functional(tuple(coeff))])


def smoothness_order(space, x) -> int:
    """Dimension of the span of the supporting functionals at x."""
    ss = support_set(space, x)
    if space.kind == "lp" and space.p == 1.0 and ss.free_indices:
        if space.dim > L1_ENUMERATION_MAX_DIM:
            # sign face spans the fixed direction plus each free axis
            return 1 + len(ss.free_indices)
    if space.is_exact:
        return rational.rank([f.coeffs for f in ss.extremes])
    M = np.array([f.array for f in ss.extremes])
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    thresh = max(space.tol, 1e-12) * s[0]
    return int((s > thresh).sum())


def semi_inner_product_p(space, u, v):
    """[u, v]_p = sum_i u_i sgn(v_i)|v_i|^(p-1) / ||v||^(p-2); 0 when v = 0.

    Defined only for finite p > 1 (the norm is smooth there and the
    compatible semi-inner product is unique).
    """
    if space.kind != "lp" or space.p == math.inf or space.p <= 1.0:
        raise UnsupportedP("semi-inner product needs an l_p space with 1 < p < inf")
    u = coerce_point(space, u)
    v = coerce_point(space, v)
    return float(kernels.lp_semi_inner(u[None, :], v[None, :], space.p)[0])


# ---------------------------------------------------------------------------
# construction


def build_polyhedral(vertex_list, mode="float", tol=None, symmetrize=True):
    """Build a polyhedral space from (candidate) unit-ball extreme points.

    The dual vertices are computed by brute-force facet enumeration of
    the convex hull. Points strictly inside the hull are discarded with
    a warning; duplicates are merged. With symmetrize=True missing
    negations are added, otherwise an asymmetric list is an error.
    """
    if mode not in ("exact", "float"):
        raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")
    if tol is None:
        tol = 0.0 if mode == "exact" else DEFAULT_TOL
    if mode == "exact" and tol != 0.0:
        raise ValueError("exact mode requires tol = 0")
    pts = list(vertex_list)
    if not pts:
        raise DegenerateSpan("empty vertex list")
    if mode == "exact":
        pts = [tuple(rational.to_fraction(c) for c in v) for v in pts]
        dim = len(pts[0])
        if any(len(v) != dim for v in pts):
            raise DimensionMismatch("vertices of mixed dimension")
        if dim < 2:
            raise OutOfRange("dimension must be >= 2")
        pts = list(dict.fromkeys(pts))
        negs = [tuple(-c for c in v) for v in pts]
        if symmetrize:
            for nv in negs:
                if nv not in pts:
                    pts.append(nv)
        elif any(nv not in pts for nv in negs):
            raise AsymmetricInput("missing -v for some vertex v")
        if rational.rank(pts) < dim:
            raise DegenerateSpan("vertices do not span the space")
        duals, incidence = dualize.enumerate_facets_exact(pts)
        on_hull = sorted({i for inc in incidence for i in inc})
        if len(on_hull) < len(pts):
            warnings.warn("dropping input points interior to the unit ball")
            keep = {old: new for new, old in enumerate(on_hull)}
            pts = [pts[i] for i in on_hull]
            incidence = [tuple(keep[i] for i in inc) for inc in incidence]
        order = sorted(range(len(duals)), key=lambda j: duals[j])
        duals = [duals[j] for j in order]
        incidence = [incidence[j] for j in order]
        return PolyhedralSpace(
            dim=dim, mode="exact", tol=0.0,
            vertices=tuple(pts), dual_vertices=tuple(duals),
            incidence=tuple(incidence),
        )

    V = np.asarray(pts, dtype=np.float64)
    if V.ndim != 2:
        raise DimensionMismatch("vertices of mixed dimension")
    m, dim = V.shape
    if dim < 2:
        raise OutOfRange("dimension must be >= 2")
    # merge duplicates within tol
    kept = []
    for row in V:
        if not any(np.max(np.abs(row - k)) <= tol for k in kept):
            kept.append(row)
    V = np.array(kept)
    if symmetrize:
        extra = [
            -row for row in V if not any(np.max(np.abs(row + k)) <= tol for k in V)
        ]
        if extra:
            V = np.vstack([V] + [np.array(extra)])
    else:
        for row in V:
            if not any(np.max(np.abs(row + k)) <= tol for k in V):
                raise AsymmetricInput("missing -v for some vertex v")
    if np.linalg.matrix_rank(V, tol=max(tol, 1e-12)) < dim:
        raise DegenerateSpan("vertices do not span the space")
    D, incidence = dualize.enumerate_facets_float(V, tol)
    on_hull = sorted({i for inc in incidence for i in inc})
    if len(on_hull) < len(V):
        warnings.warn("dropping input points interior to the unit ball")
        keep = {old: new for new, old in enumerate(on_hull)}
        V = V[on_hull]
        incidence = [tuple(keep[i] for i in inc) for inc in incidence]
        D /= (D @ V.T).max(axis=1)[:, None]
    order = np.lexsort(D.T[::-1])
    D = D[order]
    incidence = [incidence[j] for j in order]
    return PolyhedralSpace(
        dim=dim, mode="float", tol=tol,
        vertices=tuple(tuple(float(c) for c in row) for row in V),
        dual_vertices=tuple(tuple(float(c) for c in row) for row in D),
        incidence=tuple(incidence),
    )


def _linf_space(n, mode):
    signs = list(product((1, -1), repeat=n))
    if mode == "exact":
        vertices = tuple(tuple(Fraction(s) for s in sv) for sv in signs)
        duals = []
        for i in range(n):
            row = [Fraction(0)] * n
            row[i] = Fraction(1)
            duals.append(tuple(row))
        for i in range(n):
            row = [Fraction(0)] * n
            row[i] = Fraction(-1)
            duals.append(tuple(row))
        incidence = []
        for j in range(2 * n):
            i, sgn = (j, 1) if j < n else (j - n, -1)
            incidence.append(
                tuple(k for k, sv in enumerate(signs) if sv[i] == sgn)
            )
        return PolyhedralSpace(
            dim=n, mode="exact", tol=0.0, vertices=vertices,
            dual_vertices=tuple(duals), incidence=tuple(incidence),
            preset=f"linf({n})",
        )
    vertices = tuple(tuple(float(s) for s in sv) for sv in signs)
    duals = np.vstack([np.eye(n), -np.eye(n)])
    incidence = []
    for j in range(2 * n):
        i, sgn = (j, 1) if j < n else (j - n, -1)
        incidence.append(tuple(k for k, sv in enumerate(signs) if sv[i] == sgn))
    return PolyhedralSpace(
        dim=n, mode="float", tol=DEFAULT_TOL, vertices=vertices,
        dual_vertices=tuple(tuple(row) for row in duals),
        incidence=tuple(incidence), preset=f"linf({n})",
    )


def _l1_space(n, mode):
    signs = list(product((1, -1), repeat=n))
    if mode == "exact":
        vertices = []
        for i in range(n):
            row = [Fraction(0)] * n
            row[i] = Fraction(1)
            vertices.append(tuple(row))
        for i in range(n):
            row = [Fraction(0)] * n
            row[i] = Fraction(-1)
            vertices.append(tuple(row))
        duals = tuple(tuple(Fraction(s) for s in sv) for sv in signs)
        incidence = tuple(
            tuple(i if sv[i] == 1 else n + i for i in range(n)) for sv in signs
        )
        return PolyhedralSpace(
            dim=n, mode="exact", tol=0.0, vertices=tuple(vertices),
            dual_vertices=duals, incidence=incidence, preset=f"l1({n})",
        )
    eye = np.eye(n)
    vertices = tuple(tuple(row) for row in np.vstack([eye, -eye]))
    duals = tuple(tuple(float(s) for s in sv) for sv in signs)
    incidence = tuple(
        tuple(i if sv[i] == 1 else n + i for i in range(n)) for sv in signs
    )
    return PolyhedralSpace(
        dim=n, mode="float", tol=DEFAULT_TOL, vertices=vertices,
        dual_vertices=duals, incidence=incidence, preset=f"l1({n})",
    )


def _regular_polygon_space(n):
    """Unit ball = regular 2n-gon with vertices on the unit circle."""
    k = 2 * n
    ang = [(j * math.pi) / n for j in range(k)]
    vertices = tuple((math.cos(a), math.sin(a)) for a in ang)
    half = math.pi / (2 * n)
    duals = []
    incidence = []
    for j in range(k):
        mid = ang[j] + half
        duals.append((math.cos(mid) / math.cos(half), math.sin(mid) / math.cos(half)))
        incidence.append((j, (j + 1) % k))
    return PolyhedralSpace(
        dim=2, mode="float", tol=DEFAULT_TOL, vertices=vertices,
        dual_vertices=tuple(duals), incidence=tuple(incidence),
        preset=f"regular_2n_gon({n})",
    )


def _octagonal_prism_space():
    """Product of the regular octagon (circumradius 1) with [-1, 1]."""
    ang = [(j * math.pi) / 4 for j in range(8)]
    top = [(math.cos(a), math.sin(a), 1.0) for a in ang]
    bottom = [(math.cos(a), math.sin(a), -1.0) for a in ang]
    vertices = tuple(top + bottom)
    half = math.pi / 8
    duals = []
    incidence = []
    for j in range(8):
        mid = ang[j] + half
        duals.append(
            (math.cos(mid) / math.cos(half), math.sin(mid) / math.cos(half), 0.0)
        )
        incidence.append((j, (j + 1) % 8, 8 + j, 8 + (j + 1) % 8))
    duals.append((0.0, 0.0, 1.0))
    incidence.append(tuple(range(8)))
    duals.append((0.0, 0.0, -1.0))
    incidence.append(tuple(range(8, 16)))
    return PolyhedralSpace(
        dim=3, mode="float", tol=DEFAULT_TOL, vertices=vertices,
        dual_vertices=tuple(duals), incidence=tuple(incidence),
        preset="octagonal_prism",
    )


def preset_space(name, n=None, p=None, mode="float"):
    """Named space constructors.

    linf(n) and l1(n) carry their dual data directly (no hull run) and
    accept mode="exact"; polygon and prism presets are float-only since
    their coordinates are irrational.
    """
    if name == "linf":
        if n is None or not 2 <= n <= 16:
            raise OutOfRange("linf preset needs 2 <= n <= 16")
        return _linf_space(n, mode)
    if name == "l1":
        if n is None or not 2 <= n <= 16:
            raise OutOfRange("l1 preset needs 2 <= n <= 16")
        return _l1_space(n, mode)
    if name == "regular_2n_gon":
        if n is None or not 2 <= n <= 64:
            raise OutOfRange("regular_2n_gon preset needs 2 <= n <= 64")
        if mode == "exact":
            raise UnsupportedSpace("polygon presets are float-only")
        return _regular_polygon_space(n)
    if name == "octagonal_prism":
        if mode == "exact":
            raise UnsupportedSpace("prism preset is float-only")
        return _octagonal_prism_space()
    if name == "lp":
        if n is None or not 2 <= n <= 16:
            raise OutOfRange("lp preset needs 2 <= n <= 16")
        if p is None:
            raise OutOfRange("lp preset needs p")
        p = math.inf if p in ("inf", math.inf) else float(p)
        if p != math.inf and p < 1.0:
            raise OutOfRange("p must be >= 1")
        return LpSpace(dim=n, p=p, preset=f"lp({n},{p})")
    raise UnknownPreset(f"unknown preset {name!r}")


def preset_from_string(text, mode="float"):
    """Parse preset names like "linf(3)", "lp(4,1.5)", "octagonal_prism"."""
    text = text.strip()
    if "(" not in text:
        return preset_space(text, mode=mode)
    base, args = text.rstrip(")").split("(", 1)
    parts = [a.strip() for a in args.split(",") if a.strip()]
    if base == "lp":
        return preset_space("lp", n=int(parts[0]), p=parts[1], mode=mode)
    return preset_space(base, n=int(parts[0]), mode=mode)


def validate_space(space) -> None:
    """Check the structural invariants of a polyhedral space; raise on failure."""
    if space.kind != "polyhedral":
        return
    tol = space.tol if not space.is_exact else 0
    if space.is_exact:
        vset = set(space.vertices)
        for v in space.vertices:
            assert tuple(-c for c in v) in vset, "vertex set not symmetric"
        for f in space.dual_vertices:
            assert tuple(-c for c in f) in set(space.dual_vertices)
        assert rational.rank(list(space.vertices)) == space.dim
        for v in space.vertices:
            assert max(rational.dot(f, v) for f in space.dual_vertices) == 1
        for j, f in enumerate(space.dual_vertices):
            inc = [space.vertices[i] for i in space.incidence[j]]
            assert len(inc) >= space.dim
            assert rational.rank(inc) == space.dim
        return
    V, D = space.V, space.D
    for row in V:
        assert np.min(np.max(np.abs(V + row), axis=1)) <= 10 * tol
    for row in D:
        assert np.min(np.max(np.abs(D + row), axis=1)) <= 10 * tol
    assert np.linalg.matrix_rank(V, tol=1e-9) == space.dim
    vertex_norms = (D @ V.T).max(axis=0)
    assert np.max(np.abs(vertex_norms - 1.0)) <= 10 * tol, "vertex off the sphere"
    for j in range(len(D)):
        inc = list(space.incidence[j])
        assert len(inc) >= space.dim
        assert np.linalg.matrix_rank(V[inc], tol=1e-9) == space.dim
        assert np.max(np.abs(D[j] @ V[inc].T - 1.0)) <= 10 * tol
        # non-redundancy: dropping facet j lowers the norm of its centroid
        c = V[inc].mean(axis=0)
        others = np.delete(D, [j, space.opposite_dual(j)], axis=0)
        if len(others):
            assert (others @ c).max() < 1.0 - tol, "redundant facet"
