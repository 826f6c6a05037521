"""Linear operators between finite-dimensional normed spaces and their
approximate-orthogonality preservation behavior.

Central reduction: x is BJ-orthogonal to y exactly when some functional
f in the face J(x) kills y, so the orthogonal set of x is the union of
ker f over the face. Preservation at x is certified by scanning those
kernels on the unit sphere:

* dimension 2 — the orthogonal set on the sphere is a pair of antipodal
  points (smooth x) or a pair of antipodal boundary arcs (vertex x);
  both scan exactly because every margin is piecewise linear along the
  polygon boundary.
* dimension 3, smooth x — ker f meets the sphere in a polygon; its
  edges scan exactly.
* dimension 3, non-smooth x — the extreme kernels scan exactly and the
  interior of the face is Monte Carlo sampled; verdicts say "sampled".
* dimension >= 4 or l_p spaces — sampled.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import cones, geometry, kernels, orthogonality, spaces
from .errors import (
    DimensionMismatch,
    HypothesisUnmet,
    OutOfRange,
    UnsupportedSpace,
    ZeroOperator,
    ZeroVector,
)


@dataclass
class Operator:
    matrix: np.ndarray
    domain: object
    codomain: object

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        m, n = self.matrix.shape
        if n != self.domain.dim or m != self.codomain.dim:
            raise DimensionMismatch(
                f"matrix is {m}x{n} but spaces have dims "
                f"{self.codomain.dim} <- {self.domain.dim}"
            )

    def __call__(self, x):
        return self.matrix @ np.asarray(x, dtype=np.float64)

    @property
    def is_zero(self):
        return not np.any(self.matrix)


@dataclass
class Verdict:
    holds: bool
    margin: float
    checked: int
    method: str  # "exact" | "sampled"
    witness: tuple | None = None  # (x, y, margin), re-verified

    def __bool__(self):
        return self.holds


@dataclass
class OpConfig:
    tol: float = spaces.DEFAULT_TOL
    samples: int = 200
    seed: int = 0
    budget: int = 100_000
    hypothesis_budget: int = 4_000


def _cfg(cfg):
    return cfg if cfg is not None else OpConfig()


def _face_rows(space, x):
    ss = spaces.support_set(space, x)
    return np.array([f.array for f in ss.extremes])


def _codomain_margin(T, eps, tol):
    """Returns (margin_fn_builder, exactable).

    margin_fn_builder(u) gives a batched w -> margin function for the
    test "Tx=u is approximately orthogonal to w", plus the linear form
    groups that bound its pieces (None when not piecewise linear).
    """
    cod = T.codomain

    if cod.kind == "polyhedral":
        def build(u):
            G = _face_rows(cod, u)
            fn = geometry.face_test_margin_fn(G, cod.D, eps)
            return fn, [G, cod.D]
        return build, True

    p = cod.p
    if p == math.inf:
        eye = np.vstack([np.eye(cod.dim), -np.eye(cod.dim)])

        def build(u):
            G = _face_rows(cod, u)
            fn = geometry.face_test_margin_fn(G, eye, eps)
            return fn, [G, eye]
        return build, True

    if p == 1.0:
        eye = np.vstack([np.eye(cod.dim), -np.eye(cod.dim)])

        def build(u):
            nu = spaces.norm(cod, u)
            cut = tol * (1.0 + nu)
            signs = np.where(np.abs(u) <= cut, 0.0, np.sign(u))
            free = np.abs(u) <= cut

            def fn(W):
                W = np.atleast_2d(W)
                base = W @ signs
                spread = np.abs(W[:, free]).sum(axis=1) if free.any() else 0.0
                minabs = np.maximum(
                    np.maximum(base - spread, -base - spread), 0.0
                )
                return eps * np.abs(W).sum(axis=1) - minabs

            return fn, [signs[None, :], eye]
        return build, True

    def build(u):
        nu = spaces.norm(cod, u)

        def fn(W):
            W = np.atleast_2d(W)
            sip = kernels.lp_semi_inner(W, np.broadcast_to(u, W.shape).copy(), p)
            return eps * kernels.lp_norms(W, p) - np.abs(sip) / nu

        return fn, None
    return build, False


def _compose(rows, T):
    """Precompose codomain form rows with T so they act on domain points."""
    return np.atleast_2d(rows) @ T.matrix


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, n):
        self.used += n

    @property
    def exhausted(self):
        return self.used >= self.limit


def _scan_direction_pair(space, f, fn_dom, groups_dom):
    """Margins at the two antipodal kernel-sphere points, dimension 2."""
    pts = geometry.kernel_sphere_points_2d(lambda v: spaces.norm(space, v), f)
    margins = fn_dom(pts)
    i = int(np.argmin(margins))
    return geometry.SegmentScan(float(margins[i]), pts[i], len(pts))


def _ordered_polygon_2d(space):
    ang = np.arctan2(space.V[:, 1], space.V[:, 0])
    return space.V[np.argsort(ang)]


def _scan_arc_2d(space, f1, f2, fn_dom, groups_dom):
    """Exact scan of {y on the sphere : f1(y) * f2(y) <= 0}.

    Polygon edges are cut at the zeros of f1 and f2; kept subsegments
    (sign product <= 0 at the midpoint) are scanned with the margin's
    own subdivision.
    """
    P = _ordered_polygon_2d(space)
    dom_rows = np.vstack([f1, f2])
    best = None
    evals = 0
    k = len(P)
    for i in range(k):
        wa, wb = P[i], P[(i + 1) % k]
        ts = geometry.segment_breakpoints(wa, wb, [], zero_groups=[dom_rows])
        for a, b in zip(ts[:-1], ts[1:]):
            pa = wa + a * (wb - wa)
            pb = wa + b * (wb - wa)
            mid = 0.5 * (pa + pb)
            if (f1 @ mid) * (f2 @ mid) > space.tol:
                continue
            res = geometry.scan_min_margin(
                pa, pb, fn_dom, groups_dom, zero_groups=[dom_rows]
            )
            evals += res.evals
            if best is None or res.min_margin < best.min_margin:
                best = res
    if best is None:  # degenerate: fall back to the two kernel directions
        best = _scan_direction_pair(space, f1, fn_dom, groups_dom)
        evals = best.evals
    return geometry.SegmentScan(best.min_margin, best.argmin, evals)


def _scan_kernel_polygon_3d(space, f, fn_dom, groups_dom):
    P = geometry.slice_polygon(space.D, f, space.tol)
    best = None
    evals = 0
    for i in range(len(P)):
        res = geometry.scan_min_margin(
            P[i], P[(i + 1) % len(P)], fn_dom, groups_dom
        )
        evals += res.evals
        if best is None or res.min_margin < best.min_margin:
            best = res
    if best is None:
        raise ZeroVector("kernel slice is empty")
    return geometry.SegmentScan(best.min_margin, best.argmin, evals)


def _band_samples(space, face_rows, rng, count):
    """Random unit-sphere members of the orthogonal set of a non-smooth
    point: pick f in the face, then a random kernel vector of f."""
    out = []
    n = space.dim
    for _ in range(count):
        lam = rng.dirichlet(np.ones(len(face_rows)))
        f = lam @ face_rows
        g = rng.normal(size=n)
        y = g - (f @ g) / (f @ f) * f
        ny = spaces.norm(space, y)
        if ny > 1e-9:
            out.append(y / ny)
    return np.array(out) if out else np.empty((0, n))


def _lp_kernel_samples(space, f, rng, count):
    B = geometry.nullspace_basis(f)
    structured = list(B.T) + [
        B[:, a] + s * B[:, b]
        for a, b in combinations(range(B.shape[1]), 2)
        for s in (1.0, -1.0)
    ]
    random = [B @ rng.normal(size=B.shape[1]) for _ in range(count)]
    pts = []
    for y in structured + random:
        ny = spaces.norm(space, y)
        if ny > 1e-9:
            pts.append(y / ny)
    return np.array(pts)


def preserves_eps_at(T: Operator, x, eps, cfg=None, budget=None) -> Verdict:
    """Does x BJ-orthogonal to y force Tx approximately orthogonal to Ty?

    Homogeneity reduces y to the unit sphere, and the orthogonal set of
    x there is scanned per the module strategy. A failing verdict
    carries a witness pair that re-verifies from scratch.
    """
    cfg = _cfg(cfg)
    if T.is_zero:
        raise ZeroOperator("operator is zero")
    dom = T.domain
    x = spaces.coerce_point(dom, x)
    if dom.is_exact:
        x = np.array([float(c) for c in x])
    spaces._require_nonzero(dom, x)
    u = T(x)
    if spaces.norm(T.codomain, u) <= cfg.tol:
        # Tx = 0 is approximately orthogonal to everything
        return Verdict(True, math.inf, 0, "exact")
    build, exactable = _codomain_margin(T, eps, cfg.tol)
    fn_cod, groups_cod = build(u)

    def fn_dom(W):
        return fn_cod(np.atleast_2d(W) @ T.matrix.T)

    groups_dom = (
        [_compose(g, T) for g in groups_cod] if groups_cod is not None else None
    )
    rng = np.random.default_rng(cfg.seed)
    budget = budget or _Budget(cfg.budget)

    if dom.kind == "polyhedral" and dom.dim == 2 and exactable:
        face = _face_rows(dom, x)
        if len(face) == 1:
            res = _scan_direction_pair(dom, face[0], fn_dom, groups_dom)
        else:
            res = _scan_arc_2d(dom, face[0], face[1], fn_dom, groups_dom)
        budget.spend(res.evals)
        method = "exact"
        best = res
    elif dom.kind == "polyhedral" and dom.dim == 3 and exactable:
        face = _face_rows(dom, x)
        best = None
        evals = 0
        for f in face:
            res = _scan_kernel_polygon_3d(dom, f, fn_dom, groups_dom)
            evals += res.evals
            if best is None or res.min_margin < best.min_margin:
                best = res
        method = "exact"
        if len(face) > 1:
            pts = _band_samples(dom, face, rng, cfg.samples)
            if len(pts):
                margins = fn_dom(pts)
                evals += len(pts)
                i = int(np.argmin(margins))
                if margins[i] < best.min_margin:
                    best = geometry.SegmentScan(float(margins[i]), pts[i], evals)
            method = "sampled"
        budget.spend(evals)
        best = geometry.SegmentScan(best.min_margin, best.argmin, evals)
    else:
        face = _face_rows(dom, x)
        pts = []
        for f in face:
            pts.append(_lp_kernel_samples(dom, f, rng, cfg.samples))
        if len(face) > 1:
            pts.append(_band_samples(dom, face, rng, cfg.samples))
        pts = np.vstack([p for p in pts if len(p)])
        margins = fn_dom(pts)
        budget.spend(len(pts))
        i = int(np.argmin(margins))
        best = geometry.SegmentScan(float(margins[i]), pts[i], len(pts))
        method = "sampled"

    if best.min_margin < -10 * cfg.tol:
        ok, margin = verify_witness(T, x, best.argmin, eps, cfg.tol)
        if ok:
            return Verdict(
                False, best.min_margin, best.evals, method,
                witness=(np.asarray(x, dtype=float), best.argmin, margin),
            )
    return Verdict(True, best.min_margin, best.evals, method)


def verify_witness(T, x, y, eps, tol):
    """Independent re-check of a claimed violation pair."""
    fresh = orthogonality.OrthoConfig(epsilon=eps, tol=tol)
    if not orthogonality.is_bj_orthogonal(T.domain, x, y, fresh):
        return False, 0.0
    margin = orthogonality.eps_orthogonal_margin(
        T.codomain, T(x), T(y), fresh
    )
    return margin < -10 * tol, float(margin)


def _structured_domain_points(T, rng, samples, pullbacks=True):
    dom = T.domain
    pts = []
    if dom.kind == "polyhedral":
        pts.extend(dom.V)
        for j in range(len(dom.dual_vertices)):
            rep = dom.representative(j)
            pts.append(np.asarray([float(c) for c in rep]))
        for a, b in dom.edges():
            pts.append(0.5 * (dom.V[a] + dom.V[b]))
        if pullbacks and dom.dim == T.codomain.dim:
            cod = T.codomain
            targets = []
            if cod.kind == "polyhedral":
                targets.extend(cod.V)
                for j in range(len(cod.dual_vertices)):
                    targets.append(
                        np.asarray([float(c) for c in cod.representative(j)])
                    )
            else:
                targets.extend(np.eye(cod.dim))
            try:
                back = np.linalg.solve(
                    T.matrix, np.array(targets).T
                ).T
                pts.extend(back)
            except np.linalg.LinAlgError:
                pass
    else:
        eye = np.eye(dom.dim)
        pts.extend(eye)
        pts.extend(-eye)
        pts.append(np.ones(dom.dim))
    for _ in range(samples):
        pts.append(rng.normal(size=dom.dim))
    out = []
    for p in pts:
        n = spaces.norm(dom, p)
        if n > 1e-9:
            out.append(np.asarray(p, dtype=float) / n)
    return out


def _facet_criticality_params(T, va, vb):
    """Subdivision of a 2-d facet segment where the image's support face
    can change: crossings of the codomain dual values along T[va, vb]."""
    H = T.codomain.D if T.codomain.kind == "polyhedral" else np.vstack(
        [np.eye(T.codomain.dim), -np.eye(T.codomain.dim)]
    )
    HT = H @ T.matrix
    return geometry.segment_breakpoints(va, vb, [HT])


def preserves_eps_global(T: Operator, eps, cfg=None) -> Verdict:
    """Preservation at every x (certified on the sphere; homogeneity and
    the trivial x = 0 case extend it).

    2-dimensional polyhedral domains are exact: vertices get arc scans
    and each facet is subdivided at image-face criticality parameters,
    between which the relevant margins are constant in x. Everywhere
    else a structured-plus-random point set is checked and the verdict
    is "sampled".
    """
    cfg = _cfg(cfg)
    if T.is_zero:
        raise ZeroOperator("operator is zero")
    dom = T.domain
    rng = np.random.default_rng(cfg.seed)
    budget = _Budget(cfg.budget)

    build, exactable = _codomain_margin(T, eps, cfg.tol)

    worst = math.inf
    worst_witness = None
    checked = 0

    if dom.kind == "polyhedral" and dom.dim == 2 and exactable:
        # vertices exactly
        for v in dom.V:
            res = preserves_eps_at(T, v, eps, cfg, budget)
            checked += res.checked
            if res.margin < worst:
                worst = res.margin
                worst_witness = (v, res.witness[1]) if res.witness else None
                if res.witness is None and res.margin < -10 * cfg.tol:
                    worst_witness = None
        # facet interiors: margins are constant between criticality params
        for j, inc in enumerate(dom.incidence):
            va, vb = dom.V[inc[0]], dom.V[inc[1]]
            f = dom.D[j]
            d = geometry.kernel_sphere_points_2d(
                lambda v: spaces.norm(dom, v), f
            )[0]
            ts = _facet_criticality_params(T, va, vb)
            mids = [(a + b) / 2.0 for a, b in zip(ts[:-1], ts[1:])]
            for t in list(ts) + mids:
                xpt = va + t * (vb - va)
                nx = spaces.norm(dom, xpt)
                if nx <= cfg.tol:
                    continue
                xpt = xpt / nx
                u = T(xpt)
                if spaces.norm(T.codomain, u) <= cfg.tol:
                    continue
                fn_cod, _ = build(u)
                m = float(fn_cod((T.matrix @ d)[None, :])[0])
                checked += 1
                if m < worst:
                    worst = m
                    worst_witness = (xpt, d)
        method = "exact"
    else:
        for xpt in _structured_domain_points(T, rng, cfg.samples):
            if budget.exhausted:
                break
            res = preserves_eps_at(T, xpt, eps, cfg, budget)
            checked += res.checked
            if res.margin < worst:
                worst = res.margin
                worst_witness = (xpt, res.witness[1]) if res.witness else None
        method = "sampled"

    if worst < -10 * cfg.tol and worst_witness is not None:
        ok, margin = verify_witness(
            T, worst_witness[0], worst_witness[1], eps, cfg.tol
        )
        if ok:
            return Verdict(
                False, worst, checked, method,
                witness=(worst_witness[0], worst_witness[1], margin),
            )
    return Verdict(worst >= -10 * cfg.tol, worst, checked, method)


def witness_search_nonpreservation(T: Operator, eps, budget=100_000, seed=0):
    """Seeded search for a re-verified violation pair, or None.

    Structured candidates (vertices, facet representatives, edge
    midpoints, pullbacks of codomain structure) come first, then random
    sphere points until the evaluation budget runs out.
    """
    if T.is_zero:
        raise ZeroOperator("operator is zero")
    cfg = OpConfig(seed=seed, budget=budget, samples=64)
    rng = np.random.default_rng(seed)
    tracker = _Budget(budget)
    dom = T.domain

    structured = _structured_domain_points(T, rng, 0)
    for xpt in structured:
        if tracker.exhausted:
            return None
        res = preserves_eps_at(T, xpt, eps, cfg, tracker)
        if res.witness is not None:
            return res.witness[0], res.witness[1]
    while not tracker.exhausted:
        xpt = rng.normal(size=dom.dim)
        n = spaces.norm(dom, xpt)
        if n <= 1e-9:
            continue
        res = preserves_eps_at(T, xpt / n, eps, cfg, tracker)
        if res.witness is not None:
            return res.witness[0], res.witness[1]
    return None


def three_functional_independence(space, x) -> bool:
    """Any three distinct extreme supporting functionals at one point
    are linearly independent; a False return would be an arithmetic-mode
    red flag, so the first violating triple is kept on the exception
    path via `first_dependent_triple`."""
    triple = first_dependent_triple(space, x)
    return triple is None


def first_dependent_triple(space, x):
    from .errors import TooFewFunctionals

    ss = spaces.support_set(space, x)
    if len(ss.extremes) < 3:
        raise TooFewFunctionals(
            f"need at least 3 extreme functionals, got {len(ss.extremes)}"
        )
    rows = [f.array for f in ss.extremes]
    for triple in combinations(range(len(rows)), 3):
        M = np.array([rows[i] for i in triple])
        if np.linalg.matrix_rank(M, tol=1e-9) < 3:
            return triple
    return None


def is_scalar_isometry(T: Operator, cfg=None):
    """The scaling k > 0 with T = k * isometry, or None.

    Polyhedral criterion: all vertices map to norm k, each image/k is
    again a vertex, and the induced vertex map is a bijection — then
    T/k permutes the extreme points of the ball, hence is an isometry.
    l_p with p != 2 has the signed-permutation isometry group; l_2 uses
    T^T T = k^2 I.
    """
    cfg = _cfg(cfg)
    if T.domain.dim != T.codomain.dim:
        raise DimensionMismatch("scalar-isometry test needs equal dimensions")
    if T.is_zero:
        return None
    dom = T.domain
    tol = max(cfg.tol, 1e-12)
    if dom.kind == "polyhedral":
        images = (T.matrix @ dom.V.T).T
        norms = kernels.poly_norms(T.codomain.D, images)
        k = float(norms.mean())
        if np.max(np.abs(norms - k)) > 100 * tol * (1.0 + k):
            return None
        if k <= tol:
            return None
        if np.linalg.matrix_rank(T.matrix, tol=1e-9) < dom.dim:
            return None
        VC = T.codomain.V
        assigned = set()
        for img in images / k:
            d = np.abs(VC - img).max(axis=1)
            i = int(np.argmin(d))
            if d[i] > 1e-6 * (1.0 + k) or i in assigned:
                return None
            assigned.add(i)
        if len(assigned) != len(VC):
            return None
        return k
    p = dom.p
    M = T.matrix
    if p == 2.0:
        G = M.T @ M
        k2 = float(np.trace(G) / dom.dim)
        if k2 <= tol:
            return None
        if np.max(np.abs(G - k2 * np.eye(dom.dim))) > 100 * tol * (1.0 + k2):
            return None
        return math.sqrt(k2)
    A = np.abs(M)
    k = float(A.max())
    if k <= tol:
        return None
    P = A / k
    big = P > 0.5
    if big.sum(axis=0).max() != 1 or big.sum(axis=1).max() != 1:
        return None
    if big.sum() != dom.dim:
        return None
    if np.max(np.abs(P[big] - 1.0)) > 100 * tol or np.max(P[~big]) > 100 * tol:
        return None
    return k


@dataclass
class FacetMapEntry:
    image_label: int | None
    consistent: bool
    sampled: int


@dataclass
class FacetMapReport:
    entries: dict
    surjective: bool
    injective: bool


def facet_image_map(T: Operator, eps, cfg=None) -> FacetMapReport:
    """Which codomain cone receives each domain cone's image.

    Samples each domain cone (representative plus random interior
    combinations); consistent means all images are smooth with one
    common label. Also reports whether the induced label map hits every
    codomain label and whether it is one-to-one.
    """
    cfg = _cfg(cfg)
    if T.is_zero:
        raise ZeroOperator("operator is zero")
    dom, cod = T.domain, T.codomain
    if dom.kind != "polyhedral" or cod.kind != "polyhedral":
        raise UnsupportedSpace("facet mapping needs polyhedral spaces")
    rng = np.random.default_rng(cfg.seed)
    entries = {}
    per_facet = max(8, cfg.samples // max(len(dom.dual_vertices), 1))
    for j in range(len(dom.dual_vertices)):
        verts = dom.V[list(dom.incidence[j])]
        pts = [verts.mean(axis=0)]
        for _ in range(per_facet - 1):
            w = rng.dirichlet(np.ones(len(verts)))
            pts.append(rng.uniform(0.2, 2.0) * (w @ verts))
        labels = set()
        consistent = True
        for ptx in pts:
            img = T(ptx)
            if spaces.norm(cod, img) <= cfg.tol:
                consistent = False
                continue
            lab = cones.extreme_support_labels(cod, img)
            if len(lab) != 1:
                consistent = False
            labels.update(lab)
        g = labels.pop() if len(labels) == 1 else None
        entries[j] = FacetMapEntry(
            image_label=g, consistent=consistent and g is not None,
            sampled=len(pts),
        )
    images = [e.image_label for e in entries.values() if e.image_label is not None]
    surjective = set(images) == set(range(len(cod.dual_vertices)))
    injective = len(images) == len(set(images)) and all(
        e.consistent for e in entries.values()
    )
    return FacetMapReport(entries=entries, surjective=surjective, injective=injective)


@dataclass
class CardinalityReport:
    count_violations: list
    order_violations: list
    tau_violations: list
    order_hypothesis_holds: bool
    sampled: int

    @property
    def passed(self):
        ok = not self.count_violations and not self.tau_violations
        if self.order_hypothesis_holds:
            ok = ok and not self.order_violations
        return ok


def cardinality_checks(
    T: Operator, eps, cfg=None, skip_hypothesis_check=False
) -> CardinalityReport:
    """Support-set cardinality and neighbor-count invariance under a
    globally preserving operator between spaces with equally many
    facets.

    Raises HypothesisUnmet when the facet counts differ, eps is not
    below the codomain's screening constant, or a budgeted witness
    search finds a violation (skippable to demonstrate what breaks).
    """
    cfg = _cfg(cfg)
    dom, cod = T.domain, T.codomain
    if dom.kind != "polyhedral" or cod.kind != "polyhedral":
        raise UnsupportedSpace("cardinality checks need polyhedral spaces")
    if len(dom.dual_vertices) != len(cod.dual_vertices):
        raise HypothesisUnmet("facet counts differ")
    if not skip_hypothesis_check:
        eps_y = orthogonality.epsilon_x(cod)
        if eps >= eps_y:
            raise HypothesisUnmet(f"eps={eps} is not below epsilon_X={eps_y}")
        w = witness_search_nonpreservation(
            T, eps, budget=cfg.hypothesis_budget, seed=cfg.seed
        )
        if w is not None:
            raise HypothesisUnmet("operator does not preserve at the given eps")

    rng = np.random.default_rng(cfg.seed)
    pts = _structured_domain_points(T, rng, cfg.samples, pullbacks=False)
    count_violations = []
    order_violations = []
    order_count_pairs = []
    for xpt in pts:
        img = T(xpt)
        if spaces.norm(cod, img) <= cfg.tol:
            count_violations.append((xpt, None, None))
            continue
        cx = len(spaces.support_set(dom, xpt))
        cy = len(spaces.support_set(cod, img))
        ox = spaces.smoothness_order(dom, xpt)
        oy = spaces.smoothness_order(cod, img)
        order_count_pairs.append((ox, cx))
        if cx != cy:
            count_violations.append((xpt, cx, cy))
        if ox != oy:
            order_violations.append((xpt, ox, oy))
    # the order-equality corollary needs counts strictly monotone in order
    by_order = {}
    for o, c in order_count_pairs:
        by_order.setdefault(o, set()).add(c)
    orders = sorted(by_order)
    hypothesis = all(
        max(by_order[a]) < min(by_order[b])
        for a, b in zip(orders[:-1], orders[1:])
    )

    fmap = facet_image_map(T, eps, cfg)
    tau_violations = []
    for j, entry in fmap.entries.items():
        if entry.image_label is None:
            tau_violations.append((j, None, None))
            continue
        td = cones.tau_cardinality(dom, j)
        tc = cones.tau_cardinality(cod, entry.image_label)
        if td != tc:
            tau_violations.append((j, td, tc))
    return CardinalityReport(
        count_violations=count_violations,
        order_violations=order_violations,
        tau_violations=tau_violations,
        order_hypothesis_holds=hypothesis,
        sampled=len(pts),
    )


@dataclass
class ConsecutiveVertexReport:
    hypothesis_met: bool
    vertex_images: list  # (i, matched vertex, scalar)
    consecutive: bool
    scalars_equal: bool
    max_scalar_spread: float

    @property
    def passed(self):
        return (
            self.hypothesis_met
            and self.consecutive
            and self.scalars_equal
            and all(m is not None for _, m, _ in self.vertex_images)
        )


def consecutive_vertex_check(space, T: Operator, eps, cfg=None):
    """On a regular polygon ball: images of vertices are positive
    multiples of vertices, consecutive stays consecutive, and all the
    scalars agree. Requires global preservation below the screening
    constant; a found violation flags the hypothesis instead.
    """
    cfg = _cfg(cfg)
    preset = space.preset or ""
    if not preset.startswith("regular_2n_gon("):
        raise UnsupportedSpace("consecutive-vertex check needs a regular polygon")
    k = len(space.vertices)
    hypothesis = True
    if eps >= orthogonality.epsilon_x(space):
        hypothesis = False
    elif witness_search_nonpreservation(
        T, eps, budget=cfg.hypothesis_budget, seed=cfg.seed
    ) is not None:
        hypothesis = False

    ang = np.arctan2(space.V[:, 1], space.V[:, 0])
    order = np.argsort(ang)
    ring = space.V[order]
    images = []
    match_tol = 1e-7
    for i in range(k):
        w = T(ring[i])
        nw = spaces.norm(space, w)
        if nw <= cfg.tol:
            images.append((i, None, 0.0))
            continue
        d = np.abs(ring - w / nw).max(axis=1)
        m = int(np.argmin(d))
        images.append((i, m if d[m] <= match_tol else None, float(nw)))
    consecutive = True
    for i in range(k):
        a = images[i][1]
        b = images[(i + 1) % k][1]
        if a is None or b is None:
            consecutive = False
            break
        if (b - a) % k not in (1, k - 1):
            consecutive = False
            break
    scalars = [s for _, m, s in images if m is not None]
    spread = (max(scalars) - min(scalars)) if scalars else math.inf
    scalars_equal = bool(scalars) and spread <= 1e-9 * (1.0 + max(scalars))
    return ConsecutiveVertexReport(
        hypothesis_met=hypothesis,
        vertex_images=images,
        consecutive=consecutive and len(scalars) == k,
        scalars_equal=scalars_equal,
        max_scalar_spread=float(spread),
    )


def counterexample_operator(family, n=None, p=None, eps=None) -> Operator:
    """The named operator families that beat the preservation threshold.

    lp(n, p, eps): diag(1 - eps/p, 1, ..., 1) on l_p^n;
    l1(n, eps): diag(1 - eps, 1, ..., 1) on l_1^n;
    linf3_local(eps): (x, y, z) -> (eps*x, x - y, y - z) on linf(3);
    octagon_to_linf2: (x, y) -> (x - y, x + y), octagon into linf(2).
    """
    if family == "lp":
        if eps is None or not 0.0 < eps < 1.0:
            raise OutOfRange("need 0 < eps < 1")
        if p is None or not 1.0 < float(p) < math.inf:
            raise OutOfRange("need finite p > 1")
        sp = spaces.preset_space("lp", n=n, p=float(p))
        M = np.eye(n)
        M[0, 0] = 1.0 - eps / float(p)
        return Operator(M, sp, sp)
    if family == "l1":
        if eps is None or not 0.0 < eps < 1.0:
            raise OutOfRange("need 0 < eps < 1")
        sp = spaces.preset_space("lp", n=n, p=1.0)
        M = np.eye(n)
        M[0, 0] = 1.0 - eps
        return Operator(M, sp, sp)
    if family == "linf3_local":
        if eps is None or not 0.0 < eps < 1.0:
            raise OutOfRange("need 0 < eps < 1")
        sp = spaces.preset_space("linf", 3)
        M = np.array([[eps, 0.0, 0.0], [1.0, -1.0, 0.0], [0.0, 1.0, -1.0]])
        return Operator(M, sp, sp)
    if family == "octagon_to_linf2":
        dom = spaces.preset_space("regular_2n_gon", 4)
        cod = spaces.preset_space("linf", 2)
        return Operator(np.array([[1.0, -1.0], [1.0, 1.0]]), dom, cod)
    raise OutOfRange(f"unknown operator family {family!r}")


def min_preserving_eps_at(T: Operator, x, lo=0.0, hi=1.0 - 1e-9, atol=1e-7, cfg=None):
    """Smallest eps at which preservation holds at x, by bisection on the
    exact at-check margin (monotone increasing in eps)."""
    cfg = _cfg(cfg)
    while hi - lo > atol:
        mid = 0.5 * (lo + hi)
        res = preserves_eps_at(T, x, mid, cfg)
        if res.margin >= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
