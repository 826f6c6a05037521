"""Facet-cone decomposition of a polyhedral unit ball.

Each dual vertex f labels the open convex cone of points whose only
supporting functional is f (the conical hull of the facet's relative
interior). Membership is decided through the support set, which is
exact in both arithmetic modes.
"""

from dataclasses import dataclass

import numpy as np

from . import geometry, spaces
from .errors import UnsupportedSpace, ZeroVector


def _require_polyhedral(space):
    if space.kind != "polyhedral":
        raise UnsupportedSpace("cone decomposition needs a polyhedral space")


def extreme_support_labels(space, x):
    """Dual-vertex indices of the extreme supporting functionals at x.

    A singleton label set means x lies in the open cone of that facet.
    """
    _require_polyhedral(space)
    return spaces.support_set(space, x).indices


@dataclass
class ConeRegion:
    label: spaces.Functional
    facet: tuple  # vertex indices
    representative: object  # facet centroid, a smooth point


def cone_region(space, j: int) -> ConeRegion:
    _require_polyhedral(space)
    return ConeRegion(
        label=space.dual_functional(j),
        facet=space.incidence[j],
        representative=space.representative(j),
    )


def conical_hull_membership(space, j: int, x) -> bool:
    """True iff x/||x|| lies in the relative interior of facet j,
    i.e. the label set of x is exactly {j}."""
    _require_polyhedral(space)
    labels = extreme_support_labels(space, x)
    return labels == [j]


def neighbors(space, j: int):
    """Dual-vertex indices whose facet shares a vertex with facet j.

    Two closed facets of a polytope meet, if at all, in a common face,
    which contains a vertex; so shared-vertex adjacency is exact. The
    facet itself is excluded and the antipodal facet can never share.
    """
    _require_polyhedral(space)
    mine = set(space.incidence[j])
    out = []
    for k, inc in enumerate(space.incidence):
        if k != j and mine & set(inc):
            out.append(k)
    return out


def facet_inradius(space, j: int) -> float:
    """Distance from the facet centroid to the facet's relative boundary.

    Every ridge of facet j lies on a neighboring facet's hyperplane
    {g . v = 1}; inside the affine hull of facet j the distance to that
    ridge is (1 - g(c)) / ||g projected onto the hull's directions||.
    """
    _require_polyhedral(space)
    D, V = space.D, space.V
    f = D[j]
    c = V[list(space.incidence[j])].mean(axis=0)
    fhat = f / np.linalg.norm(f)
    best = np.inf
    for k in neighbors(space, j):
        g = D[k]
        g_in = g - (g @ fhat) * fhat
        nrm = np.linalg.norm(g_in)
        if nrm < 1e-12:
            continue
        best = min(best, (1.0 - g @ c) / nrm)
    return float(best)


@dataclass
class CheckResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""


@dataclass
class RegionReport:
    label: int
    checks: list
    passed: bool

    def check(self, name):
        return next(c for c in self.checks if c.name == name)


def region_properties_check(space, j: int, samples: int = 200, seed: int = 0):
    """Constructive check bundle for the cone of facet j.

    nonempty/open/cone are witnessed at the facet centroid with
    perturbation radius inradius/4; covering and antipodal disjointness
    are sampled. Failures are reported, not raised.
    """
    _require_polyhedral(space)
    rng = np.random.default_rng(seed)
    n = space.dim
    tol = space.tol if not space.is_exact else 0.0
    checks = []

    def gap(pt):
        # margin of {j} being the strict label: best value minus runner-up
        vals = space.D @ np.asarray(pt, dtype=float)
        others = np.delete(vals, j)
        return float(vals[j] - others.max())

    rep = np.asarray(
        [float(c) for c in space.representative(j)]
        if space.is_exact
        else space.representative(j)
    )
    rep_gap = gap(rep)
    checks.append(
        CheckResult(
            "nonempty",
            extreme_support_labels(space, rep) == [j],
            rep_gap,
            "facet centroid is a smooth interior point",
        )
    )

    delta = facet_inradius(space, j) / 4.0
    worst = np.inf
    ok = True
    for _ in range(samples):
        u = rng.normal(size=n)
        u /= np.linalg.norm(u)
        pt = rep + delta * u
        worst = min(worst, gap(pt))
        if extreme_support_labels(space, pt) != [j]:
            ok = False
    checks.append(
        CheckResult("open", ok, worst, f"perturbation radius {delta:.3g}")
    )

    verts = space.V[list(space.incidence[j])]
    ok = True
    worst = np.inf
    for _ in range(samples):
        wa = rng.dirichlet(np.ones(len(verts)))
        wb = rng.dirichlet(np.ones(len(verts)))
        a = rng.uniform(0.1, 3.0) * (wa @ verts)
        b = rng.uniform(0.1, 3.0) * (wb @ verts)
        alpha, beta = rng.uniform(0.1, 3.0, size=2)
        combo = alpha * a + beta * b
        worst = min(worst, gap(combo))
        if extreme_support_labels(space, combo) != [j]:
            ok = False
    checks.append(
        CheckResult("cone", ok, worst, "positive combinations stay labeled")
    )

    ok = True
    worst = np.inf
    for _ in range(samples):
        x = rng.normal(size=n)
        nx = spaces.norm(space, x)
        if nx <= max(tol, 1e-12):
            continue
        labels = extreme_support_labels(space, x)
        if not labels:
            ok = False
        worst = min(worst, nx)
    checks.append(
        CheckResult("covering", ok, worst, "every nonzero sample has a label")
    )

    opp = space.opposite_dual(j)
    ok = True
    worst = np.inf
    for _ in range(samples):
        x = rng.normal(size=n)
        nx = spaces.norm(space, x)
        if nx <= max(tol, 1e-12):
            continue
        labels = extreme_support_labels(space, x)
        if j in labels and opp in labels:
            ok = False
        worst = min(worst, nx * (1.0 - tol) - tol)
    checks.append(
        CheckResult(
            "antipodal_disjoint", ok, worst,
            "no sample is supported by both f and -f",
        )
    )

    return RegionReport(label=j, checks=checks, passed=all(c.passed for c in checks))


def tau_cardinality(space, j: int) -> int:
    """Number of neighboring regions of facet j (the region itself excluded)."""
    return len(neighbors(space, j))
