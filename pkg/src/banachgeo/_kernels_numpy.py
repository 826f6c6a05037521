"""Pure-numpy kernel implementations (fallback backend).

All kernels are batched over the leading axis and operate on float64
arrays. `D` always holds the full symmetric set of dual-ball extreme
functionals as rows, so `max(D @ x)` is the norm.
"""

import numpy as np


def poly_norms(D, X):
    return (X @ D.T).max(axis=1)


def poly_support_margins(D, X, Y, eps, tol):
    """Margin of the support-functional test, rowwise.

    margin = eps*||y|| - min over the support face J(x) of |f(y)|,
    with J(x) the dual rows within tol*(1+||x||) of max. Positive
    margin means the approximate-orthogonality test passes.
    """
    vx = X @ D.T
    nx = vx.max(axis=1)
    achieving = vx >= (nx - tol * (1.0 + nx))[:, None]
    vy = Y @ D.T
    ny = vy.max(axis=1)
    lo = np.where(achieving, vy, np.inf).min(axis=1)
    hi = np.where(achieving, vy, -np.inf).max(axis=1)
    minabs = np.maximum(np.maximum(lo, -hi), 0.0)
    return eps * ny - minabs


def lp_norms(X, p):
    if p == 1.0:
        return np.abs(X).sum(axis=1)
    return (np.abs(X) ** p).sum(axis=1) ** (1.0 / p)


def lp_semi_inner(U, V, p):
    """Batched semi-inner product compatible with the l_p norm.

    [u, v]_p = sum_i u_i sgn(v_i) |v_i|^(p-1) / ||v||^(p-2); zero rows of
    V give 0.
    """
    av = np.abs(V)
    nv = lp_norms(V, p)
    num = (U * np.sign(V) * av ** (p - 1.0)).sum(axis=1)
    out = np.zeros_like(num)
    nz = nv > 0.0
    out[nz] = num[nz] / nv[nz] ** (p - 2.0)
    return out


def lp_support_margins(X, Y, p, eps):
    # unique support functional of x: f(y) = [y,x]_p / ||x||
    ax = np.abs(X)
    nx = lp_norms(X, p)
    fy = (Y * np.sign(X) * ax ** (p - 1.0)).sum(axis=1) / nx ** (p - 1.0)
    ny = lp_norms(Y, p)
    return eps * ny - np.abs(fy)


def _norms_shifted(D, p, X, Y, lam):
    Z = X + lam[:, None] * Y
    if D is not None:
        return poly_norms(D, Z)
    return lp_norms(Z, p)


def definitional_margins(D, p, X, Y, eps, bracket_factor, iters):
    """Rowwise minimum of the deficit function

        phi(lam) = ||x + lam*y||^2 + 2*eps*||x||*|lam|*||y|| - ||x||^2

    normalized by ||x||^2. phi is convex on each half-line; a ternary
    search on [-L, 0] and [0, L] brackets the minimizer because
    ||x + lam*y|| >= |lam|*||y|| - ||x|| forces phi > 0 outside
    L = bracket_factor*(1+eps)*2*||x||/||y||.

    Exactly one of D (dual rows, polyhedral) and p (exponent) is used.
    """
    if D is not None:
        nx = poly_norms(D, X)
        ny = poly_norms(D, Y)
    else:
        nx = lp_norms(X, p)
        ny = lp_norms(Y, p)

    def phi(lam):
        nrm = _norms_shifted(D, p, X, Y, lam)
        return nrm * nrm - nx * nx + 2.0 * eps * nx * np.abs(lam) * ny

    L = bracket_factor * (1.0 + eps) * 2.0 * nx / ny
    best = phi(np.zeros_like(nx))
    for sign in (-1.0, 1.0):
        lo = np.zeros_like(L) if sign > 0 else -L
        hi = L.copy() if sign > 0 else np.zeros_like(L)
        for _ in range(iters):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            keep_left = phi(m1) <= phi(m2)
            hi = np.where(keep_left, m2, hi)
            lo = np.where(keep_left, lo, m1)
        best = np.minimum(best, phi(0.5 * (lo + hi)))
    return best / (nx * nx)


def definitional_margins_poly(D, X, Y, eps, bracket_factor, iters):
    return definitional_margins(D, None, X, Y, eps, bracket_factor, iters)


def definitional_margins_lp(X, Y, p, eps, bracket_factor, iters):
    return definitional_margins(None, p, X, Y, eps, bracket_factor, iters)


def definitional_eps_star(D, p, X, Y, bracket_factor, inner_iters, outer_iters):
    """Rowwise critical epsilon of the deficit test, by bisection.

    The deficit minimum is monotone increasing in eps, so the smallest
    eps with nonnegative deficit is well defined; it equals the minimal
    |f(y)| over the support face divided by ||y||, but is computed here
    purely from norm evaluations.
    """
    lo = np.zeros(X.shape[0])
    hi = np.full(X.shape[0], 1.0 + 1e-9)
    for _ in range(outer_iters):
        mid = 0.5 * (lo + hi)
        deficits = _definitional_min_rowwise(
            D, p, X, Y, mid, bracket_factor, inner_iters
        )
        ok = deficits >= -1e-14
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    return 0.5 * (lo + hi)


def _definitional_min_rowwise(D, p, X, Y, eps_row, bracket_factor, iters):
    # same ternary search as definitional_margins but with per-row eps
    if D is not None:
        nx = poly_norms(D, X)
        ny = poly_norms(D, Y)
    else:
        nx = lp_norms(X, p)
        ny = lp_norms(Y, p)

    def phi(lam):
        nrm = _norms_shifted(D, p, X, Y, lam)
        return nrm * nrm - nx * nx + 2.0 * eps_row * nx * np.abs(lam) * ny

    L = bracket_factor * 2.0 * 2.0 * nx / ny
    best = phi(np.zeros_like(nx))
    for sign in (-1.0, 1.0):
        lo = np.zeros_like(L) if sign > 0 else -L
        hi = L.copy() if sign > 0 else np.zeros_like(L)
        for _ in range(iters):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            keep_left = phi(m1) <= phi(m2)
            hi = np.where(keep_left, m2, hi)
            lo = np.where(keep_left, lo, m1)
        best = np.minimum(best, phi(0.5 * (lo + hi)))
    return best / (nx * nx)
