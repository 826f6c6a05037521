"""Numba @njit twins of the numpy kernels.

Same contracts as _kernels_numpy; plain loops, compiled and cached.
"""

import numpy as np
from numba import njit

_OPTS = dict(cache=True, fastmath=False, nogil=True)


@njit(**_OPTS)
def _poly_norm_1(D, x):
    best = -1e300
    for i in range(D.shape[0]):
        s = 0.0
        for j in range(D.shape[1]):
            s += D[i, j] * x[j]
        if s > best:
            best = s
    return best


@njit(**_OPTS)
def poly_norms(D, X):
    out = np.empty(X.shape[0])
    for b in range(X.shape[0]):
        out[b] = _poly_norm_1(D, X[b])
    return out


@njit(**_OPTS)
def poly_support_margins(D, X, Y, eps, tol):
    B = X.shape[0]
    m = D.shape[0]
    out = np.empty(B)
    vx = np.empty(m)
    vy = np.empty(m)
    for b in range(B):
        nx = -1e300
        ny = -1e300
        for i in range(m):
            sx = 0.0
            sy = 0.0
            for j in range(D.shape[1]):
                sx += D[i, j] * X[b, j]
                sy += D[i, j] * Y[b, j]
            vx[i] = sx
            vy[i] = sy
            if sx > nx:
                nx = sx
            if sy > ny:
                ny = sy
        cut = nx - tol * (1.0 + nx)
        lo = 1e300
        hi = -1e300
        for i in range(m):
            if vx[i] >= cut:
                if vy[i] < lo:
                    lo = vy[i]
                if vy[i] > hi:
                    hi = vy[i]
        minabs = lo
        if -hi > minabs:
            minabs = -hi
        if minabs < 0.0:
            minabs = 0.0
        out[b] = eps * ny - minabs
    return out


@njit(**_OPTS)
def _lp_norm_1(x, p):
    s = 0.0
    if p == 1.0:
        for j in range(x.shape[0]):
            s += abs(x[j])
        return s
    for j in range(x.shape[0]):
        s += abs(x[j]) ** p
    return s ** (1.0 / p)


@njit(**_OPTS)
def lp_norms(X, p):
    out = np.empty(X.shape[0])
    for b in range(X.shape[0]):
        out[b] = _lp_norm_1(X[b], p)
    return out


@njit(**_OPTS)
def lp_semi_inner(U, V, p):
    out = np.empty(U.shape[0])
    for b in range(U.shape[0]):
        nv = _lp_norm_1(V[b], p)
        if nv == 0.0:
            out[b] = 0.0
            continue
        num = 0.0
        for j in range(U.shape[1]):
            v = V[b, j]
            if v != 0.0:
                sgn = 1.0 if v > 0.0 else -1.0
                num += U[b, j] * sgn * abs(v) ** (p - 1.0)
        out[b] = num / nv ** (p - 2.0)
    return out


@njit(**_OPTS)
def lp_support_margins(X, Y, p, eps):
    out = np.empty(X.shape[0])
    for b in range(X.shape[0]):
        nx = _lp_norm_1(X[b], p)
        ny = _lp_norm_1(Y[b], p)
        fy = 0.0
        for j in range(X.shape[1]):
            xv = X[b, j]
            if xv != 0.0:
                sgn = 1.0 if xv > 0.0 else -1.0
                fy += Y[b, j] * sgn * abs(xv) ** (p - 1.0)
        fy /= nx ** (p - 1.0)
        out[b] = eps * ny - abs(fy)
    return out


@njit(**_OPTS)
def _phi_poly(D, x, y, lam, eps, nx, ny):
    n = x.shape[0]
    z = np.empty(n)
    for j in range(n):
        z[j] = x[j] + lam * y[j]
    nrm = _poly_norm_1(D, z)
    return nrm * nrm - nx * nx + 2.0 * eps * nx * abs(lam) * ny


@njit(**_OPTS)
def _phi_lp(p, x, y, lam, eps, nx, ny):
    n = x.shape[0]
    z = np.empty(n)
    for j in range(n):
        z[j] = x[j] + lam * y[j]
    nrm = _lp_norm_1(z, p)
    return nrm * nrm - nx * nx + 2.0 * eps * nx * abs(lam) * ny


@njit(**_OPTS)
def definitional_margins_poly(D, X, Y, eps, bracket_factor, iters):
    B = X.shape[0]
    out = np.empty(B)
    for b in range(B):
        x = X[b]
        y = Y[b]
        nx = _poly_norm_1(D, x)
        ny = _poly_norm_1(D, y)
        L = bracket_factor * (1.0 + eps) * 2.0 * nx / ny
        best = _phi_poly(D, x, y, 0.0, eps, nx, ny)
        for side in range(2):
            lo = -L if side == 0 else 0.0
            hi = 0.0 if side == 0 else L
            for _ in range(iters):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                if _phi_poly(D, x, y, m1, eps, nx, ny) <= _phi_poly(
                    D, x, y, m2, eps, nx, ny
                ):
                    hi = m2
                else:
                    lo = m1
            v = _phi_poly(D, x, y, 0.5 * (lo + hi), eps, nx, ny)
            if v < best:
                best = v
        out[b] = best / (nx * nx)
    return out


@njit(**_OPTS)
def _definitional_min_1(D, p, use_poly, x, y, eps, bracket_factor, iters):
    if use_poly:
        nx = _poly_norm_1(D, x)
        ny = _poly_norm_1(D, y)
    else:
        nx = _lp_norm_1(x, p)
        ny = _lp_norm_1(y, p)
    L = bracket_factor * 4.0 * nx / ny
    if use_poly:
        best = _phi_poly(D, x, y, 0.0, eps, nx, ny)
    else:
        best = _phi_lp(p, x, y, 0.0, eps, nx, ny)
    for side in range(2):
        lo = -L if side == 0 else 0.0
        hi = 0.0 if side == 0 else L
        for _ in range(iters):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if use_poly:
                v1 = _phi_poly(D, x, y, m1, eps, nx, ny)
                v2 = _phi_poly(D, x, y, m2, eps, nx, ny)
            else:
                v1 = _phi_lp(p, x, y, m1, eps, nx, ny)
                v2 = _phi_lp(p, x, y, m2, eps, nx, ny)
            if v1 <= v2:
                hi = m2
            else:
                lo = m1
        mid = 0.5 * (lo + hi)
        if use_poly:
            v = _phi_poly(D, x, y, mid, eps, nx, ny)
        else:
            v = _phi_lp(p, x, y, mid, eps, nx, ny)
        if v < best:
            best = v
    return best / (nx * nx)


@njit(**_OPTS)
def definitional_eps_star(D, p, use_poly, X, Y, bracket_factor, inner_iters, outer_iters):
    B = X.shape[0]
    out = np.empty(B)
    for b in range(B):
        lo = 0.0
        hi = 1.0 + 1e-9
        for _ in range(outer_iters):
            mid = 0.5 * (lo + hi)
            d = _definitional_min_1(
                D, p, use_poly, X[b], Y[b], mid, bracket_factor, inner_iters
            )
            if d >= -1e-14:
                hi = mid
            else:
                lo = mid
        out[b] = 0.5 * (lo + hi)
    return out


@njit(**_OPTS)
def definitional_margins_lp(X, Y, p, eps, bracket_factor, iters):
    B = X.shape[0]
    out = np.empty(B)
    for b in range(B):
        x = X[b]
        y = Y[b]
        nx = _lp_norm_1(x, p)
        ny = _lp_norm_1(y, p)
        L = bracket_factor * (1.0 + eps) * 2.0 * nx / ny
        best = _phi_lp(p, x, y, 0.0, eps, nx, ny)
        for side in range(2):
            lo = -L if side == 0 else 0.0
            hi = 0.0 if side == 0 else L
            for _ in range(iters):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                if _phi_lp(p, x, y, m1, eps, nx, ny) <= _phi_lp(
                    p, x, y, m2, eps, nx, ny
                ):
                    hi = m2
                else:
                    lo = m1
            v = _phi_lp(p, x, y, 0.5 * (lo + hi), eps, nx, ny)
            if v < best:
                best = v
        out[b] = best / (nx * nx)
    return out
