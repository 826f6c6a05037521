"""Backend-dispatching facade over the hot float kernels.

Import kernels from here; the numba/numpy choice is resolved per call so
tests and benchmarks can flip backends at runtime.
"""

import numpy as np

from . import backend
from . import _kernels_numpy as _np_impl


def _impl():
    if backend.using_numba():
        from . import _kernels_numba as _nb_impl

        return _nb_impl
    return _np_impl


def _f64(a):
    return np.ascontiguousarray(np.asarray(a, dtype=np.float64))


def poly_norms(D, X):
    return _impl().poly_norms(_f64(D), _f64(X))


def poly_support_margins(D, X, Y, eps, tol):
    return _impl().poly_support_margins(_f64(D), _f64(X), _f64(Y), float(eps), float(tol))


def lp_norms(X, p):
    return _impl().lp_norms(_f64(X), float(p))


def lp_semi_inner(U, V, p):
    return _impl().lp_semi_inner(_f64(U), _f64(V), float(p))


def lp_support_margins(X, Y, p, eps):
    return _impl().lp_support_margins(_f64(X), _f64(Y), float(p), float(eps))


def definitional_margins_poly(D, X, Y, eps, bracket_factor, iters):
    return _impl().definitional_margins_poly(
        _f64(D), _f64(X), _f64(Y), float(eps), float(bracket_factor), int(iters)
    )


def definitional_margins_lp(X, Y, p, eps, bracket_factor, iters):
    return _impl().definitional_margins_lp(
        _f64(X), _f64(Y), float(p), float(eps), float(bracket_factor), int(iters)
    )


def definitional_eps_star(D, p, X, Y, bracket_factor=2.0, inner_iters=90,
                          outer_iters=46):
    """Critical epsilon of the deficit test, rowwise; D xor p selects the norm."""
    impl = _impl()
    if impl is _np_impl:
        return impl.definitional_eps_star(
            None if D is None else _f64(D), p, _f64(X), _f64(Y),
            float(bracket_factor), int(inner_iters), int(outer_iters),
        )
    use_poly = D is not None
    Dm = _f64(D) if use_poly else np.zeros((1, np.asarray(X).shape[1]))
    return impl.definitional_eps_star(
        Dm, float(p if p is not None else 2.0), use_poly, _f64(X), _f64(Y),
        float(bracket_factor), int(inner_iters), int(outer_iters),
    )
