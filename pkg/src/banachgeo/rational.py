"""Exact rational linear algebra helpers (Fraction-based, desk scale only)."""

from fractions import Fraction


def to_fraction(value):
    """Coerce ints, strings like "3/4", and floats (exactly) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value)


def frac_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def dot(a, b):
    return sum(ai * bi for ai, bi in zip(a, b))


def solve(matrix, rhs):
    """Solve an exact square system by Gaussian elimination.

    Returns the solution tuple, or None when the matrix is singular.
    """
    n = len(rhs)
    aug = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if aug[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return tuple(row[n] for row in aug)


def rank(rows) -> int:
    """Exact rank of a list of Fraction rows."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rk = 0
    for col in range(ncols):
        pivot = None
        for r in range(rk, len(work)):
            if work[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        work[rk], work[pivot] = work[pivot], work[rk]
        inv = Fraction(1, 1) / work[rk][col]
        work[rk] = [v * inv for v in work[rk]]
        for r in range(len(work)):
            if r != rk and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[rk])]
        rk += 1
        if rk == len(work):
            break
    return rk


def kernel_vector(rows, dim):
    """One nonzero exact kernel vector of the row system, or None if trivial."""
    work = [list(r) for r in rows]
    pivots = []
    rk = 0
    for col in range(dim):
        pivot = None
        for r in range(rk, len(work)):
            if work[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        work[rk], work[pivot] = work[pivot], work[rk]
        inv = Fraction(1, 1) / work[rk][col]
        work[rk] = [v * inv for v in work[rk]]
        for r in range(len(work)):
            if r != rk and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[rk])]
        pivots.append(col)
        rk += 1
    free = [c for c in range(dim) if c not in pivots]
    if not free:
        return None
    # set the first free variable to 1, back-substitute the pivots
    f0 = free[0]
    vec = [Fraction(0)] * dim
    vec[f0] = Fraction(1)
    for r, pc in enumerate(pivots):
        vec[pc] = -work[r][f0]
    return tuple(vec)
