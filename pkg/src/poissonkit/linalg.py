"""Dense linear algebra over exact fields (Fraction or exact Scalar) and floats.

Matrices are lists of rows. Exact routines use Gauss-Jordan elimination with
an explicit zero test; float routines go through numpy's SVD with a relative
threshold.
"""
from fractions import Fraction

import numpy as np

from .scalars import Scalar

FLOAT_RTOL = 1e-9


def is_zero(x):
    if isinstance(x, Scalar):
        return x.is_zero()
    return x == 0


def has_float(rows):
    return any(isinstance(x, float) for r in rows for x in r)


def transpose(rows, ncols=None):
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*rows)]


def matmul(a, b):
    bt = transpose(b)
    return [[_dot(r, c) for c in bt] for r in a]


def matvec(a, v):
    return [_dot(r, v) for r in a]


def _dot(r, c):
    total = 0
    for x, y in zip(r, c):
        if isinstance(x, (int, Fraction)) and x == 0:
            continue
        total = total + x * y
    return total


def identity(n, one=1):
    return [[Fraction(one) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def rref(rows, ncols=None):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    n = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        if r >= len(m):
            break
        p = None
        for i in range(r, len(m)):
            if not is_zero(m[i][c]):
                p = i
                break
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], Scalar) else Scalar.const(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows):
    if not rows or not rows[0]:
        return 0
    if has_float(rows):
        return rank_float(rows)
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {v : A v = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if rows and has_float(rows):
        return nullspace_float(rows)
    red, piv = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    zero, one = _zero_one(rows)
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def left_nullspace(rows):
    """Basis of {w : w^T A = 0}."""
    nrows = len(rows)
    if nrows == 0:
        return []
    return nullspace(transpose(rows), nrows)


def _zero_one(rows):
    for r in rows:
        for x in r:
            if isinstance(x, Scalar):
                return Scalar.const(0), Scalar.const(1)
    return Fraction(0), Fraction(1)


def span_basis(vectors, dim=None):
    """Canonical basis (RREF rows) of the span of ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    if has_float(vectors):
        return orth_float(vectors)
    return rref(vectors, dim)[0]


def solve(rows, rhs):
    """One solution x of A x = b, or None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if has_float(aug):
        a = np.array(rows, dtype=float)
        b = np.array(rhs, dtype=float)
        x, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.linalg.norm(a @ x - b) > FLOAT_RTOL * max(1.0, np.linalg.norm(b)) * 1e3:
            return None
        return [float(t) for t in x]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    zero, _ = _zero_one(aug)
    x = [zero] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return x


def inverse(rows):
    n = len(rows)
    zero, one = _zero_one(rows)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red[:n]]


def det(rows):
    """Determinant by Gaussian elimination (exact entries)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    out = Fraction(1) if not any(isinstance(x, Scalar) for r in m for x in r) else Scalar.const(1)
    for c in range(n):
        p = next((i for i in range(c, n) if not is_zero(m[i][c])), None)
        if p is None:
            return out * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        out = out * m[c][c]
        for i in range(c + 1, n):
            if not is_zero(m[i][c]):
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return out * sign


def contains(basis, v):
    """Whether v lies in the span of ``basis``."""
    if not any(not is_zero(x) for x in v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == rank(basis)


def sum_dimension(a, b):
    rows = list(a) + list(b)
    return rank(rows) if rows else 0


def intersection_dim_kernel(a, b):
    """dim(span A ∩ span B) as the nullity of [A | -B] (columns are the vectors)."""
    a = [list(v) for v in a]
    b = [list(v) for v in b]
    if not a or not b:
        return 0
    a = span_basis(a)
    b = span_basis(b)
    cols = a + [[-x for x in v] for v in b]
    mat = transpose(cols)
    return len(nullspace(mat, len(cols)))


def intersection_dim_rank(a, b):
    """dim(span A ∩ span B) as dim A + dim B - dim(A + B)."""
    a = [list(v) for v in a]
    b = [list(v) for v in b]
    ra = rank(a) if a else 0
    rb = rank(b) if b else 0
    return ra + rb - sum_dimension(a, b)


def intersection_basis(a, b):
    a = span_basis(a)
    b = span_basis(b)
    if not a or not b:
        return []
    cols = a + [[-x for x in v] for v in b]
    ns = nullspace(transpose(cols), len(cols))
    out = []
    for coeffs in ns:
        vec = [0] * len(a[0])
        for c, v in zip(coeffs[: len(a)], a):
            vec = [s + c * x for s, x in zip(vec, v)]
        out.append(vec)
    return span_basis(out)


# float backend

def _svd(rows):
    a = np.array(rows, dtype=float)
    if a.size == 0:
        return a, np.zeros(0), np.zeros((0, 0)), 0
    u, s, vt = np.linalg.svd(a)
    scale = s[0] if s.size else 0.0
    r = int(np.sum(s > FLOAT_RTOL * max(scale, 1.0)))
    return u, s, vt, r


def rank_float(rows):
    return _svd(rows)[3]


def nullspace_float(rows):
    a = np.array(rows, dtype=float)
    _, _, vt, r = _svd(rows)
    n = a.shape[1]
    if vt.size == 0:
        return [list(map(float, row)) for row in np.eye(n)]
    return [list(map(float, row)) for row in vt[r:]]


def orth_float(vectors):
    _, _, vt, r = _svd(vectors)
    return [list(map(float, row)) for row in vt[:r]]


def to_float(rows):
    return [[float(x) for x in r] for r in rows]
