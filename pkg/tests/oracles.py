"""Independent reference implementations used only by the tests.

Each oracle takes a different route from the library code it checks:
Schouten via the decomposable-wedge formula built on vector-field brackets,
Lie derivatives of forms via Cartan's formula, intersections via sympy
matrices, toric faces via brute-force Fourier-Motzkin, and so on.
"""
from fractions import Fraction
from itertools import combinations, product

import sympy

from poissonkit.calculus import Multivector, d, interior
from poissonkit.scalars import Scalar


# Schouten bracket via decomposables

def _vf_bracket(chart, x, y):
    """[X, Y]^j = X(Y^j) - Y(X^j) on component lists."""
    n = chart.dim
    out = []
    for j in range(n):
        t = Scalar.const(0)
        for i in range(n):
            v = chart.variables[i]
            t = t + x[i] * y[j].diff(v) - y[i] * x[j].diff(v)
        out.append(t)
    return out


def _as_mv(chart, comps):
    return Multivector(chart, 1, {(i,): c for i, c in enumerate(comps)})


def _wedge_all(chart, fields, degree_zero=None):
    acc = Multivector(chart, 0, {(): degree_zero if degree_zero is not None else 1})
    for f in fields:
        acc = acc.wedge(f)
    return acc


def _decompose(mv):
    """Terms (f, [vector fields as component lists]) with f d_I = (f d_i1) ^ d_i2 ^ ..."""
    chart = mv.chart
    n = chart.dim
    zero, one = Scalar.const(0), Scalar.const(1)
    terms = []
    for idx, c in mv.items():
        if not idx:
            terms.append((c, []))
            continue
        vs = []
        for k, i in enumerate(idx):
            comps = [zero] * n
            comps[i] = c if k == 0 else one
            vs.append(comps)
        terms.append((None, vs))
    return terms


def _pair_bracket(chart, ta, tb, p, q):
    fa, xs = ta
    fb, ys = tb
    n = chart.dim
    zero = Multivector.zero(chart, p + q - 1)
    if p == 0 and q == 0:
        return zero
    if p == 0:
        # [f, Q] = -(-1)^(q-1) [Q, f]
        r = _pair_bracket(chart, tb, ta, q, p)
        return -r if (q - 1) % 2 == 0 else r
    if q == 0:
        total = zero
        for i in range(p):
            xi = xs[i]
            val = sum((xi[k] * fb.diff(chart.variables[k]) for k in range(n)), Scalar.const(0))
            rest = [_as_mv(chart, xs[k]) for k in range(p) if k != i]
            term = _wedge_all(chart, rest, val)
            total = total + (term if (p - 1 - i) % 2 == 0 else -term)
        return total
    total = zero
    for i in range(p):
        for j in range(q):
            br = _as_mv(chart, _vf_bracket(chart, xs[i], ys[j]))
            rest = [_as_mv(chart, xs[k]) for k in range(p) if k != i] + \
                   [_as_mv(chart, ys[k]) for k in range(q) if k != j]
            term = br.wedge(_wedge_all(chart, rest))
            total = total + (term if (i + j) % 2 == 0 else -term)
    return total


def schouten_oracle(a, b):
    chart = a.chart
    total = Multivector.zero(chart, a.degree + b.degree - 1)
    for ta in _decompose(a):
        for tb in _decompose(b):
            total = total + _pair_bracket(chart, ta, tb, a.degree, b.degree)
    return total


# Lie derivative of forms via Cartan

def lie_form_cartan(x, omega):
    if omega.degree == 0:
        return interior(x, d(omega))
    return d(interior(x, omega)) + interior(x, d(omega))


# sympy based linear algebra

def sympy_rank(rows):
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows]).rank()


def sympy_intersection_dim(a, b):
    """dim(span A ∩ span B) via column spaces and sympy's nullspace."""
    if not a or not b:
        return 0
    A = sympy.Matrix([[sympy.Rational(x) for x in v] for v in a]).T
    B = sympy.Matrix([[sympy.Rational(x) for x in v] for v in b]).T
    ca = A.columnspace()
    cb = B.columnspace()
    if not ca or not cb:
        return 0
    M = sympy.Matrix.hstack(*ca, *[-c for c in cb])
    return len(M.nullspace())


# brute force faces of {x : <nu_j, x> + lambda_j >= 0}

def _fm_feasible(eqs, strict, nonstrict):
    """Fourier-Motzkin feasibility over QQ.

    eqs: rows (a, c) meaning a.x + c = 0; strict: a.x + c > 0; nonstrict: >= 0.
    """
    eqs = [(list(a), Fraction(c)) for a, c in eqs]
    ineqs = [(list(a), Fraction(c), True) for a, c in strict] + [(list(a), Fraction(c), False) for a, c in nonstrict]
    if eqs:
        n = len(eqs[0][0])
    elif ineqs:
        n = len(ineqs[0][0])
    else:
        return True
    # eliminate equalities by substitution
    while eqs:
        a, c = eqs.pop()
        piv = next((k for k in range(n) if a[k] != 0), None)
        if piv is None:
            if c != 0:
                return False
            continue

        def sub(row, rc):
            f = Fraction(row[piv]) / a[piv]
            return [x - f * y for x, y in zip(row, a)], rc - f * c
        eqs = [sub(r, rc) for r, rc in eqs]
        ineqs = [(*sub(r, rc), s) for r, rc, s in ineqs]
    for k in range(n):
        pos, neg, rest = [], [], []
        for r, rc, s in ineqs:
            if r[k] > 0:
                pos.append((r, rc, s))
            elif r[k] < 0:
                neg.append((r, rc, s))
            else:
                rest.append((r, rc, s))
        for rp, cp, sp in pos:
            for rn, cn, sn in neg:
                fp, fn = -rn[k], rp[k]
                row = [fp * x + fn * y for x, y in zip(rp, rn)]
                rest.append((row, fp * cp + fn * cn, sp or sn))
        # drop exact duplicates to limit growth
        seen = {}
        for r, rc, s in rest:
            key = (tuple(r), rc)
            seen[key] = seen.get(key, False) or s
        ineqs = [(list(k2[0]), k2[1], s) for k2, s in seen.items()]
    for r, rc, s in ineqs:
        if s and not rc > 0:
            return False
        if not s and not rc >= 0:
            return False
    return True


def brute_force_faces(normals, constants):
    """All subsets I such that {<nu_i,x>+l_i = 0 for i in I, > 0 otherwise} is nonempty."""
    dcount = len(normals)
    out = []
    for mask in range(1 << dcount):
        eqs = [(normals[j], constants[j]) for j in range(dcount) if mask >> j & 1]
        strict = [(normals[j], constants[j]) for j in range(dcount) if not mask >> j & 1]
        if _fm_feasible(eqs, strict, []):
            out.append(frozenset(j for j in range(dcount) if mask >> j & 1))
    return out


# Gauss-rational complex matrices as sympy objects

def to_sympy_complex(mat):
    return sympy.Matrix([[sympy.Rational(re) + sympy.I * sympy.Rational(im) for re, im in row] for row in mat])


def finite_difference(f, point, i, h=1e-5):
    up = list(point)
    dn = list(point)
    up[i] += h
    dn[i] -= h
    return (f(up) - f(dn)) / (2 * h)


def all_sign_vectors(n):
    return list(product((-1, 1), repeat=n))


def subsets(n, k):
    return list(combinations(range(n), k))
