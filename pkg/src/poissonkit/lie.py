"""Finite-dimensional Lie algebras, Manin triples and positivity of constant bivectors."""
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
import sympy

from . import linalg
from .calculus import Multivector, is_poisson, lie_derivative, schouten
from .errors import PoissonKitError, PreconditionError

F0 = Fraction(0)
F1 = Fraction(1)


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class LieAlgebra:
    """Structure constants: bracket(e_i, e_j) = sum_k c[i][j][k] e_k."""

    def __init__(self, constants, labels=None):
        self.c = [[[_frac(x) for x in vec] for vec in row] for row in constants]
        self.dim = len(self.c)
        self.labels = list(labels) if labels else [f"e{i + 1}" for i in range(self.dim)]

    @classmethod
    def from_brackets(cls, dim, brackets, labels=None):
        c = [[[F0] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, coeffs in brackets:
            vec = [_frac(x) for x in coeffs]
            c[i][j] = vec
            c[j][i] = [-x for x in vec]
        return cls(c, labels)

    @classmethod
    def abelian(cls, dim):
        return cls([[[F0] * dim for _ in range(dim)] for _ in range(dim)])

    @classmethod
    def so3(cls):
        c = [[[F0] * 3 for _ in range(3)] for _ in range(3)]
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            c[i][j][k] = F1
            c[j][i][k] = -F1
        return cls(c, ["L1", "L2", "L3"])

    def bracket(self, u, v):
        out = [F0] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                ab = a * b
                for k, x in enumerate(self.c[i][j]):
                    if x:
                        out[k] += ab * x
        return out

    def basis(self, i):
        return [F1 if k == i else F0 for k in range(self.dim)]

    def ad(self, v):
        """Matrix with column j the coordinates of [v, e_j] (acts on column vectors)."""
        cols = [self.bracket(v, self.basis(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]


@dataclass
class AlgebraValidation:
    ok: bool
    antisymmetry: list = field(default_factory=list)
    jacobi: list = field(default_factory=list)


def validate_algebra(alg):
    anti = []
    for i in range(alg.dim):
        for j in range(alg.dim):
            res = [a + b for a, b in zip(alg.c[i][j], alg.c[j][i])]
            if any(res):
                anti.append({"pair": (alg.labels[i], alg.labels[j]), "residual": [str(x) for x in res]})
    jac = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            for k in range(j + 1, alg.dim):
                ei, ej, ek = alg.basis(i), alg.basis(j), alg.basis(k)
                r = [a + b + c for a, b, c in zip(alg.bracket(ei, alg.bracket(ej, ek)),
                                                  alg.bracket(ej, alg.bracket(ek, ei)),
                                                  alg.bracket(ek, alg.bracket(ei, ej)))]
                if any(r):
                    jac.append({"triple": (alg.labels[i], alg.labels[j], alg.labels[k]),
                                "residual": [str(x) for x in r]})
    return AlgebraValidation(not anti and not jac, anti, jac)


class BilinearForm:
    def __init__(self, matrix):
        self.m = [[_frac(x) for x in row] for row in matrix]

    def __call__(self, u, v):
        return sum((u[i] * self.m[i][j] * v[j] for i in range(len(u)) if u[i]
                    for j in range(len(v)) if v[j]), F0)

    def is_symmetric(self):
        n = len(self.m)
        return all(self.m[i][j] == self.m[j][i] for i in range(n) for j in range(n))

    def is_nondegenerate(self):
        return linalg.rank(self.m) == len(self.m)

    def is_invariant(self, alg):
        n = alg.dim
        for u, v, w in product(range(n), repeat=3):
            eu, ev, ew = alg.basis(u), alg.basis(v), alg.basis(w)
            if self(alg.bracket(eu, ev), ew) + self(ev, alg.bracket(eu, ew)) != 0:
                return False
        return True


class Subspace:
    def __init__(self, parent_dim, vectors):
        rows = [[_frac(x) for x in v] for v in vectors]
        self.n = parent_dim
        self.basis = linalg.span_basis(rows, parent_dim) if rows else []

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        if not any(v):
            return True
        return bool(self.basis) and linalg.contains(self.basis, v)

    def contains_all(self, vs):
        return all(self.contains(v) for v in vs)

    def __add__(self, other):
        return Subspace(self.n, self.basis + other.basis)

    def intersect(self, other):
        return Subspace(self.n, linalg.intersection_basis(self.basis, other.basis)
                        if self.basis and other.basis else [])

    def __eq__(self, other):
        return self.n == other.n and self.basis == other.basis

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.n})"


def bracket_space(alg, a, b):
    return [alg.bracket(u, v) for u in a.basis for v in b.basis]


def is_subalgebra(alg, s):
    return s.contains_all(bracket_space(alg, s, s))


def annihilator_in(pairing, k, inside):
    """{y in inside : <y, k> = 0}."""
    if not inside.basis:
        return Subspace(inside.n, [])
    if not k.basis:
        return inside
    system = [[pairing(y, x) for y in inside.basis] for x in k.basis]
    coeffs = linalg.nullspace(system, inside.dim)
    return Subspace(inside.n, [[sum((c[r] * inside.basis[r][i] for r in range(inside.dim)), F0)
                                for i in range(inside.n)] for c in coeffs])


@dataclass
class ManinTriple:
    algebra: LieAlgebra
    pairing: BilinearForm
    g: Subspace
    h: Subspace
    parts: dict = field(default_factory=dict)
    matrices: list = None      # basis elements as complex matrices, when realised
    n: int = None


def manin_check(t):
    alg = t.algebra
    d = alg.dim
    checks = {
        "valid_algebra": validate_algebra(alg).ok,
        "pairing_symmetric": t.pairing.is_symmetric(),
        "pairing_nondegenerate": t.pairing.is_nondegenerate(),
        "pairing_invariant": t.pairing.is_invariant(alg),
        "g_subalgebra": is_subalgebra(alg, t.g),
        "h_subalgebra": is_subalgebra(alg, t.h),
        "g_isotropic": all(t.pairing(u, v) == 0 for u in t.g.basis for v in t.g.basis),
        "h_isotropic": all(t.pairing(u, v) == 0 for u in t.h.basis for v in t.h.basis),
        "g_half_dimension": 2 * t.g.dim == d,
        "h_half_dimension": 2 * t.h.dim == d,
        "transversal": (t.g + t.h).dim == d and t.g.intersect(t.h).dim == 0,
    }
    return checks


# Gaussian-rational matrices

class CMatrix:
    """n x n matrix with entries re + i*im, re and im rational."""

    def __init__(self, re, im=None):
        self.re = [[_frac(x) for x in row] for row in re]
        n = len(self.re)
        self.im = [[_frac(x) for x in row] for row in im] if im is not None else [[F0] * n for _ in range(n)]
        self.n = n

    @classmethod
    def unit(cls, n, i, j, scale=(1, 0)):
        re = [[F0] * n for _ in range(n)]
        im = [[F0] * n for _ in range(n)]
        re[i][j] = _frac(scale[0])
        im[i][j] = _frac(scale[1])
        return cls(re, im)

    @classmethod
    def identity(cls, n):
        return cls([[F1 if i == j else F0 for j in range(n)] for i in range(n)])

    def __add__(self, o):
        return CMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.re, o.re)],
                       [[a + b for a, b in zip(r, s)] for r, s in zip(self.im, o.im)])

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, re, im=0):
        re, im = _frac(re), _frac(im)
        return CMatrix([[re * a - im * b for a, b in zip(r, s)] for r, s in zip(self.re, self.im)],
                       [[re * b + im * a for a, b in zip(r, s)] for r, s in zip(self.re, self.im)])

    def __matmul__(self, o):
        ac = linalg.matmul(self.re, o.re)
        bd = linalg.matmul(self.im, o.im)
        ad = linalg.matmul(self.re, o.im)
        bc = linalg.matmul(self.im, o.re)
        return CMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(ac, bd)],
                       [[a + b for a, b in zip(r, s)] for r, s in zip(ad, bc)])

    def adjoint(self):
        return CMatrix(linalg.transpose(self.re, self.n), [[-x for x in row] for row in linalg.transpose(self.im, self.n)])

    def trace(self):
        return sum((self.re[i][i] for i in range(self.n)), F0), sum((self.im[i][i] for i in range(self.n)), F0)

    def flat(self):
        return [x for row in self.re for x in row] + [x for row in self.im for x in row]

    def is_unitary(self):
        return (self @ self.adjoint()) == CMatrix.identity(self.n)

    def __eq__(self, o):
        return self.re == o.re and self.im == o.im

    def to_complex(self):
        return np.array(self.re, dtype=float) + 1j * np.array(self.im, dtype=float)


def _coords(basis_flat, target):
    """Coordinates of a flattened matrix in a list of flattened basis matrices."""
    sol = linalg.solve(linalg.transpose(basis_flat, len(basis_flat[0])), target)
    if sol is None:
        raise PoissonKitError("matrix is not in the span of the basis")
    return sol


def _sl_basis(n):
    """Real basis of sl(n, C): su(n) part then the a + n_plus part, with labels and parts."""
    g, t = [], []
    labels_g, labels_h = [], []
    for k in range(n - 1):
        m = CMatrix.unit(n, k, k, (0, 1)) - CMatrix.unit(n, k + 1, k + 1, (0, 1))
        g.append(m)
        t.append(m)
        labels_g.append(f"iH{k + 1}")
    for i in range(n):
        for j in range(i + 1, n):
            g.append(CMatrix.unit(n, i, j) - CMatrix.unit(n, j, i))
            labels_g.append(f"X{i + 1}{j + 1}")
            g.append(CMatrix.unit(n, i, j, (0, 1)) + CMatrix.unit(n, j, i, (0, 1)))
            labels_g.append(f"Y{i + 1}{j + 1}")
    a, nplus = [], []
    for k in range(n - 1):
        a.append(CMatrix.unit(n, k, k) - CMatrix.unit(n, k + 1, k + 1))
        labels_h.append(f"H{k + 1}")
    for i in range(n):
        for j in range(i + 1, n):
            nplus.append(CMatrix.unit(n, i, j))
            labels_h.append(f"E{i + 1}{j + 1}")
            nplus.append(CMatrix.unit(n, i, j, (0, 1)))
            labels_h.append(f"iE{i + 1}{j + 1}")
    h = a + nplus
    return g, h, t, a, nplus, labels_g + labels_h


def standard_triple(kind):
    """Manin triple (sl(n,C), Im 2n tr, su(n), a + n_plus) for kind 'A1' (n=2) or 'A2' (n=3)."""
    ranks = {"A1": 2, "A2": 3}
    if kind not in ranks:
        raise PreconditionError(f"unsupported type {kind!r}; built-in types are A1, A2")
    n = ranks[kind]
    g, h, t, a, nplus, labels = _sl_basis(n)
    mats = g + h
    flat = [m.flat() for m in mats]
    dim = len(mats)
    c = [[[F0] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            br = mats[i] @ mats[j] - mats[j] @ mats[i]
            v = _coords(flat, br.flat())
            c[i][j] = v
            c[j][i] = [-x for x in v]
    alg = LieAlgebra(c, labels)
    killing = 2 * n
    pm = [[(mats[i] @ mats[j]).trace()[1] * killing for j in range(dim)] for i in range(dim)]
    pairing = BilinearForm(pm)

    def unit_vectors(idx):
        return Subspace(dim, [[F1 if k == i else F0 for k in range(dim)] for i in idx])
    ng = len(g)
    gs = unit_vectors(range(ng))
    hs = unit_vectors(range(ng, dim))
    parts = {
        "t": unit_vectors(range(n - 1)),
        "a": unit_vectors(range(ng, ng + n - 1)),
        "n_plus": unit_vectors(range(ng + n - 1, dim)),
        "n_minus": Subspace(dim, [_coords(flat, CMatrix(linalg.transpose(m.re, n),
                                                        linalg.transpose(m.im, n)).flat()) for m in nplus]),
    }
    return ManinTriple(alg, pairing, gs, hs, parts, mats, n)


def real_part_killing(t):
    """Re B on the realised algebra: an invariant form for which su(n) is not isotropic."""
    mats = t.matrices
    k = 2 * t.n
    return BilinearForm([[(a @ b).trace()[0] * k for b in mats] for a in mats])


def tk_in_h(t):
    return t.h.contains_all(bracket_space(t.algebra, t.parts["t"], t.h))


# adjoint sampling

def adjoint_action(t, sample):
    """Matrix of Ad_g on the real basis of the realised algebra (columns = images of basis elements)."""
    if not sample.is_unitary():
        raise PreconditionError("sample is not unitary", witness=sample)
    inv = sample.adjoint()
    flat = [m.flat() for m in t.matrices]
    cols = [_coords(flat, (sample @ m @ inv).flat()) for m in t.matrices]
    d = len(cols)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def diag_phase(n, re, im, position=0):
    """Diagonal unitary with phase (re + i im) at position and its conjugate at position + 1."""
    m = CMatrix.identity(n)
    r, s = _frac(re), _frac(im)
    if r * r + s * s != 1:
        raise PreconditionError("phase is not of unit modulus")
    m.re[position][position] = r
    m.im[position][position] = s
    m.re[position + 1][position + 1] = r
    m.im[position + 1][position + 1] = -s
    return m


def quaternion_point(a, b, c, d, n=2, offset=0):
    """SU(2) element [[a+bi, c+di], [-c+di, a-bi]] embedded at rows/cols offset, offset+1."""
    a, b, c, d = map(_frac, (a, b, c, d))
    if a * a + b * b + c * c + d * d != 1:
        raise PreconditionError("quaternion is not of unit norm")
    m = CMatrix.identity(n)
    o = offset
    m.re[o][o], m.im[o][o] = a, b
    m.re[o][o + 1], m.im[o][o + 1] = c, d
    m.re[o + 1][o], m.im[o + 1][o] = -c, d
    m.re[o + 1][o + 1], m.im[o + 1][o + 1] = a, -b
    return m


def default_samples(t):
    if t.n == 2:
        return [CMatrix.identity(2), diag_phase(2, Fraction(3, 5), Fraction(4, 5)),
                quaternion_point(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))]
    return [CMatrix.identity(t.n), diag_phase(t.n, Fraction(3, 5), Fraction(4, 5)),
            quaternion_point(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), t.n),
            quaternion_point(0, Fraction(3, 5), 0, Fraction(4, 5), t.n, 1)]


@dataclass
class QuotientConditions:
    a: bool
    b: bool
    c: bool
    d_pd: bool
    d_trivial: bool
    failing_samples: dict = field(default_factory=dict)
    note: str = "d_pd and d_trivial hold on the listed samples only"

    def to_json(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d_pd": self.d_pd, "d_trivial": self.d_trivial,
                "failing_samples": self.failing_samples, "note": self.note}


def quotient_conditions(t, k, samples=None):
    alg = t.algebra
    if not t.g.contains_all(k.basis) or not is_subalgebra(alg, k):
        raise PreconditionError("k must be a subalgebra of g")
    samples = default_samples(t) if samples is None else samples
    k0 = annihilator_in(t.pairing, k, t.h)
    a = t.h.contains_all(bracket_space(alg, k, t.h))
    b = k0.contains_all(bracket_space(alg, t.h, k0))
    c = k0.contains_all(bracket_space(alg, k0, k0))
    fails = {"d_pd": [], "d_trivial": []}
    k_plus_k0 = k + k0
    k_plus_h = k + t.h
    for idx, g in enumerate(samples):
        ad = adjoint_action(t, g)
        img = Subspace(alg.dim, [linalg.matvec(ad, v) for v in t.h.basis])
        if not k0.contains_all(img.intersect(k_plus_k0).basis):
            fails["d_pd"].append(idx)
        if not t.h.contains_all(img.intersect(k_plus_h).basis):
            fails["d_trivial"].append(idx)
    return QuotientConditions(a, b, c, not fails["d_pd"], not fails["d_trivial"],
                              {k2: v for k2, v in fails.items() if v})


# spectra

def imaginary_spectrum_exact(alg, v):
    """All roots of the characteristic polynomial of ad(v) are purely imaginary (exact)."""
    lam = sympy.Symbol("lam")
    mu = sympy.Symbol("mu", real=True)
    mat = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in alg.ad(v)])
    cp = mat.charpoly(lam).as_expr()
    q = sympy.expand(cp.subs(lam, sympy.I * mu))
    re_part, im_part = q.as_real_imag()
    re, im = sympy.Poly(re_part, mu), sympy.Poly(im_part, mu)
    g = sympy.gcd(re, im)
    deg = sympy.Poly(cp, lam).degree()
    if g.degree() != deg:
        return False
    # count_roots counts distinct roots; weight square-free factors by multiplicity
    _, factors = g.sqf_list()
    return sum(f.count_roots() * m for f, m in factors) == deg


def imaginary_spectrum_numeric(alg, v, tol=1e-9, cluster=1e-3):
    """Float check. Eigenvalues of a Jordan block scatter by about sqrt(eps), but the
    mean of each scattered cluster stays accurate, so real parts are tested per cluster."""
    mat = np.array(linalg.to_float(alg.ad(v)), dtype=float)
    ev = np.linalg.eigvals(mat)
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    left = list(ev)
    while left:
        seed = left.pop(0)
        group = [seed] + [z for z in left if abs(z - seed) <= cluster * scale]
        left = [z for z in left if abs(z - seed) > cluster * scale]
        if abs(float(np.mean([z.real for z in group]))) > tol * scale:
            return False
    return True


def random_element(space, rng, bound=3):
    coeffs = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in space.basis]
    return [sum((c * b[i] for c, b in zip(coeffs, space.basis)), F0) for i in range(space.n)]


# positivity of constant bivectors on complex vector spaces

def standard_complex_structure(m):
    """J on R^{2m} with coordinates (x1, y1, ..., xm, ym): J d_x = d_y, J d_y = -d_x."""
    n = 2 * m
    j = [[F0] * n for _ in range(n)]
    for k in range(m):
        j[2 * k + 1][2 * k] = F1
        j[2 * k][2 * k + 1] = -F1
    return j


@dataclass
class Positivity:
    positive: bool
    reason: str = ""
    witness: list = None

    def __bool__(self):
        return self.positive


def _check_complex_structure(j):
    n = len(j)
    sq = linalg.matmul(j, j)
    return all(sq[a][b] == (-F1 if a == b else F0) for a in range(n) for b in range(n))


def positivity(j, pi):
    """Leaves of the constant bivector pi (matrix) are Kahler for J.

    S = image of pi^sharp, omega_S(pi^sharp xi, pi^sharp eta) = pi(xi, eta),
    g_S(u, v) = omega_S(u, J v) must be symmetric and positive definite.
    """
    j = [[_frac(x) for x in row] for row in j]
    p = [[_frac(x) for x in row] for row in pi]
    n = len(p)
    if not _check_complex_structure(j):
        raise PreconditionError("J does not square to -1")
    if any(p[a][b] != -p[b][a] for a in range(n) for b in range(n)):
        raise PreconditionError("pi is not antisymmetric")
    _, piv = linalg.rref(p, n)
    if not piv:
        return Positivity(True, "S = 0")
    # S basis s_k = pi^sharp(e_{i_k}) = row i_k of p, for independent rows
    rows_idx = _independent_rows(p)
    s_basis = [p[i] for i in rows_idx]
    omega = [[p[a][b] for b in rows_idx] for a in rows_idx]
    # kernel quotient well-definedness: pi(xi, eta) = 0 when pi^sharp(xi) = 0
    for xi in linalg.left_nullspace(p):
        assert all(sum(xi[a] * p[a][b] for a in range(n)) == 0 for b in range(n))
    js = []
    for s in s_basis:
        jv = linalg.matvec(j, s)
        if not linalg.contains(s_basis, jv):
            return Positivity(False, "S is not J-invariant", s)
        js.append(linalg.solve(linalg.transpose(s_basis, n), jv))
    k = len(s_basis)
    # J^* omega_S = omega_S
    for a in range(k):
        for b in range(k):
            val = sum((js[a][c] * js[b][e] * omega[c][e] for c in range(k) for e in range(k)), F0)
            if val != omega[a][b]:
                return Positivity(False, "omega_S is not J-invariant")
    g = [[sum((js[b][c] * omega[a][c] for c in range(k)), F0) for b in range(k)] for a in range(k)]
    if any(g[a][b] != g[b][a] for a in range(k) for b in range(k)):
        return Positivity(False, "g_S is not symmetric")
    for m in range(1, k + 1):
        if linalg.det([row[:m] for row in g[:m]]) <= 0:
            return Positivity(False, "g_S is not positive definite", _witness(g, s_basis, n))
    return Positivity(True, "g_S positive definite")


def _independent_rows(p):
    idx = []
    cur = []
    for i, row in enumerate(p):
        trial = cur + [row]
        if linalg.rank(trial) > len(cur):
            idx.append(i)
            cur = trial
    return idx


def _witness(g, s_basis, n):
    """A vector u in S with g_S(u, u) <= 0: a coordinate vector when one lies in S, else a basis vector."""
    k = len(s_basis)
    for i in range(n):
        e = [F1 if a == i else F0 for a in range(n)]
        if linalg.contains(s_basis, e):
            c = linalg.solve(linalg.transpose(s_basis, n), e)
            if sum((c[a] * g[a][b] * c[b] for a in range(k) for b in range(k)), F0) <= 0:
                return e
    for a in range(k):
        if g[a][a] <= 0:
            return s_basis[a]
    w, v = np.linalg.eigh(np.array(linalg.to_float(g), dtype=float))
    vec = v[:, 0]
    return [Fraction(x).limit_denominator(1000) for x in
            np.array(linalg.to_float(s_basis), dtype=float).T @ vec]


def pd_for_subspace(pi, basis):
    """pi^sharp(B°) ∩ B = 0 for a constant bivector and subspace B."""
    n = len(pi)
    ann = linalg.nullspace(basis, n) if basis else [[F1 if a == b else F0 for b in range(n)] for a in range(n)]
    img = [linalg.matvec(linalg.transpose(pi, n), a) for a in ann]
    img = [v for v in img if any(v)]
    if not img or not basis:
        return True
    return linalg.intersection_dim_rank(img, basis) == 0


# action-induced bivectors

@dataclass
class InducedBivector:
    bivector: Multivector
    commuting: bool
    warnings: list
    poisson: bool


def induced_from_action(pi_a, fields):
    """pi_M = sum_{i<j} pi_A^{ij} rho(e_i) ^ rho(e_j)."""
    chart = fields[0].chart
    total = Multivector.zero(chart, 2)
    m = len(fields)
    for i in range(m):
        for j in range(i + 1, m):
            c = _frac(pi_a[i][j])
            if c:
                total = total + fields[i].wedge(fields[j]) * c
    warnings = []
    for i in range(m):
        for j in range(i + 1, m):
            if not schouten(fields[i], fields[j]).is_zero():
                warnings.append(f"generators {i + 1} and {j + 1} do not commute")
    return InducedBivector(total, not warnings, warnings, is_poisson(total))


def is_invariant_under(pi_m, fields):
    return all(lie_derivative(f, pi_m).is_zero() for f in fields)


# Weyl groups

def weyl_order(kind, rank):
    if not isinstance(rank, int) or rank < 1:
        raise PreconditionError("rank must be a positive integer")
    if kind == "A":
        return math.factorial(rank + 1)
    if kind in ("B", "C"):
        return 2 ** rank * math.factorial(rank)
    if kind == "D":
        if rank < 2:
            raise PreconditionError("type D needs rank >= 2")
        return 2 ** (rank - 1) * math.factorial(rank)
    raise PreconditionError(f"unknown type {kind!r}")


# JSON input

def algebra_from_json(data):
    dim = int(data["dim"])
    alg = LieAlgebra.from_brackets(dim, [(int(i), int(j), [Fraction(str(x)) for x in cs])
                                         for i, j, cs in data.get("brackets", [])], data.get("labels"))
    pairing = BilinearForm([[Fraction(str(x)) for x in row] for row in data["pairing"]]) \
        if "pairing" in data else None
    return alg, pairing


def spectral_check(t, count=10, seed=0):
    rng = random.Random(seed)
    space = t.parts["t"] + t.parts["n_plus"]
    out = []
    for _ in range(count):
        v = random_element(space, rng)
        out.append(imaginary_spectrum_numeric(t.algebra, v))
    return out
