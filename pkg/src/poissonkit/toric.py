"""Delzant polytopes, kernel tori, faces and leaf counts of toric Poisson manifolds."""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import linalg
from .calculus import Chart, Multivector, SmoothMap, euler_field, map_related, rotation_field
from .errors import PolytopeError, PreconditionError
from .lie import induced_from_action
from .submanifolds import apply_sharp

F0 = Fraction(0)
F1 = Fraction(1)


@dataclass(frozen=True)
class DelzantPolytope:
    """{xi : <xi, u_i> >= c_i for all i}."""
    rank: int
    normals: tuple
    constants: tuple
    name: str = None

    def __post_init__(self):
        if not self.normals:
            raise PolytopeError("empty", "no facets given")
        for u in self.normals:
            if len(u) != self.rank:
                raise PolytopeError("arity", f"normal {list(u)} does not have length {self.rank}")

    @classmethod
    def from_facets(cls, facets, name=None):
        normals = tuple(tuple(int(x) for x in u) for u, _ in facets)
        consts = tuple(Fraction(c) for _, c in facets)
        return cls(len(normals[0]), normals, consts, name)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        facets = [(f["u"], Fraction(str(f["c"]))) for f in data["facets"]]
        poly = cls.from_facets(facets, data.get("name"))
        if int(data["rank"]) != poly.rank:
            raise PolytopeError("arity", "rank does not match the normals")
        return poly

    def to_json(self):
        out = {"rank": self.rank, "facets": [{"u": list(u), "c": str(c)} for u, c in zip(self.normals, self.constants)]}
        if self.name is not None:
            out["name"] = self.name
        return out

    @property
    def d(self):
        return len(self.normals)

    def slack(self, xi):
        return [sum((Fraction(a) * x for a, x in zip(u, xi)), F0) - c for u, c in zip(self.normals, self.constants)]

    def contains(self, xi):
        return all(s >= 0 for s in self.slack(xi))

    def active(self, xi):
        return frozenset(i for i, s in enumerate(self.slack(xi)) if s == 0)


# standard examples

def interval():
    return DelzantPolytope.from_facets([((1,), 0), ((-1,), -1)], "interval")


def triangle():
    return DelzantPolytope.from_facets([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)], "triangle")


def square():
    return DelzantPolytope.from_facets([((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)], "square")


def skew_triangle():
    return DelzantPolytope.from_facets([((1, 0), 0), ((0, 1), 0), ((-2, -1), -1)], "skew-triangle")


# vertices

@dataclass(frozen=True)
class Vertex:
    point: tuple
    active: frozenset


def _edge_bounded(poly, point, active, drop):
    """Edge leaving the vertex by relaxing facet ``drop``; False when it is an infinite ray."""
    keep = [poly.normals[i] for i in sorted(active) if i != drop]
    n = poly.rank
    if keep:
        dirs = linalg.nullspace([[Fraction(x) for x in u] for u in keep], n)
    else:
        dirs = [[F1 if k == j else F0 for k in range(n)] for j in range(n)]
    if len(dirs) != 1:
        return True
    y = dirs[0]
    s = sum((Fraction(a) * b for a, b in zip(poly.normals[drop], y)), F0)
    if s < 0:
        y = [-x for x in y]
    return any(sum((Fraction(a) * b for a, b in zip(u, y)), F0) < 0 for u in poly.normals)


def vertices(poly):
    n = poly.rank
    found = {}
    for subset in combinations(range(poly.d), n):
        rows = [[Fraction(x) for x in poly.normals[i]] for i in subset]
        if linalg.rank(rows) < n:
            continue
        sol = linalg.solve(rows, [poly.constants[i] for i in subset])
        pt = tuple(sol)
        if pt in found or not poly.contains(pt):
            continue
        found[pt] = poly.active(pt)
    if not found:
        normals = [[Fraction(x) for x in u] for u in poly.normals]
        if linalg.rank(normals) < n:
            raise PolytopeError("unbounded", "normals do not span; the region contains a line")
        raise PolytopeError("empty", "the inequalities have no common solution")
    out = []
    for pt in sorted(found):
        act = found[pt]
        if len(act) != n:
            raise PolytopeError("non-simple", f"{len(act)} facets meet at a vertex", witness=[str(x) for x in pt])
        for j in act:
            if not _edge_bounded(poly, pt, act, j):
                raise PolytopeError("unbounded", "an edge from a vertex is an infinite ray",
                                    witness=[str(x) for x in pt])
        out.append(Vertex(pt, act))
    used = set().union(*(v.active for v in out))
    missing = [i for i in range(poly.d) if i not in used]
    if missing:
        raise PolytopeError("redundant", f"facet {missing[0] + 1} is not essential", witness=missing)
    return out


def _primitive(u):
    g = 0
    for x in u:
        g = gcd(g, abs(x))
    return g == 1


@dataclass
class DelzantVerdict:
    ok: bool
    vertex: tuple = None
    determinant: int = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_delzant(poly):
    for i, u in enumerate(poly.normals):
        if not _primitive(u):
            return DelzantVerdict(False, None, None, f"normal {i + 1} is not primitive")
    for v in vertices(poly):
        rows = [[Fraction(x) for x in poly.normals[i]] for i in sorted(v.active)]
        det = linalg.det(rows)
        if abs(det) != 1:
            return DelzantVerdict(False, v.point, int(det), "active normals are not a lattice basis")
    return DelzantVerdict(True)


# Smith normal form over the integers

def smith_normal_form(a):
    """(S, U, V) with U a V = S diagonal, U and V unimodular; a is m x n integer."""
    m = len(a)
    n = len(a[0]) if m else 0
    s = [list(map(int, row)) for row in a]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, k):
        M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]

    def add_col(M, src, dst, k):
        for row in M:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(s[i][j]), i, j) for i in range(t, m) for j in range(t, n) if s[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(s, t, i)
        swap_rows(u, t, i)
        swap_cols(s, t, j)
        swap_cols(v, t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                q = s[i][t] // s[t][t]
                if q:
                    add_row(s, t, i, -q)
                    add_row(u, t, i, -q)
                if s[i][t]:
                    swap_rows(s, t, i)
                    swap_rows(u, t, i)
                    done = False
            for j in range(t + 1, n):
                q = s[t][j] // s[t][t]
                if q:
                    add_col(s, t, j, -q)
                    add_col(v, t, j, -q)
                if s[t][j]:
                    swap_cols(s, t, j)
                    swap_cols(v, t, j)
                    done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % s[t][t]), None)
                if bad is not None:
                    add_row(s, bad[0], t, 1)
                    add_row(u, bad[0], t, 1)
                    done = False
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


@dataclass
class KernelLattice:
    basis: list
    invariant_factors: list

    @property
    def surjective(self):
        return all(f == 1 for f in self.invariant_factors)


def kernel_lattice(poly):
    """Saturated Z-basis of ker(Z^d -> Z^n, e_i -> u_i) from the column transform of the SNF."""
    n, d = poly.rank, poly.d
    a = [[poly.normals[i][r] for i in range(d)] for r in range(n)]
    s, _, v = smith_normal_form(a)
    diag = [s[i][i] for i in range(min(n, d)) if s[i][i]]
    r = len(diag)
    if r < n:
        raise PolytopeError("degenerate", "normals do not span the lattice rationally")
    basis = [[v[i][j] for i in range(d)] for j in range(r, d)]
    basis = _reduce_basis(basis)
    return KernelLattice(basis, diag)


def _reduce_basis(basis):
    """Integer row echelon form, rows with positive leading entries: deterministic output."""
    rows = [list(b) for b in basis]
    if not rows:
        return rows
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[piv] = rows[piv], rows[r]
            others = [i for i in range(r + 1, len(rows)) if rows[i][c]]
            if not others:
                break
            for i in others:
                q = rows[i][c] // rows[r][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        if r < len(rows) and rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
            r += 1
    return rows


# faces

def faces(poly):
    """Index sets I with F_I nonempty: in a simple polytope, exactly the subsets of vertex active sets."""
    out = set()
    for v in vertices(poly):
        act = sorted(v.active)
        for k in range(len(act) + 1):
            for sub in combinations(act, k):
                out.add(frozenset(sub))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def leaf_count_toric(poly):
    return len(faces(poly))


def strata(poly):
    """Coordinate strata C^d_I = {z_i = 0 iff i in I} making up the GIT-stable set."""
    return faces(poly)


@dataclass
class ToricData:
    kernel: KernelLattice
    faces: list
    leaf_count: int
    delzant: DelzantVerdict

    def to_json(self):
        return {
            "kernel": self.kernel.basis,
            "invariant_factors": self.kernel.invariant_factors,
            "faces": [sorted(i + 1 for i in f) for f in self.faces],
            "leaf_count": self.leaf_count,
            "delzant": bool(self.delzant),
        }


def analyse(poly):
    dz = is_delzant(poly)
    fs = faces(poly)
    return ToricData(kernel_lattice(poly), fs, len(fs), dz)


# moment map

def moment_map(poly, z):
    """mu(z) = sum (|z_i|^2 / 2 + c_i) e^i and mu_N = kernel-transpose applied to mu.

    ``z`` is a list of (re, im) pairs or of squared moduli given as ('abs2', value).
    """
    sq = []
    for entry in z:
        if isinstance(entry, tuple) and entry and entry[0] == "abs2":
            sq.append(Fraction(entry[1]))
        else:
            re, im = entry
            sq.append(Fraction(re) ** 2 + Fraction(im) ** 2)
    if len(sq) != poly.d:
        raise PreconditionError("point has the wrong number of complex coordinates")
    mu = [s / 2 + c for s, c in zip(sq, poly.constants)]
    kern = kernel_lattice(poly).basis
    mu_n = [sum((k[i] * mu[i] for i in range(poly.d)), F0) for k in kern]
    return mu, mu_n


# GIT coregularity at sample points

def complex_chart(d):
    names = []
    for i in range(d):
        names += [f"x{i}", f"y{i}"]
    return Chart(names)


def standard_positive(d, scale=F1):
    """sum_i scale * d_xi ^ d_yi on C^d as a 2d x 2d matrix."""
    m = [[F0] * (2 * d) for _ in range(2 * d)]
    for i in range(d):
        m[2 * i][2 * i + 1] = Fraction(scale)
        m[2 * i + 1][2 * i] = -Fraction(scale)
    return m


def torus_fields(chart, d):
    """rho(e_i) = E_i and rho(i e_i) = V_i, ordered as the real basis (e_1, i e_1, ...)."""
    out = []
    for i in range(d):
        out += [euler_field(chart, i), rotation_field(chart, i)]
    return out


def induced_toric_bivector(pi_a, d):
    chart = complex_chart(d)
    return induced_from_action(pi_a, torus_fields(chart, d)).bivector


def git_coregular_sample(poly, pi_a, z):
    """Pointwise Poisson-Dirac test of the complexified kernel-torus orbit through z.

    ``z`` is a list of (re, im) pairs with rational entries.
    """
    d = poly.d
    if len(z) != d:
        raise PreconditionError("point has the wrong number of complex coordinates")
    zero = frozenset(i for i, (re, im) in enumerate(z) if Fraction(re) == 0 and Fraction(im) == 0)
    if zero not in set(faces(poly)):
        raise PreconditionError("point is not in the stable set", witness=sorted(i + 1 for i in zero))
    chart = complex_chart(d)
    fields = torus_fields(chart, d)
    big_pi = induced_from_action(pi_a, fields).bivector
    coords = [Fraction(c) for pair in z for c in pair]
    pt = chart.point(*coords)
    ev = [f.vector_at(pt) for f in fields]
    orbit = []
    for k in kernel_lattice(poly).basis:
        orbit.append([sum((k[i] * ev[2 * i][j] for i in range(d)), F0) for j in range(2 * d)])
        orbit.append([sum((k[i] * ev[2 * i + 1][j] for i in range(d)), F0) for j in range(2 * d)])
    orbit = [w for w in orbit if any(w)]
    n = 2 * d
    if not orbit:
        return True
    ann = linalg.nullspace(orbit, n)
    p = big_pi.matrix_at(pt)
    img = [apply_sharp(p, a) for a in ann]
    img = [v for v in img if any(v)]
    if not img:
        return True
    return linalg.intersection_dim_rank(img, orbit) == 0


def stratum_samples(poly, values=(1, Fraction(1, 2), Fraction(-2, 3))):
    """Rational points in each stratum C^d_I: coordinates in I vanish, the others run over simple values."""
    out = []
    for face in faces(poly):
        for k, val in enumerate(values):
            pt = []
            for i in range(poly.d):
                if i in face:
                    pt.append((F0, F0))
                else:
                    shift = Fraction(i + 1, 3)
                    pt.append((Fraction(val), shift * (k - 1)))
            out.append((face, pt))
    return out


# totally real

def conjugation(chart):
    comps = []
    for i, v in enumerate(chart.variables):
        comps.append(chart.scalar(v) if i % 2 == 0 else -chart.scalar(v))
    return SmoothMap(chart, chart, comps)


def totally_real(pi):
    """Complex conjugation (x, y) -> (x, -y) in every factor pushes pi to -pi."""
    if pi.chart.dim % 2:
        raise PreconditionError("a complex chart has even real dimension")
    return map_related(conjugation(pi.chart), pi, -pi)


# associated bundles

TAGS = ("principal-fibers-zero", "isotropic-orbits")


@dataclass(frozen=True)
class AssociatedLeafSpec:
    base_count: int
    fiber_count: int
    hypothesis_tag: str = None
    label: str = ""


def associated_leaf_count(spec):
    if spec.hypothesis_tag not in TAGS:
        raise PreconditionError(f"hypothesis tag must be one of {TAGS}")
    if spec.base_count < 1 or spec.fiber_count < 1:
        raise PreconditionError("leaf counts must be positive")
    return spec.base_count * spec.fiber_count
