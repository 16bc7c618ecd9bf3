"""Pointwise linear Dirac geometry on V ⊕ V*.

Elements are pairs (u, xi). Lagrangian subspaces are stored by generator rows
(u | xi) of length 2n brought to reduced row echelon form, so two equal
subspaces have identical bases in exact mode.
"""
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .calculus import Form, Multivector, SmoothMap
from .errors import ArityError, NotLagrangian
from .scalars import Point


@dataclass(frozen=True)
class GTElement:
    vector: tuple
    covector: tuple

    def __post_init__(self):
        if len(self.vector) != len(self.covector):
            raise ArityError("vector and covector parts differ in length")

    def row(self):
        return list(self.vector) + list(self.covector)


def pairing(e, f):
    """<(u, xi), (v, eta)> = xi(v) + eta(u)."""
    return sum(x * v for x, v in zip(e.covector, f.vector)) + sum(y * u for y, u in zip(f.covector, e.vector))


def dorfman(chart, e1, e2):
    """Dorfman bracket of two sections given as (Multivector deg 1, Form deg 1)."""
    from .calculus import d, interior, lie_bracket, lie_derivative
    u, xi = e1
    v, eta = e2
    return lie_bracket(u, v), lie_derivative(u, eta) - interior(v, d(xi))


class LagrangianSubspace:
    """Subspace L of V ⊕ V* (dim V = n) spanned by the given rows."""

    def __init__(self, n, rows, check=True):
        self.n = n
        rows = [list(r) for r in rows]
        for r in rows:
            if len(r) != 2 * n:
                raise ArityError(f"row of length {len(r)} for n = {n}")
        self.numeric = linalg.has_float(rows)
        self.rows = linalg.span_basis(rows, 2 * n) if rows else []
        if check and not self.is_lagrangian():
            raise NotLagrangian(f"subspace of dim {self.dim} is not maximal isotropic (n = {n})")

    @property
    def dim(self):
        return len(self.rows)

    def basis_matrix(self):
        """2n x k matrix whose columns span L."""
        return linalg.transpose(self.rows, 2 * self.n)

    def vector_block(self):
        return [r[: self.n] for r in self.rows]

    def covector_block(self):
        return [r[self.n:] for r in self.rows]

    def elements(self):
        return [GTElement(tuple(r[: self.n]), tuple(r[self.n:])) for r in self.rows]

    def isotropy_defect(self):
        worst = 0
        els = self.elements()
        for i, a in enumerate(els):
            for b in els[i:]:
                p = pairing(a, b)
                worst = max(worst, abs(p))
        return worst

    def is_isotropic(self, tol=1e-9):
        defect = self.isotropy_defect()
        return defect <= tol if self.numeric else defect == 0

    def is_lagrangian(self):
        return self.dim == self.n and self.is_isotropic()

    def _rank(self, rows):
        return linalg.rank(rows) if rows and rows[0] else 0

    @property
    def dim_cap_V(self):
        """dim(L ∩ (V ⊕ 0))."""
        return self.dim - self._rank(self.covector_block())

    @property
    def dim_cap_Vstar(self):
        """dim(L ∩ (0 ⊕ V*))."""
        return self.dim - self._rank(self.vector_block())

    @property
    def kind(self):
        a, b = self.dim_cap_V, self.dim_cap_Vstar
        if a == 0 and b == 0:
            return "both"
        if a == 0:
            return "bivector"
        if b == 0:
            return "form"
        return "neither"

    def to_bivector(self):
        """Matrix P with L = graph(P), i.e. rows (xi P, xi); None if L ∩ V ≠ 0."""
        if self.dim_cap_V != 0:
            return None
        xi = self.covector_block()
        u = self.vector_block()
        return linalg.matmul(linalg.inverse(xi), u) if not self.numeric else \
            [list(r) for r in np.linalg.solve(np.array(xi, float), np.array(u, float))]

    def to_form(self):
        """Matrix W with L = graph(W), i.e. rows (u, u W); None if L ∩ V* ≠ 0."""
        if self.dim_cap_Vstar != 0:
            return None
        xi = self.covector_block()
        u = self.vector_block()
        return linalg.matmul(linalg.inverse(u), xi) if not self.numeric else \
            [list(r) for r in np.linalg.solve(np.array(u, float), np.array(xi, float))]

    def contains(self, element):
        return linalg.contains(self.rows, element.row())

    def __eq__(self, other):
        if not isinstance(other, LagrangianSubspace) or other.n != self.n:
            return NotImplemented
        if self.numeric or other.numeric:
            both = self.rows + other.rows
            return linalg.rank(linalg.to_float(both)) == self.dim == other.dim
        return self.rows == other.rows

    def __repr__(self):
        return f"LagrangianSubspace(n={self.n}, kind={self.kind}, rows={self.rows})"


def _unit(n, i, one):
    z = one * 0
    return [one if k == i else z for k in range(n)]


def graph_of_bivector(p):
    """Graph {(P^T xi, xi)}: rows (P[i], e_i)."""
    n = len(p)
    one = 1.0 if linalg.has_float(p) else Fraction(1)
    return LagrangianSubspace(n, [list(p[i]) + _unit(n, i, one) for i in range(n)])


def graph_of_form(w):
    """Graph {(u, iota_u omega)}: rows (e_i, W[i])."""
    n = len(w)
    one = 1.0 if linalg.has_float(w) else Fraction(1)
    return LagrangianSubspace(n, [_unit(n, i, one) + list(w[i]) for i in range(n)])


def tangent_plus_annihilator(n, vectors):
    """Lagrangian D ⊕ D° for a subspace D spanned by ``vectors``."""
    vectors = [list(v) for v in vectors]
    one = 1.0 if linalg.has_float(vectors) else Fraction(1)
    zero = one * 0
    basis = linalg.span_basis(vectors, n) if vectors else []
    ann = linalg.nullspace(basis, n) if basis else [_unit(n, i, one) for i in range(n)]
    rows = [list(v) + [zero] * n for v in basis] + [[zero] * n + list(a) for a in ann]
    return LagrangianSubspace(n, rows)


def gauge(l, w):
    """R_omega: (u, xi) -> (u, xi + iota_u omega)."""
    n = l.n
    rows = []
    for r in l.rows:
        u, xi = r[:n], r[n:]
        shift = [sum((u[i] * w[i][j] for i in range(n)), 0 * u[0]) for j in range(n)]
        rows.append(list(u) + [a + b for a, b in zip(xi, shift)])
    return LagrangianSubspace(n, rows)


def pullback_point(l, jac):
    """Backward image of L ⊂ V ⊕ V* under a linear map with matrix ``jac`` (n x m).

    {(w, J^T eta) : (J w, eta) ∈ L}.
    """
    n = l.n
    if len(jac) != n:
        raise ArityError("jacobian rows must match the ambient dimension")
    m = len(jac[0]) if jac else 0
    k = l.dim
    u = l.vector_block()
    xi = l.covector_block()
    numeric = l.numeric or linalg.has_float(jac)
    # unknowns (w in m, c in k) with J w - sum_r c_r u_r = 0
    system = []
    for i in range(n):
        row = list(jac[i]) + [-u[r][i] for r in range(k)]
        system.append(row)
    if numeric:
        system = linalg.to_float(system)
    ns = linalg.nullspace(system, m + k)
    rows = []
    for vec in ns:
        w = vec[:m]
        c = vec[m:]
        eta = [sum((c[r] * xi[r][i] for r in range(k)), 0 * vec[0]) for i in range(n)]
        cov = [sum((jac[i][a] * eta[i] for i in range(n)), 0 * vec[0]) for a in range(m)]
        rows.append(list(w) + cov)
    if numeric:
        rows = linalg.to_float(rows)
    return LagrangianSubspace(m, rows)


def forward_point(l, jac):
    """Forward image {(J u, eta) : (u, J^T eta) ∈ L} for J of shape n x m."""
    n = len(jac)
    m = l.n
    u = l.vector_block()
    xi = l.covector_block()
    k = l.dim
    numeric = l.numeric or linalg.has_float(jac)
    # unknowns (c in k, eta in n) with sum c_r xi_r - J^T eta = 0
    system = []
    for a in range(m):
        system.append([xi[r][a] for r in range(k)] + [-jac[i][a] for i in range(n)])
    if numeric:
        system = linalg.to_float(system)
    ns = linalg.nullspace(system, k + n)
    rows = []
    for vec in ns:
        c, eta = vec[:k], vec[k:]
        uu = [sum((c[r] * u[r][a] for r in range(k)), 0 * vec[0]) for a in range(m)]
        ju = [sum((jac[i][a] * uu[a] for a in range(m)), 0 * vec[0]) for i in range(n)]
        rows.append(ju + list(eta))
    rows = [r for r in rows]
    if numeric:
        rows = linalg.to_float(rows)
    return LagrangianSubspace(n, rows)


# families over a chart

class LagrangianFamily:
    chart = None

    def at(self, point):
        raise NotImplementedError

    def describe(self):
        return type(self).__name__


class GraphOfBivector(LagrangianFamily):
    def __init__(self, pi):
        self.pi = pi
        self.chart = pi.chart

    def at(self, point):
        return graph_of_bivector(self.pi.matrix_at(point))

    def describe(self):
        return f"graph of {self.pi!r}"


class GraphOfForm(LagrangianFamily):
    def __init__(self, omega):
        self.omega = omega
        self.chart = omega.chart

    def at(self, point):
        return graph_of_form(self.omega.matrix_at(point))


class GraphOfDistribution(LagrangianFamily):
    """D ⊕ D° for the distribution spanned by vector fields."""

    def __init__(self, chart, fields):
        self.chart = chart
        self.fields = list(fields)

    def at(self, point):
        return tangent_plus_annihilator(self.chart.dim, [f.vector_at(point) for f in self.fields])


class Gauge(LagrangianFamily):
    def __init__(self, family, omega):
        self.family = family
        self.omega = omega
        self.chart = family.chart

    def at(self, point):
        return gauge(self.family.at(point), self.omega.matrix_at(point))


class Pullback(LagrangianFamily):
    def __init__(self, family, phi):
        if phi.target != family.chart:
            raise ArityError("map target must be the family's chart")
        self.family = family
        self.phi = phi
        self.chart = phi.source

    def at(self, point):
        return pullback_point(self.family.at(self.phi.apply(point)), self.phi.jacobian_at(point))


@dataclass
class ScanPoint:
    coords: tuple
    dim_cap_V: int
    dim_cap_Vstar: int
    kind: str


@dataclass
class ScanReport:
    chart: tuple
    points: list
    witnesses: list = field(default_factory=list)

    @property
    def rank_profile(self):
        counts = {}
        for p in self.points:
            key = (p.dim_cap_V, p.dim_cap_Vstar, p.kind)
            counts[key] = counts.get(key, 0) + 1
        return [{"dim_cap_V": a, "dim_cap_Vstar": b, "kind": k, "count": c}
                for (a, b, k), c in sorted(counts.items())]

    @property
    def constant(self):
        return len(self.rank_profile) <= 1

    def to_json(self):
        return {
            "chart": list(self.chart),
            "points": [{"coords": [str(c) for c in p.coords], "dim_cap_V": p.dim_cap_V,
                        "dim_cap_Vstar": p.dim_cap_Vstar, "kind": p.kind} for p in self.points],
            "rank_profile": self.rank_profile,
            "witnesses": [{"a": [str(c) for c in a], "b": [str(c) for c in b]} for a, b in self.witnesses],
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def neighbour_witnesses(points, labels):
    """Pairs of nearest grid neighbours whose labels differ (index pairs)."""
    if len(points) < 2:
        return []
    arr = np.array([[float(c) for c in p] for p in points])
    diff = arr[:, None, :] - arr[None, :, :]
    dist = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(dist, np.inf)
    pairs = set()
    for i in range(len(points)):
        best = dist[i].min()
        for j in np.nonzero(np.isclose(dist[i], best, rtol=1e-12, atol=0))[0]:
            j = int(j)
            if labels[i] != labels[j]:
                pairs.add((min(i, j), max(i, j)))
    return sorted(pairs)


def family_scan(family, grid):
    pts = []
    for p in grid:
        l = family.at(p)
        pts.append(ScanPoint(tuple(p.coords), l.dim_cap_V, l.dim_cap_Vstar, l.kind))
    labels = [(p.dim_cap_V, p.dim_cap_Vstar) for p in pts]
    pairs = neighbour_witnesses([p.coords for p in pts], labels)
    return ScanReport(tuple(family.chart.variables), pts, [(pts[i].coords, pts[j].coords) for i, j in pairs])
