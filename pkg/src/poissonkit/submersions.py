"""Poisson submersions: fibres, couplings, pencils, horizontal foliation, flows.

A submersion is given on one total-space chart with one or more base charts;
each base chart carries the projection in its coordinates, the base bivector
there, and an optional domain function that must be nonzero at points the
chart is used for (e.g. the two affine charts of a projective line).
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from . import linalg
from .calculus import (Form, Multivector, SmoothMap, Verdict, d, evaluate_form, interior,
                       is_poisson, lie_derivative, map_related, schouten, sharp)
from .dirac import neighbour_witnesses
from .errors import (DenominatorVanishes, DomainError, NotASubmersion, PreconditionError,
                     StepSizeError, UnsupportedModeError)
from .scalars import Point, Scalar, projective_limit, rational_grid
from .submanifolds import SubmanifoldSpec, apply_sharp, pd_intersection_dims, pointwise_induce


@dataclass(frozen=True)
class BaseChart:
    projection: SmoothMap
    bivector: Multivector = None
    domain: Scalar = None

    def applies(self, point):
        if self.domain is None:
            return True
        try:
            return self.domain.evaluate(point) != 0
        except (DenominatorVanishes, DomainError):
            return False


@dataclass(frozen=True)
class Transition:
    """Change of base coordinates from chart ``source`` to chart ``target`` on their overlap."""
    source: int
    target: int
    map: SmoothMap


@dataclass(frozen=True)
class SubmersionSpec:
    pi: Multivector
    charts: tuple
    transitions: tuple = ()
    name: str = None

    @classmethod
    def single(cls, projection, pi_total, pi_base=None, name=None):
        return cls(pi_total, (BaseChart(projection, pi_base),), (), name)

    @property
    def total(self):
        return self.pi.chart

    @property
    def p(self):
        return self.charts[0].projection

    @property
    def pi_base(self):
        return self.charts[0].bivector

    @property
    def fibre_dim(self):
        return self.total.dim - self.p.target.dim

    def chart_for(self, point):
        for i, ch in enumerate(self.charts):
            if ch.applies(point):
                return i, ch
        return None, None


def check_poisson_map(spec):
    """map_related on every chart (and transition), plus the Jacobi identity."""
    out = {"total_is_poisson": is_poisson(spec.pi) if spec.pi.is_exact else None, "charts": [], "transitions": []}
    for ch in spec.charts:
        if ch.bivector is None:
            out["charts"].append(None)
            continue
        out["charts"].append(map_related(ch.projection, spec.pi, ch.bivector))
    for tr in spec.transitions:
        a = spec.charts[tr.source].bivector
        b = spec.charts[tr.target].bivector
        out["transitions"].append(map_related(tr.map, a, b))
    return out


def is_poisson_submersion(spec):
    res = check_poisson_map(spec)
    return bool(res["total_is_poisson"]) and all(r is not False for r in res["charts"]) and \
        all(res["transitions"])


def vertical_frame(spec, at=None):
    """Kernel of dp: symbolic vector fields (chart 0) or vectors at a point."""
    if at is None:
        jac = spec.p.jacobian()
        ker = linalg.nullspace(jac, spec.total.dim)
        return [Multivector.from_components(spec.total, v) for v in ker]
    _, ch = spec.chart_for(at)
    if ch is None:
        raise PreconditionError("no base chart covers this point", witness=at)
    jac = ch.projection.jacobian_at(at)
    if linalg.rank(jac) < len(jac):
        raise NotASubmersion(at, linalg.rank(jac))
    return linalg.nullspace(jac, spec.total.dim)


def _kind(rank, fdim):
    if rank == 0:
        return "trivial"
    if rank == fdim:
        return "symplectic"
    return "degenerate"


@dataclass
class FiberPoint:
    coords: tuple
    chart: int
    image: tuple
    fiber_pd: bool
    fiber_rank: int
    coupling: bool
    fiber_bivector: list = None
    fiber_bivector_rank: int = None
    kind: str = None
    pushed: list = None

    def to_json(self):
        return {
            "coords": [str(c) for c in self.coords], "chart": self.chart,
            "image": [str(c) for c in self.image], "fiber_pd": self.fiber_pd,
            "fiber_rank": self.fiber_rank, "coupling": self.coupling, "kind": self.kind,
            "fiber_bivector_rank": self.fiber_bivector_rank,
        }


def fiber_point(spec, pt):
    idx, ch = spec.chart_for(pt)
    if ch is None:
        return None
    jac = ch.projection.jacobian_at(pt)
    k = len(jac)
    n = spec.total.dim
    r = linalg.rank(jac)
    if r < k:
        raise NotASubmersion(pt, r)
    vert = linalg.nullspace(jac, n)
    ann = linalg.span_basis(jac, n)
    p = spec.pi.matrix_at(pt)
    if linalg.has_float(jac) or linalg.has_float(p):
        p = linalg.to_float(p)
    img = [apply_sharp(p, a) for a in ann]
    dk, dr = pd_intersection_dims(p, vert, ann)
    assert dk == dr
    fiber_pd = dk == 0
    frank = linalg.rank(img) if img else 0
    coupling = fiber_pd and linalg.sum_dimension(vert, img) == n
    # leaf containment: pi^sharp(V°) lies in the image of pi^sharp
    full = [apply_sharp(p, [Fraction(1) if i == j else Fraction(0) for i in range(n)]) for j in range(n)]
    assert all(linalg.contains(full, v) for v in img)
    fp = FiberPoint(tuple(pt.coords), idx, tuple(ch.projection.apply(pt).coords), fiber_pd, frank, coupling)
    if fiber_pd:
        fb = pointwise_induce(p, vert, ann)
        fp.fiber_bivector = fb
        fp.fiber_bivector_rank = linalg.rank(fb) if fb and fb[0] else 0
        fp.kind = _kind(fp.fiber_bivector_rank, len(vert))
        fp.pushed = push_fibre_matrix(vert, fb, n)
    return fp


def push_fibre_matrix(vert, fb, n):
    """Matrix of sum_ab F_ab K_a ^ K_b on the total space."""
    f = len(vert)
    zero = vert[0][0] * 0 if f else Fraction(0)
    out = [[zero] * n for _ in range(n)]
    for a in range(f):
        for b in range(f):
            c = fb[a][b]
            if linalg.is_zero(c) if not isinstance(c, float) else c == 0.0:
                continue
            for i in range(n):
                if linalg.is_zero(vert[a][i]) if not isinstance(vert[a][i], float) else vert[a][i] == 0.0:
                    continue
                for j in range(n):
                    out[i][j] = out[i][j] + vert[a][i] * c * vert[b][j]
    return out


@dataclass
class FiberReport:
    points: list
    poisson_map: dict
    fiber_pd: bool
    coupling: bool
    coregular: Verdict
    witnesses: list
    per_fibre_rank_constant: bool
    skipped: list = field(default_factory=list)

    def kinds(self):
        return {p.coords: p.kind for p in self.points}

    def to_json(self):
        return {
            "poisson_map": self.poisson_map,
            "fiber_pd": self.fiber_pd,
            "coupling": self.coupling,
            "coregular": self.coregular.value,
            "witnesses": [[str(c) for c in w] for w in self.witnesses],
            "per_fibre_rank_constant": self.per_fibre_rank_constant,
            "skipped": [[str(c) for c in s] for s in self.skipped],
            "points": [p.to_json() for p in self.points],
        }


def default_grid(spec, seed=0):
    return rational_grid(spec.total.variables, seed=seed)


def fiber_report(spec, grid=None):
    pts = grid if grid is not None else default_grid(spec)
    res = []
    skipped = []
    for pt in pts:
        try:
            fp = fiber_point(spec, pt)
        except DenominatorVanishes:
            fp = None
        if fp is None:
            skipped.append(tuple(pt.coords))
        else:
            res.append(fp)
    pm = check_poisson_map(spec) if spec.pi.is_exact and spec.p.is_exact else {}
    is_map = bool(pm) and bool(pm.get("total_is_poisson")) and all(r is not False for r in pm["charts"]) \
        and all(pm["transitions"])
    all_pd = all(p.fiber_pd for p in res)
    groups = {}
    for p in res:
        groups.setdefault((p.chart, p.image), set()).add(p.fiber_rank)
    per_fibre = all(len(v) == 1 for v in groups.values())
    if not all_pd:
        verdict = Verdict.FAILS
        witnesses = [p.coords for p in res if not p.fiber_pd]
    elif not per_fibre:
        verdict = Verdict.FAILS
        witnesses = [p.coords for p in res if len(groups[(p.chart, p.image)]) > 1]
    elif is_map:
        verdict = Verdict.HOLDS
        witnesses = []
    else:
        verdict = Verdict.NOT_DETERMINED
        witnesses = []
    return FiberReport(res, pm, all_pd, all(p.coupling for p in res), verdict, witnesses, per_fibre, skipped)


# pencils

@dataclass
class PencilDecomposition:
    pi_v: Multivector
    pi_h: Multivector
    certificates: dict

    @property
    def ok(self):
        return all(self.certificates.values())

    def to_json(self):
        return {"pi_V": self.pi_v.to_dict(), "pi_H": self.pi_h.to_dict(), "certificates": self.certificates}


@dataclass
class PencilObstruction:
    reason: str
    witnesses: list = field(default_factory=list)
    rank_jumps: list = field(default_factory=list)

    ok = False

    def to_json(self):
        return {"reason": self.reason, "witnesses": self.witnesses, "rank_jumps": self.rank_jumps}


def generic_fibre_bivector(spec):
    """Fibre-induced vertical bivector over the function field of the total chart (chart 0)."""
    if not (spec.pi.is_exact and spec.p.is_exact):
        raise UnsupportedModeError("pencil detection needs EXACT data")
    n = spec.total.dim
    jac = spec.p.jacobian()
    vert = linalg.nullspace(jac, n)
    ann = linalg.span_basis(jac, n)
    pmat = spec.pi.matrix()
    fb = pointwise_induce(pmat, vert, ann, check=False)
    if fb is None:
        return None
    return Multivector.from_matrix(spec.total, push_fibre_matrix(vert, fb, n))


def pencil_decompose(spec, grid=None):
    pts = grid if grid is not None else default_grid(spec)
    rep = fiber_report(spec, pts)
    if not rep.fiber_pd:
        return PencilObstruction("fibres are not Poisson-Dirac",
                                 witnesses=[[str(c) for c in w] for w in rep.witnesses])
    pi_v = generic_fibre_bivector(spec)
    if pi_v is None:
        return PencilObstruction("symbolic solve inconsistent")
    mism = []
    for fp in rep.points:
        pt = Point(spec.total.variables, fp.coords)
        try:
            val = pi_v.matrix_at(pt)
        except DenominatorVanishes:
            mism.append({"point": [str(c) for c in fp.coords], "why": "pole", "kind": fp.kind})
            continue
        if val != fp.pushed:
            mism.append({"point": [str(c) for c in fp.coords], "why": "mismatch", "kind": fp.kind})
    if mism:
        labels = [fp.fiber_bivector_rank for fp in rep.points]
        jumps = neighbour_witnesses([fp.coords for fp in rep.points], labels)
        rj = [{"a": [str(c) for c in rep.points[i].coords], "rank_a": labels[i],
               "b": [str(c) for c in rep.points[j].coords], "rank_b": labels[j]} for i, j in jumps]
        return PencilObstruction("fibre structures do not assemble into a vertical bivector", mism, rj)
    pi_h = spec.pi - pi_v
    jac = spec.p.jacobian()
    pv = pi_v.matrix()
    vertical = all(linalg.is_zero(x) for row in linalg.matmul(jac, pv) for x in row)
    meets = True
    for fp in rep.points:
        pt = Point(spec.total.variables, fp.coords)
        ph = pi_h.matrix_at(pt)
        n = spec.total.dim
        img = [apply_sharp(ph, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
        img = [v for v in img if any(x != 0 for x in v)]
        vert = vertical_frame(spec, pt)
        if img and vert and linalg.intersection_dim_rank(img, vert) != 0:
            meets = False
            break
    certs = {
        "[pi_V,pi_V]=0": schouten(pi_v, pi_v).is_zero(),
        "[pi_V,pi_H]=0": schouten(pi_v, pi_h).is_zero(),
        "[pi_H,pi_H]=0": schouten(pi_h, pi_h).is_zero(),
        "pi_V vertical": vertical,
        "im pi_H meets V trivially": meets,
        "pi_V pole-free on samples": True,
    }
    return PencilDecomposition(pi_v, pi_h, certs)


def linear_family_at(spec, pt):
    """Gr(pi) ∩ (V ⊕ T*) + V° at a point, as a LagrangianSubspace."""
    from .dirac import LagrangianSubspace, graph_of_bivector
    n = spec.total.dim
    vert = vertical_frame(spec, pt)
    _, ch = spec.chart_for(pt)
    ann = linalg.span_basis(ch.projection.jacobian_at(pt), n)
    gr = graph_of_bivector(spec.pi.matrix_at(pt))
    # elements (P^T xi, xi) with P^T xi ∈ V
    u = gr.vector_block()
    xi = gr.covector_block()
    k = gr.dim
    system = [[u[r][i] for r in range(k)] + [-v[i] for v in vert] for i in range(n)]
    ns = linalg.nullspace(system, k + len(vert))
    rows = []
    for vec in ns:
        c = vec[:k]
        rows.append([sum((c[r] * u[r][i] for r in range(k)), Fraction(0)) for i in range(n)] +
                    [sum((c[r] * xi[r][i] for r in range(k)), Fraction(0)) for i in range(n)])
    rows += [[Fraction(0)] * n + list(a) for a in ann]
    return LagrangianSubspace(n, rows)


# almost-coupling

@dataclass
class AlmostCouplingReport:
    verdict: Verdict
    horizontal: list = None
    obstruction: list = field(default_factory=list)
    limits: list = field(default_factory=list)

    def to_json(self):
        return {
            "verdict": self.verdict.value,
            "horizontal": None if self.horizontal is None else [h.to_dict() for h in self.horizontal],
            "obstruction": self.obstruction,
            "limits": self.limits,
        }


def _complete(basis, vert, n):
    """Complete span(basis) to a complement of V with coordinate vectors, in index order."""
    out = [list(b) for b in basis]
    cur = out + [list(v) for v in vert]
    r = linalg.rank(cur) if cur else 0
    for i in range(n):
        if r == n:
            break
        e = [Fraction(int(i == j)) for j in range(n)]
        trial = cur + [e]
        if linalg.rank(trial) > r:
            out.append(e)
            cur = trial
            r += 1
    return out


def almost_coupling_check(spec, horizontal=None, grid=None):
    """Test a given or canonical Ehresmann connection H with pi(H°, V°) = 0.

    The canonical candidate is pi^sharp(V°) completed by coordinate vectors in
    index order. A failure is reported as an obstruction for the candidates
    tried, never as a proof that no connection exists.
    """
    pts = grid if grid is not None else default_grid(spec)
    n = spec.total.dim
    k = spec.p.target.dim
    jac = spec.p.jacobian()
    pmat = spec.pi.matrix()
    if horizontal is not None:
        fields = list(horizontal)
        bad = []
        for pt in pts:
            if spec.chart_for(pt)[1] is None:
                continue
            hv = [f.vector_at(pt) for f in fields]
            vert = vertical_frame(spec, pt)
            if linalg.rank(hv + vert) < n:
                bad.append({"point": [str(c) for c in pt.coords], "why": "not complementary"})
                continue
            p = spec.pi.matrix_at(pt)
            ann_h = linalg.nullspace(hv, n)
            ann_v = linalg.span_basis(spec.chart_for(pt)[1].projection.jacobian_at(pt), n)
            for a in ann_h:
                img = apply_sharp(p, a)
                if any(sum(x * y for x, y in zip(img, b)) != 0 for b in ann_v):
                    bad.append({"point": [str(c) for c in pt.coords], "why": "pi(H°,V°) != 0"})
                    break
        return AlmostCouplingReport(Verdict.HOLDS if not bad else Verdict.FAILS, fields, bad)
    gens = [apply_sharp(pmat, row) for row in jac]
    gen_basis = linalg.span_basis(gens, n)
    vert_sym = linalg.nullspace(jac, n)
    cand = _complete(gen_basis, vert_sym, n)
    fields = [Multivector.from_components(spec.total, v) for v in cand]
    obstruction = []
    limits = []
    for pt in pts:
        idx, ch = spec.chart_for(pt)
        if ch is None:
            continue
        p = spec.pi.matrix_at(pt)
        pj = ch.projection.jacobian_at(pt)
        vert = linalg.nullspace(pj, n)
        local = _complete(linalg.span_basis([apply_sharp(p, r) for r in pj], n), vert, n)
        try:
            gv = [f.vector_at(pt) for f in fields]
        except DenominatorVanishes:
            obstruction.append({"point": [str(c) for c in pt.coords], "why": "canonical candidate has a pole",
                                "generic_rank": len(gen_basis), "rank": linalg.rank([apply_sharp(p, r) for r in pj])})
            continue
        if linalg.rank(gv + local) != len(local) or linalg.rank(gv) != len(local):
            obstruction.append({"point": [str(c) for c in pt.coords], "why": "candidate differs from local completion"})
    if obstruction:
        # limits of the candidate plane at the most degenerate witness, over all variable orders
        witness = max(obstruction, key=lambda o: sum(c == "0" for c in o["point"]))["point"]
        limits = plane_limits(gens, n, dict(zip(spec.total.variables, [Fraction(c) for c in witness])))
        verdict = Verdict.NOT_DETERMINED
    else:
        verdict = Verdict.HOLDS
    return AlmostCouplingReport(verdict, fields if not obstruction else None, obstruction, limits)


def _plucker(rows, n):
    k = len(rows)
    keys = list(combinations(range(n), k))
    return keys, [linalg.det([[r[i] for i in key] for r in rows]) for key in keys]


def _plane_from_plucker(keys, coords, n):
    """The k-plane with the given Plucker coordinates, as the kernel of v -> v ^ P."""
    k = len(keys[0])
    table = dict(zip(keys, coords))
    rows = []
    for big in combinations(range(n), k + 1):
        row = [Fraction(0)] * n
        for pos, i in enumerate(big):
            rest = tuple(j for j in big if j != i)
            row[i] = (-1) ** pos * table[rest]
        rows.append(row)
    return linalg.nullspace(rows, n) if rows else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def plane_limits(generators, n, target, max_orders=24):
    """Iterated limits of span(generators) at ``target``, grouped by the resulting plane."""
    gens = linalg.span_basis(generators, n)
    if not gens:
        return []
    keys, pl = _plucker(gens, n)
    names = list(target)
    orders = list(permutations(names))[:max_orders]
    found = {}
    for order in orders:
        lim = projective_limit(pl, target, list(order))
        if lim is None:
            continue
        plane = tuple(tuple(v) for v in linalg.span_basis(_plane_from_plucker(keys, lim, n), n))
        found.setdefault(plane, []).append(">".join(order))
    return [{"plane": [[str(x) for x in v] for v in plane], "orders": ords} for plane, ords in found.items()]


# coupling data

@dataclass
class CouplingData:
    horizontal: list      # lifts h(d/dy_a) of base coordinate fields
    pi: Multivector       # vertical bivector
    omega: Form           # horizontal 2-form


@dataclass
class CouplingVerdict:
    a: bool
    b: bool
    c: bool
    d: bool
    residuals: dict = field(default_factory=dict)

    @property
    def all(self):
        return self.a and self.b and self.c and self.d

    def to_json(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def coupling_data_from(spec):
    """Derive (H, pi, omega) from a coupling pi_Sigma over chart 0.

    H = pi^sharp(V°); omega is fixed by pi^sharp(iota_u omega) = u for u in H,
    which gives omega = sum_{a<b} G_ab dp_a ^ dp_b with G the inverse of
    N_cb = pi(dp_c, dp_b).
    """
    n = spec.total.dim
    jac = spec.p.jacobian()
    k = len(jac)
    pmat = spec.pi.matrix()
    gens = [apply_sharp(pmat, row) for row in jac]
    nmat = [[sum((jac[b][j] * gens[c][j] for j in range(n)), Scalar.const(0)) for b in range(k)] for c in range(k)]
    try:
        g = linalg.inverse(nmat)
    except ZeroDivisionError as exc:
        raise PreconditionError("pi^sharp(V°) is not complementary to V generically") from exc
    lifts = []
    for a in range(k):
        comps = [sum((g[a][c] * gens[c][j] for c in range(k)), Scalar.const(0)) for j in range(n)]
        lifts.append(Multivector.from_components(spec.total, comps))
    om = [[sum((g[a][b] * jac[a][i] * jac[b][j] for a in range(k) for b in range(k)), Scalar.const(0))
           for j in range(n)] for i in range(n)]
    omega = Form.from_matrix(spec.total, om)
    pi_v = generic_fibre_bivector(spec)
    return CouplingData(lifts, pi_v, omega)


def coupling_data_verify(cd, spec, grid=None):
    """The four conditions making (H, pi, omega) a Poisson structure.

    (a) [pi, pi] = 0; (b) L_{h_a} pi = 0; (c) d omega(h_a, h_b, h_c) = 0;
    (d) curv(d_a, d_b) = -[h_a, h_b] equals pi^sharp(d omega(h_b, h_a, .)).
    """
    n = spec.total.dim
    pts = grid if grid is not None else rational_grid(spec.total.variables, per_dim=3)
    jac = spec.p.jacobian()
    k = len(jac)
    for pt in pts:
        try:
            hv = [h.vector_at(pt) for h in cd.horizontal]
            vert = vertical_frame(spec, pt)
        except DenominatorVanishes:
            continue
        if linalg.rank(hv + vert) < n:
            raise PreconditionError("H is not complementary to V", witness=pt)
    for v in vertical_frame(spec):
        if not interior(v, cd.omega).is_zero():
            raise PreconditionError("omega does not annihilate vertical vectors")
    dom = d(cd.omega)
    a_ok = schouten(cd.pi, cd.pi).is_zero()
    b_res = [lie_derivative(h, cd.pi) for h in cd.horizontal]
    b_ok = all(r.is_zero() for r in b_res)
    c_ok = True
    for a in range(k):
        for b in range(a + 1, k):
            for c in range(b + 1, k):
                if not evaluate_form(dom, [cd.horizontal[a], cd.horizontal[b], cd.horizontal[c]]).is_zero():
                    c_ok = False
    d_ok = True
    d_res = {}
    for a in range(k):
        for b in range(a + 1, k):
            curv = -schouten(cd.horizontal[a], cd.horizontal[b])
            form1 = interior(cd.horizontal[a], interior(cd.horizontal[b], dom))
            rhs = sharp(cd.pi, form1)
            diff = curv - rhs
            if not diff.is_zero():
                d_ok = False
                d_res[f"{a + 1},{b + 1}"] = str(diff)
    return CouplingVerdict(a_ok, b_ok, c_ok, d_ok, d_res)


def assemble_from_coupling_data(cd, spec):
    """Bivector pi_V + h(omega^-1) built from coupling data (inverse construction)."""
    k = len(cd.horizontal)
    om = [[evaluate_form(cd.omega, [cd.horizontal[a], cd.horizontal[b]]) for b in range(k)] for a in range(k)]
    inv = linalg.inverse(om)
    total = cd.pi
    for a in range(k):
        for b in range(a + 1, k):
            # graph of omega on H inverts to sum (omega^-1)_ab h_a ^ h_b
            total = total + cd.horizontal[a].wedge(cd.horizontal[b]) * inv[a][b]
    return total


# horizontal foliation

@dataclass
class HorizontalGenerators:
    fields: list
    residuals: dict
    closed: bool

    def rank_at(self, point):
        vecs = [f.vector_at(point) for f in self.fields]
        return linalg.rank(vecs) if vecs else 0


def horizontal_generators(spec):
    """X_a = pi^sharp(d p_a), with closure residuals [X_a, X_b] - pi^sharp d(pi_M^{ab} o p)."""
    total = spec.total
    comps = spec.p.components
    fields = [sharp(spec.pi, d(Form.function(total, c))) for c in comps]
    residuals = {}
    base = spec.pi_base
    for a in range(len(comps)):
        for b in range(a + 1, len(comps)):
            br = schouten(fields[a], fields[b])
            if base is not None:
                pab = spec.p.pull(base.coefficient(a, b))
                br = br - sharp(spec.pi, d(Form.function(total, pab)))
            residuals[(a, b)] = br
    closed = all(r.is_zero() for r in residuals.values()) if base is not None else None
    return HorizontalGenerators(fields, residuals, closed)


# flows

@dataclass
class Trajectory:
    times: list
    states: list
    max_error_estimate: float
    energy_drift: float
    completed: bool = True
    message: str = ""

    def component(self, i):
        return [s[i] for s in self.states]


def _rk4_step(fns, y, h):
    def f(state):
        return [fn(*state) for fn in fns]
    k1 = f(y)
    k2 = f([a + h / 2 * b for a, b in zip(y, k1)])
    k3 = f([a + h / 2 * b for a, b in zip(y, k2)])
    k4 = f([a + h * b for a, b in zip(y, k3)])
    return [a + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]


def ham_flow(pi, f, x0, T, h, error_bound=1e-8, energy_tol=1e-6):
    """Classical RK4 for H_f = pi^sharp(df), with step-halving error control.

    Each step is taken once with h and twice with h/2; the half-step result is
    kept and |y_half - y_full| / 15 is the local error estimate.
    """
    chart = pi.chart
    f = chart.scalar(f)
    field_ = sharp(pi, d(Form.function(chart, f)))
    names = chart.variables
    fns = [c.compile(names) for c in field_.components()]
    energy = f.compile(names)
    y = [float(c) for c in (x0.coords if isinstance(x0, Point) else x0)]
    steps = int(round(T / h))
    times = [0.0]
    states = [list(y)]
    e0 = energy(*y)
    worst = 0.0
    drift = 0.0
    for s in range(steps):
        try:
            full = _rk4_step(fns, y, h)
            half = _rk4_step(fns, _rk4_step(fns, y, h / 2), h / 2)
        except (ZeroDivisionError, OverflowError, DomainError) as exc:
            return Trajectory(times, states, worst, drift, False, f"singular evaluation: {exc}")
        est = max(abs(a - b) for a, b in zip(half, full)) / 15 if y else 0.0
        if not all(math.isfinite(v) for v in half):
            return Trajectory(times, states, worst, drift, False, "non-finite state")
        if est > error_bound:
            raise StepSizeError(f"local error estimate {est:.3e} exceeds {error_bound:.1e}",
                                time=times[-1], estimate=est)
        worst = max(worst, est)
        y = half
        times.append((s + 1) * h)
        states.append(list(y))
        drift = max(drift, abs(energy(*y) - e0))
    traj = Trajectory(times, states, worst, drift)
    if drift > energy_tol:
        traj.message = f"energy drift {drift:.3e} exceeds {energy_tol:.1e}"
    return traj


# preimages under coordinate projections

def preimage_spec(spec, y_spec):
    """Preimage of a submanifold Y of the base under a coordinate projection.

    Parametrized by Y's parameters plus the total-space coordinates not used
    by p. Only projections whose components are distinct coordinates qualify.
    """
    total = spec.total
    comps = spec.p.components
    used = []
    for c in comps:
        names = c.variables()
        if not (c.is_exact and len(names) == 1 and c == Scalar.var(names[0])):
            raise PreconditionError("preimages are only built for coordinate projections")
        used.append(total.index(names[0]))
    from .calculus import Chart
    free = [i for i in range(total.dim) if i not in used]
    params = list(y_spec.source.variables) + [total.variables[i] for i in free]
    chart = Chart(params)
    out = [None] * total.dim
    for pos, i in enumerate(used):
        out[i] = chart.scalar(y_spec.embedding.components[pos])
    for i in free:
        out[i] = chart.scalar(total.variables[i])
    return SubmanifoldSpec(SmoothMap(chart, total, out))
