"""Where an embedded submanifold sits among the Poisson-Dirac / coregular conditions.

All pointwise work uses the Jacobian J of the embedding (ambient dim n,
source dim m): TX is the column space of J and the conormal space N*X is its
left kernel. Vectors are plain lists; a bivector matrix P acts on covectors by
u = P^T xi.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .calculus import Multivector, SmoothMap, Verdict
from .dirac import graph_of_bivector, neighbour_witnesses, pullback_point
from .errors import DenominatorVanishes, NotAnImmersion, UnsupportedModeError
from .scalars import Point, Scalar, iterated_limit, rational_grid


@dataclass(frozen=True)
class SubmanifoldSpec:
    embedding: SmoothMap
    level_functions: tuple = ()

    @property
    def source(self):
        return self.embedding.source

    @property
    def ambient(self):
        return self.embedding.target


@dataclass
class Frames:
    tangent: list
    conormal: list
    jacobian: list


def frames(spec, at):
    """Tangent vectors (Jacobian columns) and a conormal basis at a source point."""
    jac = spec.embedding.jacobian_at(at)
    m = spec.source.dim
    r = linalg.rank(jac) if m else 0
    if r < m:
        raise NotAnImmersion(at, r)
    tangent = linalg.transpose(jac, m) if m else []
    conormal = linalg.left_nullspace(jac) if m else \
        [[Fraction(1) if i == k else Fraction(0) for i in range(spec.ambient.dim)] for k in range(spec.ambient.dim)]
    return Frames(tangent, conormal, jac)


def apply_sharp(p, xi):
    n = len(p)
    zero = p[0][0] * 0 if n else 0
    return [sum((xi[i] * p[i][j] for i in range(n)), zero) for j in range(n)]


def conormal_image(p, conormal):
    """Vectors pi^sharp(nu) for nu in the conormal basis."""
    return [apply_sharp(p, nu) for nu in conormal]


def _nonzero_vectors(vs):
    return [v for v in vs if any(not linalg.is_zero(x) if not isinstance(x, float) else abs(x) > 1e-12 for x in v)]


def pd_intersection_dims(p, tangent, conormal):
    """dim(pi^sharp(N*X) ∩ TX) by two independent routes."""
    img = _nonzero_vectors(conormal_image(p, conormal))
    return linalg.intersection_dim_kernel(img, tangent), linalg.intersection_dim_rank(img, tangent)


def pointwise_induce(p, tangent, conormal, check=True):
    """Induced bivector on TX (in the basis ``tangent``) or None when not PD.

    For each tangent dual basis covector xi0 solve
    P^T(xi0 + sum lambda_k nu_k) = T w; the induced bivector has rows w.
    """
    n = len(p)
    m = len(tangent)
    if m == 0:
        return []
    t_cols = linalg.transpose(tangent, n) if tangent else []  # n x m
    img = conormal_image(p, conormal)
    c = len(conormal)
    system = [[img[k][i] for k in range(c)] + [-t_cols[i][a] for a in range(m)] for i in range(n)]
    numeric = linalg.has_float(system)
    # PD <=> the homogeneous system has no solution with nonzero pi^sharp part
    ns = linalg.nullspace(system, c + m)
    for vec in ns:
        lam = vec[:c]
        moved = [sum((lam[k] * img[k][i] for k in range(c)), 0 * system[0][0]) for i in range(n)]
        if _nonzero_vectors([moved]):
            return None
    # dual covectors xi0 with <xi0, t_b> = delta_ab
    tt = [list(t) for t in tangent]  # m x n
    out = []
    for a in range(m):
        rhs = [(1.0 if numeric else Fraction(1)) if b == a else (0.0 if numeric else Fraction(0)) for b in range(m)]
        xi0 = linalg.solve(tt, rhs)
        w = _induced_row(p, xi0, img, t_cols, c, m, n)
        if w is None:
            return None
        if check and conormal:
            alt = [x + y for x, y in zip(xi0, conormal[0])]
            w2 = _induced_row(p, alt, img, t_cols, c, m, n)
            if numeric:
                assert max(abs(x - y) for x, y in zip(w, w2)) < 1e-7
            else:
                assert w == w2, "induced bivector depends on the extension"
        out.append(w)
    return out


def _induced_row(p, xi0, img, t_cols, c, m, n):
    base = apply_sharp(p, xi0)
    system = [[img[k][i] for k in range(c)] + [-t_cols[i][a] for a in range(m)] for i in range(n)]
    sol = linalg.solve(system, [-x for x in base])
    if sol is None:
        return None
    return sol[c:]


def induced_via_pullback(p, jac):
    """Induced bivector via the Dirac pullback (second route)."""
    l = pullback_point(graph_of_bivector(p), jac)
    return l.to_bivector()


@dataclass
class PointClass:
    coords: tuple
    pd: bool
    q_rank: int
    coisotropic: bool
    poisson_submanifold: bool
    poisson_transversal: bool
    induced: list = None
    leaf_tangent: bool = None

    def to_json(self):
        return {
            "coords": [str(c) for c in self.coords],
            "pointwise_pd": self.pd,
            "q_rank": self.q_rank,
            "coisotropic": self.coisotropic,
            "poisson_submanifold": self.poisson_submanifold,
            "poisson_transversal": self.poisson_transversal,
            "induced": None if self.induced is None else [[str(x) for x in r] for r in self.induced],
            "leaf_tangent": self.leaf_tangent,
        }


def classify_point(spec, pi, at):
    fr = frames(spec, at)
    amb = spec.embedding.apply(at)
    p = pi.matrix_at(amb)
    if linalg.has_float(p) or linalg.has_float(fr.jacobian):
        p = linalg.to_float(p)
    n, m = spec.ambient.dim, spec.source.dim
    img = _nonzero_vectors(conormal_image(p, fr.conormal))
    dk, dr = pd_intersection_dims(p, fr.tangent, fr.conormal)
    assert dk == dr, "intersection dimension routes disagree"
    span = linalg.sum_dimension(fr.tangent, img)
    pd = dk == 0
    induced = pointwise_induce(p, fr.tangent, fr.conormal) if pd else None
    leaf_tangent = None
    if induced is not None:
        # image of the induced bivector pushed forward must lie in TX ∩ im(P^T)
        pushed = [linalg.matvec(linalg.transpose(fr.tangent, n) if m else [], row) for row in induced] if m else []
        amb_img = [apply_sharp(p, e) for e in _units(n, p)]
        cap = linalg.intersection_basis(_nonzero_vectors(amb_img), fr.tangent) if _nonzero_vectors(amb_img) else []
        leaf_tangent = all(linalg.contains(cap, v) for v in _nonzero_vectors(pushed)) if pushed else True
    return PointClass(
        coords=tuple(at.coords), pd=pd, q_rank=span - m,
        coisotropic=(span == m), poisson_submanifold=not img,
        poisson_transversal=(pd and span == n), induced=induced, leaf_tangent=leaf_tangent,
    )


def _units(n, p):
    one = 1.0 if linalg.has_float(p) else Fraction(1)
    return [[one if i == k else one * 0 for i in range(n)] for k in range(n)]


@dataclass
class InducedFamily:
    """Generic induced bivector over the function field of X, plus its singularities."""
    bivector: Multivector = None
    denominators: list = field(default_factory=list)
    pole_points: list = field(default_factory=list)
    limits: list = field(default_factory=list)
    generic_pd: bool = True

    @property
    def smooth_on_grid(self):
        return self.generic_pd and not self.pole_points

    def to_json(self):
        return {
            "generic_pd": self.generic_pd,
            "bivector": None if self.bivector is None else self.bivector.to_dict(),
            "denominators": [str(d) for d in self.denominators],
            "pole_points": [[str(c) for c in p] for p in self.pole_points],
            "limits": self.limits,
        }


def _symbolic_frames(spec):
    jac = spec.embedding.jacobian()
    m = spec.source.dim
    tangent = linalg.transpose(jac, m)
    conormal = linalg.left_nullspace(jac)
    return tangent, conormal


def induced_bivector_symbolic(spec, pi, grid=None):
    """Solve the PD system over QQ(X); report poles and iterated limits there."""
    if not (spec.embedding.is_exact and pi.is_exact):
        raise UnsupportedModeError("symbolic induction needs EXACT data")
    chart = spec.source
    m = chart.dim
    n = spec.ambient.dim
    if m == 0:
        return InducedFamily(bivector=Multivector.zero(chart, 2))
    tangent, conormal = _symbolic_frames(spec)
    pmat = [[spec.embedding.pull(x) for x in row] for row in pi.matrix()]
    mat = pointwise_induce(pmat, tangent, conormal, check=False)
    if mat is None:
        return InducedFamily(generic_pd=False)
    biv = Multivector.from_matrix(chart, mat)
    dens = []
    for _, v in biv.items():
        den = v.denominator()
        if not den.is_constant() and all(den != d for d in dens):
            dens.append(den)
    fam = InducedFamily(bivector=biv, denominators=dens)
    pts = grid if grid is not None else rational_grid(chart.variables)
    for pt in pts:
        for den in dens:
            if den.evaluate(pt) == 0:
                fam.pole_points.append(tuple(pt.coords))
                break
    for pole in fam.pole_points:
        target = dict(zip(chart.variables, pole))
        for key, v in biv.items():
            if v.denominator().evaluate(Point(chart.variables, pole)) != 0:
                continue
            vals = {}
            for order in _orders(chart.variables):
                lim = iterated_limit(v, target, order)
                vals[">".join(order)] = None if lim is None else str(lim)
            fam.limits.append({"point": [str(c) for c in pole], "entry": [k + 1 for k in key], "limits": vals})
    return fam


def _orders(variables):
    from itertools import permutations
    return [list(o) for o in permutations(variables)]


@dataclass
class HierarchyReport:
    chart: tuple
    points: list
    pointwise_pd: bool
    coisotropic: bool
    poisson_submanifold: bool
    poisson_transversal: bool
    coregular: Verdict
    coregular_witnesses: list
    q_rank_profile: dict
    generic_q_rank: int = None
    induced: InducedFamily = None
    obstructions: list = field(default_factory=list)
    splitting_ok: bool = None
    level_functions_ok: bool = None

    def to_json(self):
        return {
            "chart": list(self.chart),
            "pointwise_pd": self.pointwise_pd,
            "coisotropic": self.coisotropic,
            "poisson_submanifold": self.poisson_submanifold,
            "poisson_transversal": self.poisson_transversal,
            "coregular": self.coregular.value,
            "coregular_witnesses": [[str(c) for c in w] for w in self.coregular_witnesses],
            "q_rank_profile": {str(k): v for k, v in sorted(self.q_rank_profile.items())},
            "generic_q_rank": self.generic_q_rank,
            "induced": None if self.induced is None else self.induced.to_json(),
            "obstructions": self.obstructions,
            "splitting_ok": self.splitting_ok,
            "level_functions_ok": self.level_functions_ok,
            "points": [p.to_json() for p in self.points],
        }


def generic_q_rank(spec, pi):
    """rank(TX + pi^sharp N*X) - m over the function field QQ(X)."""
    tangent, conormal = _symbolic_frames(spec)
    pmat = [[spec.embedding.pull(x) for x in row] for row in pi.matrix()]
    img = [apply_sharp(pmat, nu) for nu in conormal]
    rows = [list(t) for t in tangent] + [v for v in img if any(not x.is_zero() for x in v)]
    return linalg.rank(rows) - spec.source.dim


def classify(spec, pi, grid=None, splitting=None):
    """Pointwise classification on a grid plus symbolic analysis in exact mode.

    ``splitting``: optional list of vector fields on the source chart whose
    pushforwards (given as ambient vector fields along X) complement TX.
    """
    chart = spec.source
    pts = grid if grid is not None else rational_grid(chart.variables)
    results = []
    for pt in pts:
        try:
            results.append(classify_point(spec, pi, pt))
        except DenominatorVanishes:
            continue
    all_pd = all(r.pd for r in results)
    profile = {}
    for r in results:
        profile[r.q_rank] = profile.get(r.q_rank, 0) + 1
    witnesses = []
    exact = spec.embedding.is_exact and pi.is_exact
    gen = None
    induced = None
    obstructions = []
    if exact:
        gen = generic_q_rank(spec, pi)
        induced = induced_bivector_symbolic(spec, pi, pts)
        if not induced.generic_pd:
            obstructions.append({"kind": "not-pd-generically"})
        for pole in induced.pole_points:
            obstructions.append({"kind": "induced-family-singular", "point": [str(c) for c in pole]})
    if not all_pd:
        verdict = Verdict.FAILS
        witnesses = [r.coords for r in results if not r.pd]
    elif len(profile) > 1 or (gen is not None and profile and gen not in profile):
        verdict = Verdict.FAILS
        top = gen if gen is not None else max(profile)
        witnesses = [r.coords for r in results if r.q_rank != top]
        if not witnesses:
            witnesses = [r.coords for r in results]
    else:
        verdict = Verdict.HOLDS if exact else Verdict.NOT_DETERMINED
    if verdict is Verdict.FAILS:
        labels = [r.q_rank for r in results]
        jumps = neighbour_witnesses([r.coords for r in results], labels)
        for i, j in jumps[:20]:
            obstructions.append({"kind": "q-rank-jump",
                                 "a": [str(c) for c in results[i].coords], "rank_a": labels[i],
                                 "b": [str(c) for c in results[j].coords], "rank_b": labels[j]})
    report = HierarchyReport(
        chart=chart.variables, points=results, pointwise_pd=all_pd,
        coisotropic=all(r.coisotropic for r in results),
        poisson_submanifold=all(r.poisson_submanifold for r in results),
        poisson_transversal=all(r.poisson_transversal for r in results),
        coregular=verdict, coregular_witnesses=witnesses, q_rank_profile=profile,
        generic_q_rank=gen, induced=induced, obstructions=obstructions,
    )
    _check_hierarchy(report)
    if splitting is not None:
        report.splitting_ok = all(verify_splitting(spec, pi, splitting, pt) for pt in pts)
    if spec.level_functions:
        report.level_functions_ok = check_level_functions(spec, pts)
    return report


def _check_hierarchy(report):
    """Implications that must hold between the verdicts."""
    for r in report.points:
        if r.poisson_transversal:
            assert r.pd
        if r.poisson_submanifold:
            assert r.coisotropic and r.pd
    if report.coregular is Verdict.HOLDS:
        assert report.pointwise_pd


def verify_splitting(spec, pi, complement, at):
    """Whether a complement E of TX gives an orthogonal splitting at a point.

    In the adapted basis B = [TX | E] the bivector P' = B^-1 P B^-T must have
    zero mixed block.
    """
    fr = frames(spec, at)
    amb = spec.embedding.apply(at)
    p = pi.matrix_at(amb)
    n, m = spec.ambient.dim, spec.source.dim
    e_vecs = [f.vector_at(amb) for f in complement]
    cols = fr.tangent + e_vecs
    b = linalg.transpose(cols, n)
    if linalg.rank(b) < n:
        return False
    binv = linalg.inverse(b)
    pprime = linalg.matmul(linalg.matmul(binv, p), linalg.transpose(binv))
    return all(linalg.is_zero(pprime[i][j]) for i in range(m) for j in range(m, n))


def check_level_functions(spec, pts):
    """Each level function is constant along X and their differentials span N*X."""
    emb = spec.embedding
    for h in spec.level_functions:
        pulled = emb.pull(h)
        if pulled.is_exact:
            if any(not pulled.diff(v).is_zero() for v in spec.source.variables):
                return False
    for pt in pts:
        amb = emb.apply(pt)
        rows = []
        for h in spec.level_functions:
            rows.append([h.diff(v).evaluate(amb) for v in spec.ambient.variables])
        fr = frames(spec, pt)
        if linalg.rank(rows) != len(fr.conormal):
            return False
        for r in rows:
            if not linalg.contains(fr.conormal, r):
                return False
    return True
