"""Command bodies shared by the CLI and the fixture catalogue.

Each ``run_*`` function takes parsed input plus :class:`Options` and returns
``(result, ok)``: a JSON-ready dict and the headline verdict.
"""
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import lie, linalg, toric
from .calculus import Verdict, is_poisson, map_related, poisson_verdict
from .dirac import GraphOfBivector, Pullback, graph_of_bivector
from .errors import DenominatorVanishes, DomainError, NotLagrangian, PreconditionError
from .scalars import rational_grid
from .submanifolds import classify
from .submersions import (almost_coupling_check, coupling_data_from, coupling_data_verify, fiber_report,
                          ham_flow, horizontal_generators, pencil_decompose)


@dataclass
class Options:
    seed: int = 0
    per_dim: int = None
    tol: float = 1e-9
    name: str = None
    almost_coupling: bool = False


def _grid(doc, chart, opts, per_dim=None):
    if doc.grid is not None:
        return doc.grid.build(chart, seed=opts.seed if opts.seed else None, per_dim=opts.per_dim)
    return rational_grid(chart.variables, per_dim=opts.per_dim or per_dim or 5, seed=opts.seed)


def _selected(table, opts):
    if opts.name is None:
        return sorted(table.items())
    if opts.name not in table:
        raise PreconditionError(f"no entry named {opts.name!r}")
    return [(opts.name, table[opts.name])]


def _text(coords):
    return [str(c) for c in coords]


# check

def map_report(phi, grid):
    """Jacobian rank profile of a map over a grid, with the points of lowest rank."""
    profile = {}
    ranks = []
    for pt in grid:
        try:
            r = linalg.rank(phi.jacobian_at(pt))
        except (DenominatorVanishes, DomainError):
            continue
        ranks.append((pt, r))
        profile[r] = profile.get(r, 0) + 1
    full = min(phi.source.dim, phi.target.dim)
    critical = [_text(pt.coords) for pt, r in ranks if r < full]
    return {"rank_profile": {str(k): v for k, v in sorted(profile.items())}, "critical_points": critical}


def run_check(doc, opts):
    out = {"bivectors": {}, "maps": {}}
    ok = True
    for name, biv in sorted(doc.bivectors.items()):
        if biv.is_exact:
            holds = is_poisson(biv)
            out["bivectors"][name] = {"poisson": holds, "mode": "exact"}
        else:
            verdict, residual = poisson_verdict(biv, tol=opts.tol)
            holds = verdict is not Verdict.FAILS
            out["bivectors"][name] = {"poisson": verdict.value, "mode": "numeric", "residual": residual}
        ok = ok and bool(holds)
    for name, (phi, src, tgt) in sorted(doc.relations.items()):
        entry = map_report(phi, _grid(doc, phi.source, opts, 3))
        entry["poisson_map"] = map_related(phi, doc.bivectors[src], doc.bivectors[tgt])
        out["maps"][name] = entry
        ok = ok and entry["poisson_map"]
    return out, ok


# classify

def _compare(entry, doc, grid):
    """Pullback of the ambient graph equals the graph of the comparison bivector at each grid point."""
    pi = doc.bivectors[entry.ambient]
    target = doc.bivectors[entry.compare]
    fam = Pullback(GraphOfBivector(pi), entry.spec.embedding)
    mismatches = []
    checked = 0
    for pt in grid:
        try:
            got = fam.at(pt)
            want = graph_of_bivector(target.matrix_at(pt))
        except (DenominatorVanishes, DomainError, ZeroDivisionError, OverflowError):
            continue
        except NotLagrangian:
            # numerically degenerate sample: counted, and reported as a mismatch
            checked += 1
            mismatches.append(_text(pt.coords))
            continue
        checked += 1
        if got != want:
            mismatches.append(_text(pt.coords))
    return {"checked": checked, "matches": not mismatches and checked > 0, "mismatches": mismatches}


def run_classify(doc, opts):
    out = {}
    ok = True
    for name, entry in _selected(doc.submanifolds, opts):
        grid = _grid(doc, entry.spec.source, opts)
        rep = classify(entry.spec, doc.bivectors[entry.ambient], grid, splitting=entry.splitting)
        res = rep.to_json()
        ranks = {}
        for p in rep.points:
            if p.induced is not None:
                r = linalg.rank(p.induced) if p.induced and p.induced[0] else 0
                ranks[r] = ranks.get(r, 0) + 1
        res["induced_rank_profile"] = {str(k): v for k, v in sorted(ranks.items())}
        if entry.compare:
            res["pullback"] = _compare(entry, doc, grid)
            ok = ok and res["pullback"]["matches"]
        out[name] = res
        ok = ok and rep.coregular is not Verdict.FAILS
    return out, ok


# submersions

def run_submersion(doc, opts):
    out = {}
    ok = True
    for name, entry in _selected(doc.submersions, opts):
        spec = entry.spec
        grid = _grid(doc, spec.total, opts, 5)
        rep = fiber_report(spec, grid)
        res = rep.to_json()
        res.pop("points")
        kinds = {}
        for p in rep.points:
            if p.kind is not None:
                kinds[p.kind] = kinds.get(p.kind, 0) + 1
        res["fiber_kinds"] = dict(sorted(kinds.items()))
        res["kind_by_point"] = [{"point": _text(p.coords), "kind": p.kind} for p in rep.points]
        exact = spec.pi.is_exact and all(c.projection.is_exact for c in spec.charts)
        if exact and rep.coregular is Verdict.HOLDS:
            pen = pencil_decompose(spec, grid)
            res["pencil"] = {"ok": pen.ok, **pen.to_json()}
        if exact and rep.coupling and len(spec.charts) == 1 and spec.pi_base is not None:
            cd = coupling_data_from(spec)
            ver = coupling_data_verify(cd, spec)
            res["coupling_data"] = {
                "horizontal": [h.to_dict() for h in cd.horizontal],
                "pi": cd.pi.to_dict() if cd.pi is not None else None,
                "omega": cd.omega.to_dict(),
                "conditions": ver.to_json(),
            }
        if exact and len(spec.charts) == 1 and spec.pi_base is not None:
            hg = horizontal_generators(spec)
            res["horizontal_closed"] = hg.closed
        if exact and (entry.horizontal is not None or opts.almost_coupling):
            ac = almost_coupling_check(spec, entry.horizontal, grid)
            res["almost_coupling"] = ac.to_json()
        out[name or "submersion"] = res
        ok = ok and rep.coregular is not Verdict.FAILS
    if doc.flow is not None:
        out["flow"] = run_flow(doc)
    return out, ok


def run_flow(doc):
    fl = doc.flow
    pi = doc.bivectors[fl.bivector]
    traj = ham_flow(pi, fl.function, fl.start, fl.T, fl.h)
    last = traj.states[-1]
    res = {
        "steps": len(traj.times) - 1,
        "completed": traj.completed,
        "final_time": round(traj.times[-1], 12),
        "final_state": [float(f"{v:.12g}") for v in last],
        "max_error_estimate": float(f"{traj.max_error_estimate:.6g}"),
        "energy_drift": float(f"{traj.energy_drift:.6g}"),
        "message": traj.message,
    }
    names = pi.chart.variables
    if "x" in names and "z" in names:
        ix, iz = names.index("x"), names.index("z")
        res["max_leaf_defect"] = float(f"{max(abs(s[ix] - math.atan(s[iz])) for s in traj.states):.6g}")
        res["max_abs_x"] = float(f"{max(abs(s[ix]) for s in traj.states):.12g}")
    return res


# toric

def polytope_from_arg(arg):
    builtins = {"interval": toric.interval, "triangle": toric.triangle, "square": toric.square,
                "skew-triangle": toric.skew_triangle}
    if arg in builtins:
        return builtins[arg](), arg
    with open(arg, encoding="utf-8") as fh:
        text = fh.read()
    return polytope_from_text(text), text


def polytope_from_text(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"polytope JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}") from None
    try:
        return toric.DelzantPolytope.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"polytope JSON is missing or has a bad field: {exc}") from None


def run_toric(poly, what=("leaves", "strata", "kernel", "delzant")):
    out = {}
    ok = True
    dz = toric.is_delzant(poly)
    if "delzant" in what:
        out["delzant"] = {"ok": dz.ok, "reason": dz.reason,
                          "vertex": None if dz.vertex is None else _text(dz.vertex),
                          "determinant": dz.determinant}
        ok = ok and dz.ok
    fs = None
    if "leaves" in what or "strata" in what:
        fs = toric.faces(poly)
    if "leaves" in what:
        out["leaf_count"] = len(fs)
    if "strata" in what:
        out["strata"] = [sorted(i + 1 for i in f) for f in fs]
    if "kernel" in what:
        kl = toric.kernel_lattice(poly)
        out["kernel"] = kl.basis
        out["invariant_factors"] = kl.invariant_factors
    return out, ok


# Lie theory

def run_lie(triple_kind=None, data=None, k_choice="t", spectral=0, seed=0):
    out = {}
    if triple_kind is not None:
        t = lie.standard_triple(triple_kind)
        checks = lie.manin_check(t)
        out["manin"] = checks
        ok = all(checks.values())
        if k_choice is not None:
            k = {"t": t.parts["t"], "0": lie.Subspace(t.algebra.dim, []), "g": t.g}[k_choice]
            qc = lie.quotient_conditions(t, k)
            out["quotient"] = {"k": k_choice, **qc.to_json()}
        out["tk_in_h"] = lie.tk_in_h(t)
        if spectral:
            out["spectral"] = lie.spectral_check(t, spectral, seed)
        out["weyl_order"] = lie.weyl_order("A", t.n - 1)
        return out, ok
    alg, pairing = lie.algebra_from_json(data)
    val = lie.validate_algebra(alg)
    out["algebra"] = {"ok": val.ok, "antisymmetry": val.antisymmetry, "jacobi": val.jacobi}
    ok = val.ok
    if pairing is not None:
        out["pairing"] = {"symmetric": pairing.is_symmetric(), "nondegenerate": pairing.is_nondegenerate(),
                          "invariant": pairing.is_invariant(alg)}
        if "g" in data and "h" in data:
            d = alg.dim
            g = lie.Subspace(d, [[Fraction(str(x)) for x in v] for v in data["g"]])
            h = lie.Subspace(d, [[Fraction(str(x)) for x in v] for v in data["h"]])
            checks = lie.manin_check(lie.ManinTriple(alg, pairing, g, h))
            out["manin"] = checks
            ok = ok and all(checks.values())
    return out, ok


def run_positivity(j, pi):
    res = lie.positivity(j, pi)
    return {"positive": res.positive, "reason": res.reason,
            "witness": None if res.witness is None else _text(res.witness)}, res.positive


# leaf counts

def leaf_count_of(source):
    """Leaf count of a building block: {"weyl": [type, rank]} or {"polytope": name-or-json}."""
    if "weyl" in source:
        kind, rank = source["weyl"]
        return lie.weyl_order(kind, int(rank))
    if "polytope" in source:
        p = source["polytope"]
        poly = toric.DelzantPolytope.from_json(p) if isinstance(p, dict) else polytope_from_arg(p)[0]
        return toric.leaf_count_toric(poly)
    if "count" in source:
        return int(source["count"])
    raise PreconditionError("a leaf source needs 'weyl', 'polytope' or 'count'")


def run_leaves(data):
    base = leaf_count_of(data["base"])
    tag = data.get("tag")
    out = {"base_leaves": base, "tag": tag, "bundles": []}
    for fib in data["fibers"]:
        f = leaf_count_of(fib)
        spec = toric.AssociatedLeafSpec(base, f, tag, fib.get("label", ""))
        out["bundles"].append({"label": spec.label, "fiber_leaves": f,
                               "total_leaves": toric.associated_leaf_count(spec)})
    return out, True


def run_pullback(doc, opts):
    """Only the pullback comparison, for inputs whose pointwise data is floating point."""
    out = {}
    ok = True
    for name, entry in _selected(doc.submanifolds, opts):
        if not entry.compare:
            continue
        grid = _grid(doc, entry.spec.source, opts)
        out[name] = {"pullback": _compare(entry, doc, grid)}
        ok = ok and out[name]["pullback"]["matches"]
    return out, ok


# actions

def run_action(data):
    """Bivector induced on M by an abelian action with a constant bivector on the acting space.

    ``data``: vars, pi_A (matrix), generators (component strings of the
    infinitesimal action of each basis vector), optional orbits, each with a
    subspace ``basis`` of the acting space and sample ``points``.
    """
    from .calculus import Chart, Multivector
    chart = Chart(data["vars"], data.get("name", "M"))
    fields = [Multivector.from_components(chart, [chart.scalar(str(c)) for c in g]) for g in data["generators"]]
    pi_a = [[Fraction(str(x)) for x in row] for row in data["pi_A"]]
    ind = lie.induced_from_action(pi_a, fields)
    out = {"bivector": ind.bivector.to_dict(), "poisson": ind.poisson, "commuting": ind.commuting,
           "invariant": lie.is_invariant_under(ind.bivector, fields)}
    ok = ind.poisson
    if len(pi_a) % 2 == 0:
        pos = lie.positivity(lie.standard_complex_structure(len(pi_a) // 2), pi_a)
        out["pi_A_positive"] = pos.positive
    orbits = []
    for orb in data.get("orbits", []):
        basis = [[Fraction(str(x)) for x in v] for v in orb["basis"]]
        pd = []
        for coords in orb["points"]:
            pt = chart.point(*[Fraction(str(c)) for c in coords])
            vals = [f.vector_at(pt) for f in fields]
            tangent = [[sum((b[i] * vals[i][j] for i in range(len(fields))), Fraction(0)) for j in range(chart.dim)]
                       for b in basis]
            tangent = [t for t in tangent if any(t)]
            pd.append(lie.pd_for_subspace(ind.bivector.matrix_at(pt), linalg.span_basis(tangent, chart.dim)))
        orbits.append({"label": orb.get("label", ""), "pointwise_pd": pd, "all_pd": all(pd)})
    if orbits:
        out["orbits"] = orbits
    return out, ok


def run_positivity_cases(data):
    j = lie.standard_complex_structure(int(data["complex_dim"]))
    cases = []
    for case in data["cases"]:
        res, _ = run_positivity(j, [[Fraction(str(x)) for x in row] for row in case["pi"]])
        cases.append({"label": case["label"], **res})
    return {"cases": cases}, True


def run_git(data):
    """Orbit test at sample points of every GIT stratum, for the standard positive bivector."""
    poly, _ = polytope_from_arg(data["polytope"])
    d = poly.d
    pi_a = toric.standard_positive(d, Fraction(str(data.get("scale", 1))))
    samples = toric.stratum_samples(poly)
    results = [toric.git_coregular_sample(poly, pi_a, z) for _, z in samples]
    big = toric.induced_toric_bivector(pi_a, d)
    out = {
        "samples": len(samples),
        "strata": len({f for f, _ in samples}),
        "all_coregular": all(results),
        "pi_A_positive": lie.positivity(lie.standard_complex_structure(d), pi_a).positive,
        "totally_real": toric.totally_real(big),
        "induced_poisson": is_poisson(big),
    }
    return out, out["all_coregular"]
