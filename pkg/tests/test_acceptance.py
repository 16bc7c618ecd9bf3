"""Acceptance suite: one check per criterion, each reported as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed in the
terminal summary) or ``python tests/test_acceptance.py``.
"""
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

sys.path.insert(0, str(Path(__file__).parent))

from poissonkit import analyses, lie, linalg, toric  # noqa: E402
from poissonkit.calculus import Chart, Multivector, is_poisson  # noqa: E402
from poissonkit.scalars import random_rational_points  # noqa: E402
from poissonkit.submanifolds import pointwise_induce  # noqa: E402
from poissonkit.submersions import pencil_decompose, push_fibre_matrix, vertical_frame  # noqa: E402

from helpers import brute_force_inputs, load, same_scalar, delzant_examples as delzant_polytopes  # noqa: E402
from oracles import brute_force_faces  # noqa: E402

RESULTS = {}


def _expect(failures, cond, message):
    if not cond:
        failures.append(message)


def _classify(name):
    result, _ = analyses.run_classify(load(name), analyses.Options())
    return next(iter(result.values()))


def _submersion(name, key="submersion"):
    result, _ = analyses.run_submersion(load(name), analyses.Options())
    return result[key]


# 1. Jacobi suite

def _action_bivector(generators):
    chart = Chart(("x", "y"))
    fields = [Multivector.from_components(chart, [chart.scalar(c) for c in g]) for g in generators]
    return lie.induced_from_action([[0, 1], [-1, 0]], fields).bivector


def jacobi_bivectors():
    out = []
    for name, biv in [("intersections-not-manifolds", "pi"), ("no-clean-intersection", "pi"),
                      ("diagonal-disk", "pi"), ("clean-not-split", "pi"), ("so3-axis", "pi"),
                      ("couplings-over-leaves", "pi"), ("pencil-not-almost-coupling", "pi"),
                      ("discontinuous-fibres", "pi"), ("toy-cp1", "Pi"), ("vertical", "pi")]:
        out.append((f"{name}:{biv}", load(name).bivectors[biv]))
    out.append(("translations", _action_bivector([["1", "0"], ["0", "1"]])))
    out.append(("exponential", _action_bivector([["x", "y"], ["-y", "x"]])))
    return out


def criterion_1():
    failures = []
    start = time.perf_counter()
    bivs = jacobi_bivectors()
    for label, pi in bivs:
        _expect(failures, pi.is_exact and is_poisson(pi), f"{label} is not Poisson")
    elapsed = time.perf_counter() - start
    _expect(failures, len(bivs) == 12, f"expected 12 bivectors, got {len(bivs)}")
    _expect(failures, elapsed < 10, f"runtime {elapsed:.2f}s")
    return failures, f"{len(bivs)} bivectors, {elapsed:.2f}s"


# 2. Hierarchy verdicts

def criterion_2():
    failures = []
    axis = _classify("so3-axis")
    _expect(failures, axis["pointwise_pd"] is True, "so3 axis: not pointwise PD")
    _expect(failures, axis["coregular"] == "fails", "so3 axis: coregular should fail")
    _expect(failures, ["0"] in axis["coregular_witnesses"], "so3 axis: witness t=0 missing")

    parab = _classify("clean-not-split")
    _expect(failures, set(parab["induced"]["bivector"]) == {"1,2"}
            and same_scalar(parab["induced"]["bivector"]["1,2"], "t", ("t", "s")), "parabola: induced is not t")
    _expect(failures, parab["coregular"] == "fails", "parabola: coregular should fail")

    plane = _classify("no-clean-intersection")
    _expect(failures, set(plane["induced"]["bivector"]) == {"1,2"}
            and same_scalar(plane["induced"]["bivector"]["1,2"], "1/2", ("x", "y")), "plane: induced is not 1/2")
    _expect(failures, plane["induced_rank_profile"] == {"2": sum(plane["induced_rank_profile"].values())},
            "plane: induced structure not symplectic")

    disk = _classify("diagonal-disk")
    expected = "((t^2 + s^2)^2 - t^2)/(2*t^2 + 2*s^2)"
    _expect(failures, same_scalar(disk["induced"]["bivector"]["1,2"], expected, ("t", "s")),
            "diagonal disk: wrong coefficient")
    _expect(failures, {"kind": "induced-family-singular", "point": ["0", "0"]} in disk["obstructions"],
            "diagonal disk: no obstruction at the origin")

    point = _classify("point")
    _expect(failures, point["coregular"] == "holds", "point: not coregular")
    return failures, "so3 axis, parabola, plane, diagonal disk, point"


# 3. Submersion suite

def criterion_3():
    failures = []
    cot = _submersion("cotangent")
    _expect(failures, cot["fiber_pd"] is False, "cotangent: fibres should not be PD")

    cpl = _submersion("couplings-over-leaves")
    _expect(failures, cpl["coupling"] is True, "couplings over leaves: not a coupling")

    disc = _submersion("discontinuous-fibres")
    _expect(failures, disc["coregular"] == "holds", "discontinuous fibres: not coregular")
    pen = disc["pencil"]
    _expect(failures, pen["ok"] is False and pen["rank_jumps"], "discontinuous fibres: no rank-jump obstruction")
    for jump in pen["rank_jumps"]:
        on_axis = [_on_axis(jump["a"]), _on_axis(jump["b"])]
        _expect(failures, sorted(on_axis) == [False, True], f"rank jump {jump} does not cross an axis")
    for entry in disc["kind_by_point"]:
        want = "symplectic" if _on_axis(entry["point"]) else "trivial"
        _expect(failures, entry["kind"] == want, f"fibre kind at {entry['point']}: {entry['kind']}")

    orth = _submersion("pencil-not-almost-coupling")["pencil"]
    _expect(failures, orth["ok"] is True and orth["pi_V"] == {}, "orthogonal pencil: pi_V is not zero")
    for key in ("[pi_V,pi_V]=0", "[pi_V,pi_H]=0", "[pi_H,pi_H]=0"):
        _expect(failures, orth["certificates"][key] is True, f"orthogonal pencil: {key} not certified")
    return failures, "cotangent, couplings, discontinuous fibres, orthogonal pencil"


def _on_axis(coords):
    x0, y0, x1, y1 = (Fraction(c) for c in coords)
    return (x0 == 0 and y0 == 0) or (x1 == 0 and y1 == 0)


# 4. Pencil cross-check

PENCIL_CASES = ["vertical", "couplings-over-leaves", "pencil-not-almost-coupling"]


def criterion_4():
    failures = []
    rng = random.Random(20240601)
    checked = 0
    for name in PENCIL_CASES:
        spec = next(iter(load(name).submersions.values())).spec
        dec = pencil_decompose(spec)
        _expect(failures, dec.ok, f"{name}: pencil expected")
        if not dec.ok:
            continue
        pts = random_rational_points(spec.total.variables, 20, rng)
        for pt in pts:
            jac = spec.p.jacobian_at(pt)
            n = spec.total.dim
            vert = vertical_frame(spec, pt)
            ann = linalg.span_basis(jac, n)
            fb = pointwise_induce(spec.pi.matrix_at(pt), vert, ann)
            pointwise = push_fibre_matrix(vert, fb, n) if vert else [[Fraction(0)] * n for _ in range(n)]
            _expect(failures, dec.pi_v.matrix_at(pt) == pointwise, f"{name}: mismatch at {pt}")
            checked += 1
    _expect(failures, checked == 20 * len(PENCIL_CASES), f"only {checked} points checked")
    return failures, f"{checked} random rational points over {len(PENCIL_CASES)} pencils"


# 5. Flow probe

def criterion_5():
    failures = []
    doc = load("couplings-over-leaves")
    start = time.perf_counter()
    res = analyses.run_flow(doc)
    elapsed = time.perf_counter() - start
    _expect(failures, res["completed"], f"flow stopped: {res['message']}")
    _expect(failures, res["max_leaf_defect"] < 1e-6, f"leaf defect {res['max_leaf_defect']}")
    _expect(failures, res["max_abs_x"] < math.pi / 2, f"max |x| = {res['max_abs_x']}")
    _expect(failures, res["max_error_estimate"] < 1e-8, f"step-halving estimate {res['max_error_estimate']}")
    _expect(failures, elapsed < 1.0, f"runtime {elapsed:.2f}s")
    return failures, f"defect {res['max_leaf_defect']:.2e}, max|x| {res['max_abs_x']}, {elapsed:.2f}s"


# 6. Lie suite

def criterion_6():
    failures = []
    for kind in ("A1", "A2"):
        t = lie.standard_triple(kind)
        checks = lie.manin_check(t)
        _expect(failures, all(checks.values()), f"{kind}: Manin check failed {checks}")
        samples = lie.default_samples(t)
        _expect(failures, len(samples) >= 3 and all(g.is_unitary() for g in samples),
                f"{kind}: fewer than 3 exact unitary samples")
        qc = lie.quotient_conditions(t, t.parts["t"], samples)
        _expect(failures, qc.a and qc.b and qc.c, f"{kind}: conditions a-c")
        _expect(failures, qc.d_pd and qc.d_trivial, f"{kind}: sampled conditions")
    j = lie.standard_complex_structure(1)
    cases = {"+": ([[0, 1], [-1, 0]], True), "-": ([[0, -1], [1, 0]], False), "0": ([[0, 0], [0, 0]], True)}
    for label, (m, want) in cases.items():
        got = lie.positivity(j, [[Fraction(x) for x in r] for r in m]).positive
        _expect(failures, got == want, f"positivity of {label}: {got}")
    return failures, "A1, A2, positivity"


# 7. Toric counts

def criterion_7():
    failures = []
    start = time.perf_counter()
    counts = {name: toric.leaf_count_toric(fn()) for name, fn in
              [("interval", toric.interval), ("triangle", toric.triangle), ("square", toric.square)]}
    kernels = {name: toric.kernel_lattice(fn()).basis for name, fn in
               [("interval", toric.interval), ("triangle", toric.triangle), ("square", toric.square)]}
    skew = toric.is_delzant(toric.skew_triangle())
    library_time = time.perf_counter() - start
    _expect(failures, counts == {"interval": 3, "triangle": 7, "square": 9}, f"counts {counts}")
    _expect(failures, kernels == {"interval": [[1, 1]], "triangle": [[1, 1, 1]],
                                  "square": [[1, 1, 0, 0], [0, 0, 1, 1]]}, f"kernels {kernels}")
    _expect(failures, not skew.ok and skew.vertex is not None and abs(skew.determinant) == 2,
            f"skew triangle verdict {skew}")
    for poly in delzant_polytopes():
        if poly.d > 12:
            continue
        t0 = time.perf_counter()
        mine = set(toric.faces(poly))
        library_time += time.perf_counter() - t0
        _expect(failures, mine == set(brute_force_faces(*brute_force_inputs(poly))), f"{poly.name}: faces differ")
        a = [[poly.normals[i][r] for i in range(poly.d)] for r in range(poly.rank)]
        ref = sympy_snf(sympy.Matrix(a), domain=sympy.ZZ)
        ref_diag = [abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i] != 0]
        kl = toric.kernel_lattice(poly)
        _expect(failures, kl.invariant_factors == ref_diag, f"{poly.name}: invariant factors")
        _expect(failures, all(linalg.is_zero(x) for b in kl.basis for x in linalg.matvec(a, b)),
                f"{poly.name}: kernel basis not in the kernel")
        _expect(failures, len(kl.basis) == poly.d - poly.rank, f"{poly.name}: kernel rank")
    _expect(failures, library_time < 5, f"runtime {library_time:.2f}s")
    return failures, f"{len(delzant_polytopes())} polytopes vs brute force, {library_time:.2f}s"


# 8. Associated-bundle counts

def criterion_8():
    failures = []
    flag = {"base": {"weyl": ["A", 1]}, "tag": "principal-fibers-zero",
            "fibers": [{"weyl": ["A", 1]}, {"polytope": "interval"}]}
    final = {"base": {"polytope": "interval"}, "tag": "isotropic-orbits",
             "fibers": [{"weyl": ["A", 1]}, {"polytope": "interval"}]}
    got = []
    for data in (flag, final):
        res, _ = analyses.run_leaves(data)
        got += [b["total_leaves"] for b in res["bundles"]]
    _expect(failures, got == [4, 6, 6, 9], f"counts {got}")
    return failures, " ".join(map(str, got))


# 9. Property suites

def criterion_9():
    import test_properties as tp
    failures = []
    suites = [tp.test_schouten_graded_jacobi_and_oracle, tp.test_gauge_group_law, tp.test_pullback_functoriality,
              tp.test_derivative_matches_finite_difference, tp.test_intersection_dimension_two_routes]
    for fn in suites:
        try:
            fn()
        except Exception as exc:  # hypothesis re-raises the falsifying example
            failures.append(f"{fn.__name__}: {type(exc).__name__}: {exc}")
    counts = tp.CASES
    return failures, ", ".join(f"{k} {v}" for k, v in counts.items())


CRITERIA = {
    1: ("Jacobi suite", criterion_1),
    2: ("hierarchy verdicts", criterion_2),
    3: ("submersion suite", criterion_3),
    4: ("pencil vs pointwise fibre structures", criterion_4),
    5: ("flow probe", criterion_5),
    6: ("Lie suite", criterion_6),
    7: ("toric counts", criterion_7),
    8: ("associated-bundle counts", criterion_8),
    9: ("property suites", criterion_9),
}


def _line(number, failures, detail):
    title = CRITERIA[number][0]
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number} ({title}): {status}: {detail}"
    if failures:
        line += "; " + "; ".join(failures[:5])
    return line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    failures, detail = CRITERIA[number][1]()
    RESULTS[number] = _line(number, failures, detail)
    print(RESULTS[number])
    assert not failures, RESULTS[number]


if __name__ == "__main__":
    bad = 0
    for n in sorted(CRITERIA):
        f, det = CRITERIA[n][1]()
        bad += bool(f)
        print(_line(n, f, det))
    sys.exit(1 if bad else 0)
