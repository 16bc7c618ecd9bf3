"""Fixture catalogue: worked inputs with their expected verdicts.

A fixture names an input (a DSL file shipped in ``fixtures/`` or an inline
JSON document), the analyses to run on it and a partial expected result.
Expected values are nested dicts compared against the report; a dict with a
single ``$``-key is an operator:

- ``{"$lt": x}`` / ``{"$gt": x}``: numeric bound;
- ``{"$contains": v}``: list membership;
- ``{"$len": n}``: list length;
- ``{"$approx": x}``: within the fixture tolerance.
"""
import json
import time
from dataclasses import dataclass, field
from importlib import resources

from . import analyses, dsl
from .errors import PreconditionError
from .report import Report, digest

EXACT = "EXACT"
NUMERIC = "NUMERIC"


@dataclass(frozen=True)
class Fixture:
    id: str
    source: object            # DSL file name, or a JSON-ready dict
    runner: tuple
    expected: dict
    note: str
    mode: str = EXACT
    tol: float = 0.0

    @property
    def format(self):
        return "dsl" if isinstance(self.source, str) else "json"

    def text(self):
        if self.format == "dsl":
            return resources.files("poissonkit").joinpath("fixtures").joinpath(self.source).read_text(encoding="utf-8")
        return json.dumps(self.source, sort_keys=True)


@dataclass
class FixtureResult:
    fixture: Fixture
    report: Report
    mismatches: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.mismatches


# expected-value matching

def _match(expected, actual, tol, path, out):
    if isinstance(expected, dict) and len(expected) == 1 and next(iter(expected)).startswith("$"):
        op, val = next(iter(expected.items()))
        ok = {
            "$lt": lambda: isinstance(actual, (int, float)) and actual < val,
            "$gt": lambda: isinstance(actual, (int, float)) and actual > val,
            "$contains": lambda: isinstance(actual, list) and val in actual,
            "$len": lambda: isinstance(actual, list) and len(actual) == val,
            "$approx": lambda: isinstance(actual, (int, float)) and abs(actual - val) <= tol,
        }[op]()
        if not ok:
            out.append(f"{path}: expected {op} {val!r}, got {actual!r}")
        return
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            out.append(f"{path}: expected an object, got {actual!r}")
            return
        for k, v in expected.items():
            if k not in actual:
                out.append(f"{path}.{k}: missing")
            else:
                _match(v, actual[k], tol, f"{path}.{k}", out)
        return
    if isinstance(expected, list) and isinstance(actual, list):
        if len(expected) != len(actual):
            out.append(f"{path}: expected {len(expected)} entries, got {len(actual)}")
            return
        for i, (e, a) in enumerate(zip(expected, actual)):
            _match(e, a, tol, f"{path}[{i}]", out)
        return
    if isinstance(expected, float) and isinstance(actual, (int, float)) and tol:
        if abs(expected - actual) > tol:
            out.append(f"{path}: expected {expected!r} within {tol}, got {actual!r}")
        return
    if expected != actual:
        out.append(f"{path}: expected {expected!r}, got {actual!r}")


def compare(expected, actual, tol=0.0):
    out = []
    _match(expected, actual, tol, "result", out)
    return out


# running

_DSL_RUNNERS = {
    "check": analyses.run_check,
    "classify": analyses.run_classify,
    "submersion": analyses.run_submersion,
    "pullback": analyses.run_pullback,
}


def _run_json(runner, data):
    if runner == "toric":
        poly = analyses.polytope_from_arg(data["polytope"])[0] if isinstance(data["polytope"], str) \
            else analyses.polytope_from_text(json.dumps(data["polytope"]))
        return analyses.run_toric(poly)
    if runner == "lie":
        return analyses.run_lie(triple_kind=data["standard"], k_choice=data.get("k", "t"))
    if runner == "leaves":
        return analyses.run_leaves(data)
    if runner == "positivity":
        return analyses.run_positivity_cases(data)
    if runner == "action":
        return analyses.run_action(data)
    if runner == "git":
        return analyses.run_git(data)
    raise PreconditionError(f"unknown runner {runner!r}")


def execute(fixture, seed=0, timing=False):
    """Run a fixture's analyses and wrap the outcome in a report."""
    text = fixture.text()
    start = time.perf_counter()
    results = {}
    ok = True
    if fixture.format == "dsl":
        doc = dsl.parse_document(text)
        opts = analyses.Options(seed=seed)
        for r in fixture.runner:
            res, good = _DSL_RUNNERS[r](doc, opts)
            results[r] = res
            ok = ok and good
    else:
        for r in fixture.runner:
            res, good = _run_json(r, fixture.source)
            results[r] = res
            ok = ok and good
    elapsed = time.perf_counter() - start
    result = results if len(fixture.runner) > 1 else results[fixture.runner[0]]
    return Report("example " + fixture.id, digest(text), seed, ok, result,
                  {"seconds": round(elapsed, 3)} if timing else None)


def run_fixture(fixture_id, seed=0, timing=False):
    """Run one fixture; pass iff every expected field matches the report's result."""
    fixture = get(fixture_id)
    rep = execute(fixture, seed, timing)
    actual = rep.to_json()["result"]
    mismatches = compare(fixture.expected, actual, fixture.tol)
    rep.ok = not mismatches
    return FixtureResult(fixture, rep, mismatches)


def get(fixture_id):
    for f in FIXTURES:
        if f.id == fixture_id:
            return f
    raise PreconditionError(f"unknown fixture id {fixture_id!r}")


def list_fixtures():
    return [f.id for f in FIXTURES]


# the catalogue

_PLUS = [[0, 1], [-1, 0]]
_MINUS = [[0, -1], [1, 0]]
_ZERO = [[0, 0], [0, 0]]

FIXTURES = [
    # submanifolds
    Fixture("ex-linear-subspace", "linear-subspace.dsl", ("check", "classify"),
            {"classify": {"B": {"pointwise_pd": True, "coregular": "holds", "induced": {"bivector": {"1,2": "1"}}}}},
            "constant bivector on R^4 and a linear plane satisfying the pointwise induction condition"),
    Fixture("ex-intersections-not-manifolds", "intersections-not-manifolds.dsl", ("pullback",),
            {"X": {"pullback": {"matches": True, "checked": 12}}},
            "embedding through the zero set of a flat function; only the pullback family is compared",
            NUMERIC, 1e-9),
    Fixture("ex-no-clean-intersection", "no-clean-intersection.dsl", ("check", "classify"),
            {"check": {"bivectors": {"pi": {"poisson": True}}},
             "classify": {"X": {"induced": {"generic_pd": True, "bivector": {"1,2": "1/2"}},
                                "induced_rank_profile": {"2": 20}}}},
            "plane through the degeneracy locus; generic induced bivector is half the area bivector"),
    Fixture("ex-clean-symplectic-no-foliation", "clean-symplectic-no-foliation.dsl", ("check", "classify"),
            {"check": {"bivectors": {"pi": {"poisson": True}}},
             "classify": {"X": {"pointwise_pd": True, "coregular": "fails",
                                "q_rank_profile": {"0": 9, "2": 72},
                                "induced_rank_profile": {"0": 72, "2": 9}}}},
            "constant-rank structure on C^3 and the hyperplane z3 = 0; induced rank drops off z2 = 0"),
    Fixture("ex-diagonal-disk", "diagonal-disk.dsl", ("check", "classify"),
            {"check": {"bivectors": {"pi": {"poisson": True}}},
             "classify": {"X": {"pointwise_pd": True, "coregular": "fails",
                                "induced": {"bivector": {"1,2": "(t^4 + 2*t^2*s^2 + s^4 - t^2)/(2*t^2 + 2*s^2)"},
                                            "pole_points": [["0", "0"]]},
                                "obstructions": {"$contains": {"kind": "induced-family-singular",
                                                               "point": ["0", "0"]}},
                                "pullback": {"matches": True}}}},
            "diagonal of a product of disks; the induced family has no limit at the origin"),
    Fixture("ex-clean-not-split", "clean-not-split.dsl", ("check", "classify"),
            {"check": {"bivectors": {"pi": {"poisson": True}}},
             "classify": {"X": {"pointwise_pd": True, "coregular": "fails",
                                "induced": {"bivector": {"1,2": "t"}},
                                "pullback": {"matches": True}}}},
            "parabolic embedding into R^4; induced bivector t d_t ^ d_s"),
    Fixture("ex-poisson-submanifold", "poisson-submanifold.dsl", ("classify",),
            {"P": {"poisson_submanifold": True, "coisotropic": True, "coregular": "holds",
                   "induced": {"bivector": {"1,2": "2"}}}},
            "level set of a Casimir function"),
    Fixture("ex-poisson-transversal", "poisson-transversal.dsl", ("classify",),
            {"T": {"poisson_transversal": True, "coregular": "holds",
                   "induced": {"bivector": {"1,2": "a^2 + 1"}}}},
            "symplectic slice transverse to the leaves"),
    Fixture("ex-point", "point.dsl", ("classify",),
            {"O": {"coregular": "holds", "pointwise_pd": True}},
            "a single point"),
    Fixture("ex-so3-axis", "so3-axis.dsl", ("check", "classify"),
            {"check": {"bivectors": {"pi": {"poisson": True}}},
             "classify": {"L": {"pointwise_pd": True, "coregular": "fails", "coregular_witnesses": [["0"]],
                                "splitting_ok": True, "q_rank_profile": {"0": 1, "2": 4}}}},
            "coordinate axis in the linear structure on so(3)*"),
    Fixture("ex-coisotropic", "coisotropic.dsl", ("classify",),
            {"C": {"coisotropic": True, "poisson_submanifold": True, "coregular": "holds"}},
            "coisotropic plane inheriting a Poisson structure"),
    # submersions
    Fixture("ex-coupling", "coupling.dsl", ("check", "submersion"),
            {"check": {"maps": {"pr": {"poisson_map": True}}},
             "submersion": {"submersion": {"coupling": True, "coregular": "holds",
                                           "coupling_data": {"conditions": {"a": True, "b": True, "c": True,
                                                                            "d": True}}}}},
            "projection of a symplectic R^4 onto a symplectic plane"),
    Fixture("ex-vertical", "vertical.dsl", ("check", "submersion"),
            {"check": {"bivectors": {"pi": {"poisson": True}}, "maps": {"pr": {"poisson_map": True}}},
             "submersion": {"submersion": {"coregular": "holds",
                                           "pencil": {"ok": True, "pi_V": {"1,2": "z"}, "pi_H": {}}}}},
            "vertical structure over a line"),
    Fixture("ex-psi-not-clean", "psi-not-clean.dsl", ("check",),
            {"maps": {"psi": {"poisson_map": True,
                              "critical_points": [["-1", "0", "0", "0"], ["0", "0", "0", "0"],
                                                  ["1", "0", "0", "0"]]}}},
            "Poisson map whose differential drops rank on a line"),
    Fixture("ex-cotangent", "cotangent.dsl", ("submersion",),
            {"submersion": {"fiber_pd": False, "coregular": "fails"}},
            "cotangent projection of the plane onto the line"),
    Fixture("ex-symplectic-base", "symplectic-base.dsl", ("submersion",),
            {"submersion": {"coupling": True, "coregular": "holds", "pencil": {"ok": True}}},
            "Poisson submersion onto a symplectic plane"),
    Fixture("ex-couplings-over-leaves", "couplings-over-leaves.dsl", ("check", "submersion"),
            {"check": {"bivectors": {"pi": {"poisson": True}}, "maps": {"pr": {"poisson_map": True}}},
             "submersion": {"submersion": {"coupling": True, "coregular": "holds"},
                            "flow": {"completed": True, "final_state": [-1.3, 0.0, {"$approx": -3.60210244797}],
                                     "max_leaf_defect": {"$lt": 1e-6}, "max_abs_x": {"$lt": 1.5707963}}}},
            "submersion over a plane, with the flow of y from the origin staying on x = arctan z",
            NUMERIC, 1e-9),
    Fixture("ex-almost-coupling", "almost-coupling.dsl", ("submersion",),
            {"submersion": {"almost_coupling": {"verdict": "holds"},
                            "pencil": {"ok": True, "pi_V": {"3,4": "1"}, "pi_H": {"1,2": "x1"}}}},
            "product structure split by the coordinate connection"),
    Fixture("ex-pencil-not-almost-coupling", "pencil-not-almost-coupling.dsl", ("check", "submersion"),
            {"check": {"bivectors": {"pi": {"poisson": True}}, "maps": {"pr": {"poisson_map": True}}},
             "submersion": {"submersion": {"coregular": "holds", "fiber_kinds": {"trivial": 81},
                                           "pencil": {"ok": True, "pi_V": {},
                                                      "certificates": {"[pi_V,pi_V]=0": True,
                                                                       "[pi_V,pi_H]=0": True,
                                                                       "[pi_H,pi_H]=0": True}}}}},
            "rank-two structure on C^2 projecting to the first coordinate"),
    Fixture("ex-discontinuous-fibres", "discontinuous-fibres.dsl", ("check", "submersion"),
            {"check": {"bivectors": {"pi": {"poisson": True}},
                       "maps": {"ratio0": {"poisson_map": True}, "ratio1": {"poisson_map": True},
                                "inversion": {"poisson_map": True}}},
             "submersion": {"submersion": {"coregular": "holds", "fiber_pd": True,
                                           "fiber_kinds": {"symplectic": 16, "trivial": 64},
                                           "pencil": {"ok": False, "rank_jumps": {"$contains": {
                                               "a": ["-1", "-1", "0", "0"], "rank_a": 2,
                                               "b": ["-1", "-1", "0", "1"], "rank_b": 0}}}}}},
            "quotient of C^2 minus the origin by scalings; fibres symplectic on the axes, zero elsewhere"),
    Fixture("ex-toy-cp1", "toy-cp1.dsl", ("check", "submersion"),
            {"check": {"bivectors": {"pi": {"poisson": True}, "Pi": {"poisson": True}},
                       "maps": {"phi0": {"poisson_map": True}, "phi1": {"poisson_map": True},
                                "first": {"poisson_map": True}, "ratio0": {"poisson_map": True}}},
             "submersion": {"sphere": {"coregular": "holds", "fiber_kinds": {"symplectic": 80}},
                            "chart": {"coregular": "holds", "fiber_kinds": {"symplectic": 72}}}},
            "C^2 minus the origin over the sphere and an affine chart of it"),
    Fixture("ex-associated-bundle", "associated-bundle.dsl", ("check", "submersion"),
            {"check": {"maps": {"pP": {"poisson_map": True}, "pS": {"poisson_map": True}}},
             "submersion": {"principal": {"coregular": "holds", "pencil": {"pi_V": {"1,2": "-y3"}}},
                            "associated": {"coregular": "holds",
                                           "fiber_kinds": {"degenerate": 81, "symplectic": 162}}}},
            "principal bundle of plane translations over a half-line and an associated bundle"),
    # Lie theory and actions
    Fixture("ex-flag-quotient-A1", {"standard": "A1", "k": "t"}, ("lie",),
            {"manin": {"valid_algebra": True, "transversal": True, "g_isotropic": True, "h_isotropic": True},
             "quotient": {"a": True, "b": True, "c": True, "d_pd": True, "d_trivial": True}},
            "standard triple of rank one; the Cartan subalgebra as quotient subalgebra"),
    Fixture("ex-flag-quotient-A2", {"standard": "A2", "k": "t"}, ("lie",),
            {"manin": {"valid_algebra": True, "transversal": True},
             "quotient": {"a": True, "b": True, "c": True, "d_pd": True, "d_trivial": True}},
            "standard triple of rank two; the Cartan subalgebra as quotient subalgebra"),
    Fixture("ex-quotient-k-zero", {"standard": "A1", "k": "0"}, ("lie",),
            {"quotient": {"a": True, "b": True, "c": True}},
            "the zero subalgebra"),
    Fixture("ex-quotient-k-g", {"standard": "A1", "k": "g"}, ("lie",),
            {"quotient": {"a": False, "b": True, "c": True}},
            "the whole compact subalgebra: it does not preserve the complementary subalgebra"),
    Fixture("ex-abelian-action", {"vars": ["x", "y"], "pi_A": _PLUS, "generators": [["1", "0"], ["0", "1"]],
                                  "orbits": [{"label": "full", "basis": [[1, 0], [0, 1]],
                                              "points": [[0, 0], [1, 2]]}]}, ("action",),
            {"poisson": True, "invariant": True, "orbits": [{"all_pd": True}]},
            "plane acting on itself by translations"),
    Fixture("ex-abelian-real-subspace", {"vars": ["x", "y"], "pi_A": _PLUS, "generators": [["1", "0"], ["0", "1"]],
                                         "orbits": [{"label": "real line", "basis": [[1, 0]],
                                                     "points": [[0, 0], [1, 2]]}]}, ("action",),
            {"orbits": [{"all_pd": False}]},
            "real line of translations: orbits are not Poisson-Dirac"),
    Fixture("ex-positive-bivector", {"complex_dim": 1, "cases": [{"label": "plus", "pi": _PLUS},
                                                                 {"label": "minus", "pi": _MINUS},
                                                                 {"label": "zero", "pi": _ZERO}]},
            ("positivity",),
            {"cases": [{"label": "plus", "positive": True}, {"label": "minus", "positive": False},
                       {"label": "zero", "positive": True}]},
            "signs of the area bivector on C"),
    Fixture("ex-holomorphic-translations", {"vars": ["x", "y"], "pi_A": _PLUS,
                                            "generators": [["1", "0"], ["0", "1"]]}, ("action",),
            {"bivector": {"1,2": "1"}, "poisson": True, "pi_A_positive": True},
            "C acting on C by translations"),
    Fixture("ex-holomorphic-exp", {"vars": ["x", "y"], "pi_A": _PLUS,
                                   "generators": [["x", "y"], ["-y", "x"]]}, ("action",),
            {"bivector": {"1,2": "x^2 + y^2"}, "poisson": True, "commuting": True, "pi_A_positive": True},
            "C acting on C by exponential scaling"),
    # toric
    Fixture("ex-toric-interval", {"polytope": "interval"}, ("toric",),
            {"leaf_count": 3, "kernel": [[1, 1]], "delzant": {"ok": True}},
            "unit interval"),
    Fixture("ex-toric-triangle", {"polytope": "triangle"}, ("toric",),
            {"leaf_count": 7, "kernel": [[1, 1, 1]], "delzant": {"ok": True}},
            "standard triangle"),
    Fixture("ex-toric-square", {"polytope": "square"}, ("toric",),
            {"leaf_count": 9, "kernel": [[1, 1, 0, 0], [0, 0, 1, 1]], "delzant": {"ok": True}},
            "unit square"),
    Fixture("ex-toric-skew", {"polytope": "skew-triangle"}, ("toric",),
            {"delzant": {"ok": False, "vertex": ["1/2", "0"], "determinant": 2}},
            "triangle with a vertex of determinant two"),
    Fixture("ex-positive-git", {"polytope": "triangle"}, ("git",),
            {"all_coregular": True, "strata": 7, "pi_A_positive": True, "totally_real": True},
            "orbits of the kernel torus in every stratum of the triangle's GIT presentation"),
    # leaf counts of associated bundles
    Fixture("ex-flag-base", {"base": {"weyl": ["A", 1]}, "tag": "principal-fibers-zero",
                             "fibers": [{"label": "flag fibre", "weyl": ["A", 1]},
                                        {"label": "toric fibre", "polytope": "interval"}]}, ("leaves",),
            {"base_leaves": 2, "bundles": [{"total_leaves": 4}, {"total_leaves": 6}]},
            "flag-manifold base with flag and projective-line fibres"),
    Fixture("ex-final-associated", {"base": {"polytope": "interval"}, "tag": "isotropic-orbits",
                                    "fibers": [{"label": "flag fibre", "weyl": ["A", 1]},
                                               {"label": "toric fibre", "polytope": "interval"}]}, ("leaves",),
            {"base_leaves": 3, "bundles": [{"total_leaves": 6}, {"total_leaves": 9}]},
            "projective-line base from a toric presentation, with flag and projective-line fibres"),
]
