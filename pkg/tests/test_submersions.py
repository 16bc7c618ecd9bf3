from fractions import Fraction

import pytest

from poissonkit import analyses
from poissonkit.calculus import Chart, Multivector, SmoothMap
from poissonkit.errors import NotASubmersion, StepSizeError
from poissonkit.scalars import Point
from poissonkit.submersions import (SubmersionSpec, assemble_from_coupling_data, check_poisson_map,
                                   coupling_data_from, coupling_data_verify, fiber_point, fiber_report, ham_flow,
                                   horizontal_generators, is_poisson_submersion, pencil_decompose, plane_limits)

from helpers import load

F = Fraction
R4 = Chart(("q1", "p1", "q2", "p2"))
R2 = Chart(("u", "v"))


def coupling_spec():
    pi = Multivector(R4, 2, {(0, 1): 1, (2, 3): 1, (0, 2): F(1, 2)})
    base = Multivector(R2, 2, {(0, 1): 1})
    return SubmersionSpec.single(SmoothMap(R4, R2, ["q1", "p1"]), pi, base)


def test_projection_is_a_poisson_submersion():
    spec = coupling_spec()
    assert is_poisson_submersion(spec)
    assert check_poisson_map(spec)["charts"] == [True]


def test_coupling_data_round_trip():
    spec = coupling_spec()
    cd = coupling_data_from(spec)
    verdict = coupling_data_verify(cd, spec)
    assert verdict.all
    assert assemble_from_coupling_data(cd, spec) == spec.pi


def test_horizontal_generators_close():
    hg = horizontal_generators(coupling_spec())
    assert hg.closed is True
    assert hg.rank_at(Point(R4.variables, (F(0),) * 4)) == 2


def test_fibre_point_of_symplectic_product():
    fp = fiber_point(coupling_spec(), Point(R4.variables, (F(1), F(2), F(3), F(4))))
    assert fp.fiber_pd and fp.coupling and fp.kind == "symplectic"


def test_not_a_submersion():
    r2 = Chart(("x", "y"))
    line = Chart(("w",))
    spec = SubmersionSpec.single(SmoothMap(r2, line, ["x^2"]), Multivector(r2, 2, {(0, 1): 1}))
    with pytest.raises(NotASubmersion):
        fiber_point(spec, Point(r2.variables, (F(0), F(1))))


def test_fibre_report_counts_kinds():
    spec = next(iter(load("vertical").submersions.values())).spec
    rep = fiber_report(spec)
    kinds = list(rep.kinds().values())
    assert (kinds.count("symplectic"), kinds.count("trivial")) == (100, 25)
    assert all((kind == "trivial") == (pt[2] == 0) for pt, kind in rep.kinds().items())


def test_pencil_of_vertical_example():
    spec = next(iter(load("vertical").submersions.values())).spec
    dec = pencil_decompose(spec)
    assert dec.ok
    assert dec.pi_v == spec.pi


def test_almost_coupling_with_given_connection():
    result, ok = analyses.run_submersion(load("almost-coupling"), analyses.Options())
    assert ok
    assert result["submersion"]["almost_coupling"]["verdict"] == "holds"


def test_canonical_almost_coupling_candidate_is_obstructed():
    result, _ = analyses.run_submersion(load("pencil-not-almost-coupling"),
                                        analyses.Options(almost_coupling=True))
    ac = result["submersion"]["almost_coupling"]
    assert ac["verdict"] == "not-determined"
    assert ac["obstruction"]


def test_plane_limits_depend_on_order():
    r2 = Chart(("x", "y"))
    x, y = r2.coord(0), r2.coord(1)
    gens = [[x, y]]
    limits = plane_limits(gens, 2, {"x": F(0), "y": F(0)})
    planes = {tuple(map(tuple, entry["plane"])) for entry in limits}
    assert len(planes) == 2


def test_flow_is_deterministic_and_accurate():
    doc = load("couplings-over-leaves")
    a = analyses.run_flow(doc)
    b = analyses.run_flow(doc)
    assert a == b
    assert a["steps"] == 1300 and a["completed"]


def test_flow_step_size_guard():
    doc = load("couplings-over-leaves")
    with pytest.raises(StepSizeError):
        ham_flow(doc.bivectors["pi"], "y", (0, 0, 0), 1.3, 0.5, error_bound=1e-12)


def test_toy_cp1_fibres_are_symplectic_but_do_not_assemble():
    result, _ = analyses.run_submersion(load("toy-cp1"), analyses.Options())
    for key in ("sphere", "chart"):
        assert result[key]["coregular"] == "holds"
        assert set(result[key]["fiber_kinds"]) == {"symplectic"}
        assert result[key]["pencil"]["ok"] is False


def test_associated_bundle_principal_pencil():
    result, _ = analyses.run_submersion(load("associated-bundle"), analyses.Options())
    assert result["principal"]["pencil"]["pi_V"] == {"1,2": "-y3"}
    assert result["associated"]["coregular"] == "holds"
