import random
from fractions import Fraction

import pytest

from poissonkit import analyses
from poissonkit.calculus import Chart, Multivector, SmoothMap, Verdict
from poissonkit.errors import NotAnImmersion
from poissonkit.scalars import Point, random_rational_points
from poissonkit.submanifolds import (SubmanifoldSpec, classify, classify_point, frames, induced_via_pullback,
                                     pointwise_induce)

from helpers import load

F = Fraction


def _classify(name):
    result, ok = analyses.run_classify(load(name), analyses.Options())
    return next(iter(result.values())), ok


def test_poisson_submanifold():
    rep, _ = _classify("poisson-submanifold")
    assert rep["poisson_submanifold"] is True and rep["coregular"] == "holds"


def test_poisson_transversal():
    rep, _ = _classify("poisson-transversal")
    assert rep["poisson_transversal"] is True and rep["coregular"] == "holds"


def test_coisotropic_hyperplane():
    rep, _ = _classify("coisotropic")
    assert rep["coisotropic"] is True


def test_linear_subspace_is_coregular():
    rep, ok = _classify("linear-subspace")
    assert ok and rep["coregular"] == "holds" and rep["pointwise_pd"] is True


def test_so3_axis_splitting_is_checked():
    rep, _ = _classify("so3-axis")
    assert rep["splitting_ok"] is True


def test_clean_symplectic_example_keeps_pd_but_loses_coregularity():
    rep, _ = _classify("clean-symplectic-no-foliation")
    assert rep["pointwise_pd"] is True
    assert rep["coregular"] == "fails"
    assert set(rep["q_rank_profile"]) == {"0", "2"}


def test_diagonal_disk_limits_depend_on_direction():
    rep, _ = _classify("diagonal-disk")
    limits = rep["induced"]["limits"][0]["limits"]
    assert len(set(limits.values())) > 1


def test_two_routes_to_the_induced_bivector_agree():
    r4 = Chart(("x1", "x2", "x3", "x4"))
    plane = Chart(("s", "t"))
    pi = Multivector(r4, 2, {(0, 1): 1, (2, 3): 1, (0, 2): "x2"})
    phi = SmoothMap(plane, r4, ["s", "t", "s*t", "s^2"])
    spec = SubmanifoldSpec(phi)
    for pt in random_rational_points(plane.variables, 15, random.Random(7)):
        fr = frames(spec, pt)
        p = pi.matrix_at(phi.apply(pt))
        a = pointwise_induce(p, fr.tangent, fr.conormal)
        b = induced_via_pullback(p, fr.jacobian)
        assert (a is None) == (b is None)
        if a is not None:
            assert a == b


def test_immersion_is_required():
    r3 = Chart(("x", "y", "z"))
    line = Chart(("t",))
    spec = SubmanifoldSpec(SmoothMap(line, r3, ["t^2", "0", "0"]))
    pi = Multivector(r3, 2, {(0, 1): 1})
    with pytest.raises(NotAnImmersion):
        classify_point(spec, pi, Point(("t",), (F(0),)))


def test_classify_direct_call():
    r3 = Chart(("x", "y", "z"))
    plane = Chart(("a", "b"))
    pi = Multivector(r3, 2, {(0, 1): 1})
    spec = SubmanifoldSpec(SmoothMap(plane, r3, ["a", "b", "0"]))
    rep = classify(spec, pi)
    assert rep.coregular is Verdict.HOLDS
    assert rep.to_json()["poisson_submanifold"] is True
