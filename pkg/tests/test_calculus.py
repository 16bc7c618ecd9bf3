from fractions import Fraction

import pytest

from poissonkit.calculus import (Chart, Form, Multivector, SmoothMap, Verdict, d, euler_field, hamiltonian,
                                 interior, is_poisson, lie_bracket, map_related, poisson_verdict, pullback_form,
                                 rotation_field, schouten, sharp)
from poissonkit.errors import ArityError, UnsupportedModeError
from poissonkit.scalars import Point

from oracles import schouten_oracle

R3 = Chart(("x", "y", "z"))


def so3():
    return Multivector(R3, 2, {(1, 2): "x", (2, 0): "y", (0, 1): "z"})


def test_index_order_sets_sign():
    p = Multivector(R3, 2, {(1, 0): 1})
    assert p.coefficient(0, 1) == R3.scalar(-1)
    assert Multivector(R3, 2, {(0, 0): 1}).is_zero()


def test_linear_structure_on_so3_is_poisson():
    assert is_poisson(so3())


def test_non_poisson_bivector():
    # dual vector field (-y, x, 1) has v . curl v = 2
    pi = Multivector(R3, 2, {(1, 2): "-y", (2, 0): "x", (0, 1): 1})
    assert not is_poisson(pi)
    assert schouten(pi, pi) == schouten_oracle(pi, pi)


def test_vector_field_bracket_matches_lie_bracket():
    x = Multivector.from_components(R3, ["y", "0", "x*z"])
    y = Multivector.from_components(R3, ["z", "x^2", "1"])
    assert schouten(x, y) == lie_bracket(x, y)


def test_sharp_convention():
    pi = Multivector(R3, 2, {(0, 1): 1})
    dx = Form(R3, 1, {(0,): 1})
    assert sharp(pi, dx) == Multivector.from_components(R3, [0, 1, 0])


def test_hamiltonian_of_casimir_vanishes():
    assert hamiltonian(so3(), "x^2 + y^2 + z^2").is_zero()


def test_d_squared_is_zero():
    f = Form(R3, 1, {(0,): "x*y*z", (2,): "y^2/(1 + x^2)"})
    assert d(d(f)).is_zero()


def test_interior_and_wedge_degree_checks():
    w = Form(R3, 2, {(0, 1): 1})
    u = Multivector.from_components(R3, [1, 0, 0])
    assert interior(u, w) == Form(R3, 1, {(1,): 1})
    with pytest.raises(TypeError):
        w.wedge(u)
    with pytest.raises(ArityError):
        Multivector(R3, 2, {(0, 1, 2): 1})


def test_pullback_commutes_with_d():
    plane = Chart(("s", "t"))
    phi = SmoothMap(plane, R3, ["s*t", "s + t", "s^2"])
    w = Form(R3, 1, {(0,): "y", (1,): "x*z", (2,): "1"})
    assert pullback_form(phi, d(w)) == d(pullback_form(phi, w))


def test_euler_and_rotation_fields_commute():
    c = Chart(("x0", "y0"))
    assert lie_bracket(euler_field(c, 0), rotation_field(c, 0)).is_zero()


def test_projection_is_poisson_map():
    plane = Chart(("u", "v"))
    pi = Multivector(R3, 2, {(0, 1): 1, (2, 1): "1 + z^2"})
    target = Multivector(plane, 2, {(0, 1): 1})
    pr = SmoothMap(R3, plane, ["x", "y"])
    assert map_related(pr, pi, target)
    assert not map_related(pr, pi, target * 2)


def test_numeric_poisson_verdict_is_never_holds():
    pi = Multivector(R3, 2, {(0, 1): "exp(z)"})
    verdict, residual = poisson_verdict(pi)
    assert verdict is Verdict.NOT_DETERMINED and residual == 0.0
    with pytest.raises(UnsupportedModeError):
        is_poisson(pi)
    bad = Multivector(R3, 2, {(1, 2): "-y*exp(z)", (2, 0): "x*exp(z)", (0, 1): "exp(z)"})
    assert poisson_verdict(bad)[0] is Verdict.FAILS


def test_matrix_at_point():
    m = so3().matrix_at(Point(R3.variables, (Fraction(1), Fraction(2), Fraction(3))))
    assert m == [[0, 3, -2], [-3, 0, 1], [2, -1, 0]]


def test_jacobian_of_composition():
    plane = Chart(("s", "t"))
    f = SmoothMap(plane, plane, ["s*t", "s - t"])
    g = SmoothMap(plane, R3, ["s", "t^2", "s*t"])
    h = g.compose(f)
    assert h.components[1] == plane.scalar("(s - t)^2")
