import random
from fractions import Fraction

import pytest
import sympy

from poissonkit import lie
from poissonkit.errors import PreconditionError

from oracles import to_sympy_complex

F = Fraction


def test_so3_is_a_lie_algebra():
    assert lie.validate_algebra(lie.LieAlgebra.so3()).ok


def test_bad_structure_constants_fail_jacobi():
    # [e1,e2] = e3, [e2,e3] = e3, [e1,e3] = e1 violates Jacobi
    alg = lie.LieAlgebra.from_brackets(3, [(0, 1, [0, 0, 1]), (1, 2, [0, 0, 1]), (0, 2, [1, 0, 0])])
    assert not lie.validate_algebra(alg).ok


@pytest.mark.parametrize("kind", ["A1", "A2"])
def test_standard_triples(kind):
    t = lie.standard_triple(kind)
    assert all(lie.manin_check(t).values())
    assert lie.tk_in_h(t)


def test_quotient_subalgebra_choices():
    t = lie.standard_triple("A1")
    zero = lie.quotient_conditions(t, lie.Subspace(t.algebra.dim, []))
    assert zero.a and zero.b and zero.c
    whole = lie.quotient_conditions(t, t.g)
    assert not whole.a and whole.b and whole.c


def test_quotient_needs_a_subalgebra_of_g():
    t = lie.standard_triple("A1")
    with pytest.raises(PreconditionError):
        lie.quotient_conditions(t, t.h)


def test_sample_group_elements_are_unitary_against_sympy():
    t = lie.standard_triple("A2")
    for g in lie.default_samples(t):
        m = to_sympy_complex([[(a, b) for a, b in zip(r, s)] for r, s in zip(g.re, g.im)])
        assert g.is_unitary()
        assert sympy.simplify(m * m.H - sympy.eye(g.n)) == sympy.zeros(g.n)


def test_exact_and_numeric_spectra_agree():
    t = lie.standard_triple("A2")
    space = t.parts["t"] + t.parts["n_plus"]
    rng = random.Random(5)
    for _ in range(5):
        v = lie.random_element(space, rng)
        assert lie.imaginary_spectrum_exact(t.algebra, v) == lie.imaginary_spectrum_numeric(t.algebra, v)


def test_generic_elements_have_real_spectrum_parts():
    t = lie.standard_triple("A2")
    n = t.algebra.dim
    full = lie.Subspace(n, [[1 if i == j else 0 for i in range(n)] for j in range(n)])
    rng = random.Random(1)
    for _ in range(4):
        v = lie.random_element(full, rng)
        assert not lie.imaginary_spectrum_exact(t.algebra, v)
        assert not lie.imaginary_spectrum_numeric(t.algebra, v)


def test_weyl_orders():
    assert [lie.weyl_order("A", r) for r in (1, 2, 3)] == [2, 6, 24]
    assert lie.weyl_order("B", 2) == 8
    assert lie.weyl_order("D", 4) == 192
    with pytest.raises(PreconditionError):
        lie.weyl_order("E", 6)


def test_positivity_cases():
    j = lie.standard_complex_structure(1)
    assert lie.positivity(j, [[0, 1], [-1, 0]]).positive
    neg = lie.positivity(j, [[0, -1], [1, 0]])
    assert not neg.positive and neg.witness is not None
    assert lie.positivity(j, [[0, 0], [0, 0]]).positive


def test_positivity_rejects_non_invariant_leaves():
    j = lie.standard_complex_structure(2)
    # area form on the (x1, x2) plane, which is not a complex line
    p = [[F(0)] * 4 for _ in range(4)]
    p[0][2], p[2][0] = F(1), F(-1)
    assert not lie.positivity(j, p).positive


def test_induced_bivector_of_translations():
    from poissonkit.calculus import Chart, Multivector
    c = Chart(("x", "y"))
    fields = [Multivector.basis(c, 0), Multivector.basis(c, 1)]
    ind = lie.induced_from_action([[0, 1], [-1, 0]], fields)
    assert ind.poisson and ind.commuting
    assert ind.bivector == Multivector(c, 2, {(0, 1): 1})
    assert lie.is_invariant_under(ind.bivector, fields)


def test_killing_form_pairing_is_invariant():
    t = lie.standard_triple("A1")
    assert t.pairing.is_invariant(t.algebra)
    mat = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in t.pairing.m])
    assert mat.det() != 0
