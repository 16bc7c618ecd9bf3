import json
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from poissonkit import analyses, toric
from poissonkit.errors import PolytopeError, PreconditionError

from helpers import brute_force_inputs, cube, hirzebruch, simplex
from oracles import brute_force_faces


def test_standard_polytopes_are_delzant():
    for poly in (toric.interval(), toric.triangle(), toric.square(), cube(3), simplex(3), hirzebruch(2)):
        assert toric.is_delzant(poly).ok


def test_skew_triangle_reports_vertex_and_determinant():
    verdict = toric.is_delzant(toric.skew_triangle())
    assert not verdict.ok
    assert abs(verdict.determinant) == 2
    assert verdict.vertex is not None


def test_non_primitive_normal_rejected():
    poly = toric.DelzantPolytope.from_facets([((2,), 0), ((-1,), -1)])
    verdict = toric.is_delzant(poly)
    assert not verdict.ok and "primitive" in verdict.reason


@pytest.mark.parametrize("rows", [[[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [[1, 0, -1], [0, 1, -1]], [[3, 5], [7, 2]]])
def test_smith_normal_form(rows):
    s, u, v = toric.smith_normal_form(rows)
    a, su, sv = sympy.Matrix(rows), sympy.Matrix(u), sympy.Matrix(v)
    assert su * a * sv == sympy.Matrix(s)
    assert abs(su.det()) == 1 and abs(sv.det()) == 1
    ours = [s[i][i] for i in range(min(a.shape)) if s[i][i]]
    ref = sympy_snf(a, domain=sympy.ZZ)
    theirs = [abs(ref[i, i]) for i in range(min(a.shape)) if ref[i, i]]
    assert ours == theirs


def test_kernel_of_triangle():
    k = toric.kernel_lattice(toric.triangle())
    assert k.basis == [[1, 1, 1]]
    assert k.surjective


def test_kernel_of_cube_lies_in_kernel():
    poly = cube(3)
    k = toric.kernel_lattice(poly)
    assert len(k.basis) == poly.d - poly.rank
    for b in k.basis:
        assert all(sum(b[i] * poly.normals[i][r] for i in range(poly.d)) == 0 for r in range(poly.rank))


def test_faces_of_cube_match_oracle():
    poly = cube(3)
    ours = set(toric.faces(poly))
    assert ours == set(brute_force_faces(*brute_force_inputs(poly)))
    assert len(ours) == 27


def test_leaf_counts():
    assert [toric.leaf_count_toric(p) for p in (toric.interval(), toric.triangle(), toric.square())] == [3, 7, 9]


def test_moment_map_of_triangle():
    mu, mu_n = toric.moment_map(toric.triangle(), [(1, 0), (0, 1), ("abs2", 2)])
    assert mu == [Fraction(1, 2), Fraction(1, 2), Fraction(0)]
    assert mu_n == [Fraction(1)]
    with pytest.raises(PreconditionError):
        toric.moment_map(toric.triangle(), [(1, 0)])


def test_associated_leaf_count():
    assert toric.associated_leaf_count(toric.AssociatedLeafSpec(3, 2, "isotropic-orbits")) == 6
    with pytest.raises(PreconditionError):
        toric.associated_leaf_count(toric.AssociatedLeafSpec(3, 2))
    with pytest.raises(PreconditionError):
        toric.associated_leaf_count(toric.AssociatedLeafSpec(0, 2, "principal-fibers-zero"))


def test_polytope_json_round_trip():
    poly = hirzebruch(1)
    assert analyses.polytope_from_text(json.dumps(poly.to_json())) == poly


def test_polytope_json_errors():
    with pytest.raises(PreconditionError, match="line 2, column"):
        analyses.polytope_from_text('{"rank": 1,\n  "facets": [}')
    with pytest.raises(PolytopeError):
        toric.DelzantPolytope.from_facets([((1, 0), 0), ((1,), 0)])
