"""Shared helpers for the test suite."""
from fractions import Fraction
from importlib import resources

from poissonkit import dsl, toric
from poissonkit.calculus import Chart
from poissonkit.scalars import parse


def fixture_text(name):
    return resources.files("poissonkit").joinpath("fixtures").joinpath(name + ".dsl").read_text(encoding="utf-8")


def load(name):
    return dsl.parse_document(fixture_text(name))


def same_scalar(text_a, text_b, variables):
    return parse(text_a, variables) == parse(text_b, variables)


def cube(rank, side=1):
    facets = []
    for i in range(rank):
        e = [0] * rank
        e[i] = 1
        facets.append((tuple(e), 0))
        facets.append((tuple(-x for x in e), -side))
    return toric.DelzantPolytope.from_facets(facets, f"cube{rank}")


def simplex(rank, size=1):
    facets = []
    for i in range(rank):
        e = [0] * rank
        e[i] = 1
        facets.append((tuple(e), 0))
    facets.append((tuple([-1] * rank), -size))
    return toric.DelzantPolytope.from_facets(facets, f"simplex{rank}")


def product(a, b):
    n = a.rank + b.rank
    facets = [(tuple(u) + (0,) * b.rank, c) for u, c in zip(a.normals, a.constants)]
    facets += [((0,) * a.rank + tuple(u), c) for u, c in zip(b.normals, b.constants)]
    return toric.DelzantPolytope.from_facets(facets, f"{a.name}x{b.name}")


def hirzebruch(k, height=1, width=None):
    """Trapezoid with normals (1,0), (0,1), (0,-1), (-1,-k)."""
    width = width if width is not None else k + 2
    return toric.DelzantPolytope.from_facets(
        [((1, 0), 0), ((0, 1), 0), ((0, -1), -height), ((-1, -k), -width)], f"hirzebruch{k}")


def delzant_examples():
    """Delzant polytopes with at most 12 facets."""
    polys = [toric.interval(), toric.triangle(), toric.square()]
    polys += [cube(r) for r in range(1, 7)]
    polys += [simplex(r) for r in range(1, 8)]
    polys += [hirzebruch(k) for k in range(0, 4)]
    polys += [product(simplex(2), toric.interval()), product(simplex(3), simplex(2)),
              product(hirzebruch(1), toric.interval()), product(simplex(2), cube(2))]
    return polys


def brute_force_inputs(poly):
    """Oracle convention: <nu, x> + lambda >= 0."""
    normals = [[Fraction(x) for x in u] for u in poly.normals]
    constants = [-c for c in poly.constants]
    return normals, constants


def plane(*names):
    return Chart(names)
