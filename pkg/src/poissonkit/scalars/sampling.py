"""Deterministic rational sample points for rank scans."""
from fractions import Fraction
from itertools import product

from ..errors import DenominatorVanishes, DomainError
from .scalar import Point

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def radical_inverse(index, base):
    """Van der Corput radical inverse as an exact Fraction in [0, 1)."""
    out = Fraction(0)
    scale = Fraction(1, base)
    while index:
        index, digit = divmod(index, base)
        out += digit * scale
        scale /= base
    return out


def grid_values(per_dim=5, offset=Fraction(0)):
    if per_dim < 2:
        return [Fraction(0) + offset]
    step = Fraction(2, per_dim - 1)
    return [Fraction(-1) + j * step + offset for j in range(per_dim)]


def _usable(point, avoid):
    for s in avoid:
        try:
            s.evaluate(point)
        except (DenominatorVanishes, DomainError):
            return False
    return True


def rational_grid(chart, per_dim=5, seed=0, cap=625, avoid=()):
    """Product grid on [-1, 1]^n with a seed-dependent rational offset.

    Seed 0 gives the symmetric grid containing the origin, e.g.
    {-1, -1/2, 0, 1/2, 1}^n. Larger dimensions shrink ``per_dim`` to stay under
    ``cap``; if even three values per axis is too many, a Halton sequence is
    used instead. Points where any scalar in ``avoid`` is undefined are skipped.
    """
    chart = tuple(chart)
    n = len(chart)
    if n == 0:
        return [Point((), ())]
    k = per_dim
    while k > 2 and k ** n > cap:
        k -= 1
    offsets = [radical_inverse(seed, _PRIMES[i % len(_PRIMES)]) / max(per_dim - 1, 1) for i in range(n)]
    if k ** n <= cap and k >= 3:
        axes = [grid_values(k, offsets[i]) for i in range(n)]
        pts = [Point(chart, c) for c in product(*axes)]
    else:
        pts = [Point(chart, tuple(offsets))]
        for j in range(1, cap):
            idx = j + seed * cap
            pts.append(Point(chart, tuple(2 * radical_inverse(idx, _PRIMES[i % len(_PRIMES)]) - 1
                                          for i in range(n))))
    return [p for p in pts if _usable(p, avoid)]


def random_rational_points(chart, count, rng, denominators=(1, 2, 3, 4, 5, 7), bound=3, avoid=()):
    """Random rational points from a ``random.Random``-like generator."""
    chart = tuple(chart)
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count + 50:
        attempts += 1
        coords = []
        for _ in chart:
            q = rng.choice(denominators)
            coords.append(Fraction(rng.randint(-bound * q, bound * q), q))
        p = Point(chart, tuple(coords))
        if _usable(p, avoid):
            out.append(p)
    return out
