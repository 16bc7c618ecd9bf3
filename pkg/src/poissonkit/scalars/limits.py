"""One-variable-at-a-time limits of exact rational functions."""
from fractions import Fraction

from .scalar import Scalar


def _lowest(poly, i):
    """Lowest degree in generator ``i`` and the matching coefficient polynomial."""
    terms = poly.terms()
    low = min(m[i] for m, _ in terms)
    ring = poly.ring
    coeff = ring.zero
    for m, c in terms:
        if m[i] == low:
            mm = list(m)
            mm[i] = 0
            coeff += ring({tuple(mm): c})
    return low, coeff


def limit_in(s, var, value):
    """Limit of an exact scalar as ``var`` tends to ``value``; None if it diverges."""
    s = Scalar.coerce(s)
    if var not in s.variables():
        return s
    moved = s.subs({var: Scalar.var(var) + Scalar.const(Fraction(value))})
    f = moved.frac
    names = [str(g) for g in f.field.symbols]
    i = names.index(var)
    if not f.numer:
        return Scalar.const(0)
    ln, cn = _lowest(f.numer, i)
    ld, cd = _lowest(f.denom, i)
    if ln > ld:
        return Scalar.const(0)
    if ln < ld:
        return None
    return Scalar(frac=f.field(cn)) / Scalar(frac=f.field(cd))


def iterated_limit(s, target, order):
    """Take limits variable by variable in ``order``; ``target`` maps names to values.

    Returns a Fraction, a Scalar when free variables remain, or None when a
    step diverges.
    """
    cur = Scalar.coerce(s)
    for var in order:
        cur = limit_in(cur, var, target[var])
        if cur is None:
            return None
    if cur.is_constant():
        return cur.constant_value()
    return cur


def projective_limit(vector, target, order):
    """Iterated limit of the projective point [v_1 : ... : v_m], variable by variable.

    At each step the components are rescaled by the lowest common power of the
    shifted variable before it is set to its target value. Returns a list of
    Fractions, or None when the vector vanishes identically.
    """
    cur = [Scalar.coerce(c) for c in vector]
    if all(c.is_zero() for c in cur):
        return None
    for var in order:
        orders = []
        leads = []
        for c in cur:
            if c.is_zero() or var not in c.variables():
                orders.append(0 if not c.is_zero() else None)
                leads.append(c)
                continue
            moved = c.subs({var: Scalar.var(var) + Scalar.const(Fraction(target[var]))})
            f = moved.frac
            i = [str(g) for g in f.field.symbols].index(var)
            ln, cn = _lowest(f.numer, i)
            ld, cd = _lowest(f.denom, i)
            orders.append(ln - ld)
            leads.append(Scalar(frac=f.field(cn)) / Scalar(frac=f.field(cd)))
        low = min(o for o in orders if o is not None)
        cur = [lead if o == low else Scalar.const(0) for o, lead in zip(orders, leads)]
    return [c.constant_value() if c.is_constant() else c for c in cur]
