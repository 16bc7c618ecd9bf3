"""Scalars: exact rational functions over QQ or numeric expression trees."""
import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex

from ..errors import ArityError, DenominatorVanishes, UnsupportedModeError
from . import expr as E

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Mode(enum.Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


@lru_cache(maxsize=None)
def field_for(names):
    """Rational function field over QQ in the given variables (grlex order)."""
    for n in names:
        if not NAME_RE.match(n):
            raise ValueError(f"bad variable name {n!r}")
    if len(set(names)) != len(names):
        raise ValueError(f"repeated variable in {names}")
    return FracField(",".join(names), QQ, grlex) if names else FracField("", QQ, grlex)


def _names(field):
    return tuple(str(s) for s in field.symbols)


def _merge(a, b):
    out = list(a)
    for n in b:
        if n not in a:
            out.append(n)
    return tuple(out)


def _fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))


def _to_qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        f = Fraction(value)
        return QQ(f.numerator, f.denominator)
    raise TypeError(f"cannot use {value!r} as an exact constant")


class Scalar:
    """Immutable scalar. Exactly one of ``_frac`` (EXACT) and ``_node`` (NUMERIC) is set."""

    __slots__ = ("_frac", "_node", "_cache")

    def __init__(self, frac=None, node=None):
        self._frac = frac
        self._node = node
        self._cache = {}

    # construction
    @classmethod
    def const(cls, value):
        if isinstance(value, Scalar):
            return value
        if isinstance(value, float):
            raise TypeError("floats are not exact; use Scalar.parse or a Fraction")
        return cls(frac=field_for(())(_to_qq(value)))

    @classmethod
    def var(cls, name, chart=None):
        names = tuple(chart) if chart is not None else (name,)
        field = field_for(names)
        return cls(frac=field.gens[names.index(name)])

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Scalar):
            return value
        if isinstance(value, str):
            from .parser import parse
            return parse(value)
        return cls.const(value)

    # mode
    @property
    def mode(self):
        return Mode.EXACT if self._frac is not None else Mode.NUMERIC

    @property
    def is_exact(self):
        return self._frac is not None

    @property
    def frac(self):
        return self._frac

    @property
    def node(self):
        return self._node

    def _require_exact(self, what):
        if self._frac is None:
            raise UnsupportedModeError(f"{what} needs an EXACT scalar; got a NUMERIC expression")

    # structure
    def variables(self):
        """Names of variables that actually occur, in field order."""
        if self._frac is not None:
            names = _names(self._frac.field)
            used = [False] * len(names)
            for poly in (self._frac.numer, self._frac.denom):
                for monom in poly.monoms():
                    for i, e in enumerate(monom):
                        if e:
                            used[i] = True
            return tuple(n for n, u in zip(names, used) if u)
        out = ()
        for c in self._node.children():
            out = _merge(out, c.variables())
        return out

    def internal_nodes(self):
        return 0 if self._node is None else self._node.internal_count()

    def numerator(self):
        self._require_exact("numerator")
        return Scalar(frac=self._frac.field(self._frac.numer))

    def denominator(self):
        self._require_exact("denominator")
        return Scalar(frac=self._frac.field(self._frac.denom))

    def is_polynomial(self):
        self._require_exact("is_polynomial")
        return self._frac.denom.is_ground

    def is_zero(self):
        self._require_exact("zero test")
        return not self._frac.numer

    def is_constant(self):
        if self._frac is None:
            return False
        return self._frac.numer.is_ground and self._frac.denom.is_ground

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return _fraction(self._frac.numer.LC) / _fraction(self._frac.denom.LC) if self._frac.numer else Fraction(0)

    def over(self, names):
        """Re-embed an exact scalar into the field on ``names`` (a superset of its variables)."""
        names = tuple(names)
        if self._frac is None:
            return self
        if _names(self._frac.field) == names:
            return self
        missing = [v for v in self.variables() if v not in names]
        if missing:
            raise ArityError(f"variables {missing} are not in chart {names}")
        return Scalar(frac=self._frac.set_field(field_for(names)))

    # arithmetic helpers
    @staticmethod
    def _unify(a, b):
        fa, fb = a.field, b.field
        if fa is fb:
            return a, b
        na, nb = _names(fa), _names(fb)
        if na == nb:
            return a, b
        if not nb or set(nb) <= set(na):
            return a, b.set_field(fa)
        if not na or set(na) <= set(nb):
            return a.set_field(fb), b
        f = field_for(_merge(na, nb))
        return a.set_field(f), b.set_field(f)

    def _binary(self, other, op, swap=False):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar.const(other)
            else:
                return NotImplemented
        a, b = (other, self) if swap else (self, other)
        if a._frac is not None and b._frac is not None:
            x, y = Scalar._unify(a._frac, b._frac)
            if op == "+":
                return Scalar(frac=x + y)
            if op == "-":
                return Scalar(frac=x - y)
            if op == "*":
                return Scalar(frac=x * y)
            if not y.numer:
                raise ZeroDivisionError("division by the zero scalar")
            return Scalar(frac=x / y)
        # numeric, with light folding of exact units
        if op == "+":
            if a._is_exact_zero():
                return b
            if b._is_exact_zero():
                return a
        elif op == "-":
            if b._is_exact_zero():
                return a
            if a._is_exact_zero():
                return -b
        elif op == "*":
            if a._is_exact_zero() or b._is_exact_zero():
                return Scalar.const(0)
            if a._is_exact_one():
                return b
            if b._is_exact_one():
                return a
        else:
            if b._is_exact_zero():
                raise ZeroDivisionError("division by the zero scalar")
            if b._is_exact_one():
                return a
            if a._is_exact_zero():
                return Scalar.const(0)
        return Scalar(node=E.BinOp(op, a, b))

    def _is_exact_zero(self):
        return self._frac is not None and not self._frac.numer

    def _is_exact_one(self):
        return self._frac is not None and self._frac.numer == self._frac.denom

    def __add__(self, other):
        return self._binary(other, "+")

    def __radd__(self, other):
        return self._binary(other, "+", swap=True)

    def __sub__(self, other):
        return self._binary(other, "-")

    def __rsub__(self, other):
        return self._binary(other, "-", swap=True)

    def __mul__(self, other):
        return self._binary(other, "*")

    def __rmul__(self, other):
        return self._binary(other, "*", swap=True)

    def __truediv__(self, other):
        return self._binary(other, "/")

    def __rtruediv__(self, other):
        return self._binary(other, "/", swap=True)

    def __neg__(self):
        if self._frac is not None:
            return Scalar(frac=-self._frac)
        if isinstance(self._node, E.Neg):
            return self._node.arg
        return Scalar(node=E.Neg(self))

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if self._frac is not None:
            if n < 0 and not self._frac.numer:
                raise ZeroDivisionError("negative power of zero")
            return Scalar(frac=self._frac ** n)
        if n == 0:
            return Scalar.const(1)
        if n == 1:
            return self
        return Scalar(node=E.Pow(self, n))

    def apply(self, name):
        """Apply one of the elementary functions; result is NUMERIC."""
        return Scalar(node=E.Func(name, self))

    # calculus
    def diff(self, v):
        if self._frac is not None:
            names = _names(self._frac.field)
            if v not in names:
                return Scalar.const(0)
            return Scalar(frac=self._frac.diff(self._frac.field.gens[names.index(v)]))
        return self._node.diff(v)

    def subs(self, mapping):
        """Substitute scalars for variables (composition)."""
        if self._frac is not None:
            names = _names(self._frac.field)
            if not any(n in mapping for n in names):
                return self
            vals = [Scalar.coerce(mapping[n]) if n in mapping else Scalar.var(n) for n in names]
            num = _compose_poly(self._frac.numer, vals)
            den = _compose_poly(self._frac.denom, vals)
            return num / den
        return self._node.subs(mapping)

    # evaluation
    def float_value(self, env):
        """Evaluate at a mapping name -> float."""
        if self._frac is not None:
            fn, names = self._compiled("float")
            args = [env.get(n, 0.0) for n in names]
            num, den = fn(*args)
            if den == 0:
                raise DenominatorVanishes(env)
            return num / den
        return self._node.value(env)

    def exact_value(self, env):
        """Evaluate an EXACT scalar at a mapping name -> Fraction."""
        self._require_exact("exact evaluation")
        fn, names = self._compiled("exact")
        args = [env.get(n, 0) for n in names]
        num, den = fn(*args)
        if den == 0:
            raise DenominatorVanishes(env)
        return Fraction(num) / Fraction(den)

    def evaluate(self, point):
        """Evaluate at a Point (or a name -> value mapping)."""
        if isinstance(point, Point):
            env = dict(zip(point.chart, point.coords))
        else:
            env = dict(point)
        missing = [v for v in self.variables() if v not in env]
        if missing:
            raise ArityError(f"point does not assign {missing}")
        exact = all(isinstance(c, (int, Fraction)) for c in env.values())
        try:
            if self._frac is not None and exact:
                return self.exact_value(env)
            return self.float_value({k: float(v) for k, v in env.items()})
        except DenominatorVanishes as exc:
            raise DenominatorVanishes(point) from exc

    def compile(self, names):
        """Return a fast float function of positional arguments in ``names`` order."""
        names = tuple(names)
        missing = [v for v in self.variables() if v not in names]
        if missing:
            raise ArityError(f"variables {missing} are not among {names}")
        if self._frac is not None:
            fn, own = self._compiled("float")
            idx = [names.index(n) if n in names else None for n in own]

            def run(*args):
                num, den = fn(*[args[i] if i is not None else 0.0 for i in idx])
                return num / den
            return run

        def run_tree(*args):
            return self._node.value(dict(zip(names, args)))
        return run_tree

    def _compiled(self, kind):
        hit = self._cache.get(kind)
        if hit is None:
            hit = _compile_frac(self._frac, kind)
            self._cache[kind] = hit
        return hit

    # printing
    def to_text(self, order=None):
        if self._frac is not None:
            f = self._frac
            if order is not None:
                f = self.over(tuple(order))._frac
            return _frac_text(f)
        return self._node.text()[0]

    def wrapped(self, min_prec):
        text, prec = self._text_prec()
        return f"({text})" if prec < min_prec else text

    def _text_prec(self):
        if self._frac is not None:
            return _frac_text(self._frac), _frac_prec(self._frac)
        return self._node.text()

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Scalar({self.to_text()!r})"

    # equality
    def structure_key(self):
        if self._frac is not None:
            return ("exact", self._canonical_key())
        return self._node.key()

    def _canonical_key(self):
        hit = self._cache.get("key")
        if hit is None:
            used = tuple(sorted(self.variables()))
            f = self._frac.set_field(field_for(used))
            hit = (used, tuple(sorted(f.numer.terms())), tuple(sorted(f.denom.terms())))
            self._cache["key"] = hit
        return hit

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self._frac is not None and other._frac is not None:
            a, b = Scalar._unify(self._frac, other._frac)
            return a.numer * b.denom == b.numer * a.denom
        if self._frac is None and other._frac is None:
            return self._node.key() == other._node.key()
        return False

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._frac is not None:
            return hash(self._canonical_key())
        return hash(self._node.key())


def _compose_poly(poly, vals):
    total = Scalar.const(0)
    powers = {}
    for monom, coeff in poly.terms():
        term = Scalar.const(_fraction(coeff))
        for i, e in enumerate(monom):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = vals[i] ** e
                term = term * powers[key]
        total = total + term
    return total


def _poly_source(poly, kind, consts):
    terms = []
    for monom, coeff in poly.terms():
        c = _fraction(coeff)
        factors = []
        if c != 1:
            consts.append(c if kind == "exact" else float(c))
            factors.append(f"_c[{len(consts) - 1}]")
        for i, e in enumerate(monom):
            if e == 1:
                factors.append(f"_v{i}")
            elif e:
                factors.append(f"_v{i}**{e}")
        terms.append("*".join(factors) if factors else "1")
    return " + ".join(terms) if terms else "0"


def _compile_frac(frac, kind):
    names = _names(frac.field)
    consts = []
    num = _poly_source(frac.numer, kind, consts)
    den = _poly_source(frac.denom, kind, consts)
    args = ", ".join(f"_v{i}" for i in range(len(names)))
    src = f"lambda {args}: ({num}, {den})"
    fn = eval(src, {"_c": consts})  # generated from polynomial terms only
    return fn, names


def _monomial_text(monom, names):
    parts = []
    for n, e in zip(names, monom):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def _poly_text(poly, names, scale=Fraction(1)):
    pieces = []
    for k, (monom, coeff) in enumerate(poly.terms()):
        c = _fraction(coeff) * scale
        neg = c < 0
        c = abs(c)
        mono = _monomial_text(monom, names)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        if k == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces) if pieces else "0"


def _is_atom_poly(poly):
    if len(poly.terms()) != 1:
        return False
    monom, coeff = poly.terms()[0]
    c = _fraction(coeff)
    if not any(monom):
        return c >= 0 and c.denominator == 1
    return c == 1 and sum(1 for e in monom if e) == 1


def _frac_text(frac):
    names = _names(frac.field)
    if frac.denom.is_ground:
        return _poly_text(frac.numer, names, 1 / _fraction(frac.denom.LC))
    num = _poly_text(frac.numer, names)
    if len(frac.numer.terms()) > 1:
        num = f"({num})"
    den = _poly_text(frac.denom, names)
    if not _is_atom_poly(frac.denom):
        den = f"({den})"
    return f"{num}/{den}"


def _frac_prec(frac):
    if not frac.denom.is_ground:
        return E.P_PROD
    terms = frac.numer.terms()
    if len(terms) > 1:
        return E.P_SUM
    if not terms:
        return E.P_ATOM
    monom, coeff = terms[0]
    c = _fraction(coeff) / _fraction(frac.denom.LC)
    if c < 0:
        return E.P_NEG
    if not any(monom):
        return E.P_ATOM if c.denominator == 1 else E.P_PROD
    if c != 1 or sum(1 for e in monom if e) > 1:
        return E.P_PROD
    return E.P_ATOM if max(monom) == 1 else E.P_POW


@dataclass(frozen=True)
class Point:
    chart: tuple
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "chart", tuple(self.chart))
        coords = tuple(Fraction(c) if isinstance(c, (int, str)) else c for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(self.chart) != len(self.coords):
            raise ArityError(f"point has {len(self.coords)} coordinates for chart {self.chart}")

    @property
    def exact(self):
        return all(isinstance(c, Fraction) for c in self.coords)

    def as_dict(self):
        return dict(zip(self.chart, self.coords))

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def floats(self):
        return tuple(float(c) for c in self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def normalize(s):
    """Canonical form of an EXACT scalar; NUMERIC input is rejected."""
    s._require_exact("normalize")
    return s


def differentiate(s, v):
    return s.diff(v)


def evaluate(s, point):
    return s.evaluate(point)
