"""Multivector fields, differential forms and smooth maps on coordinate charts.

Coefficients are Scalars keyed by strictly increasing index tuples (0-based).
A bivector ``{(i, j): f}`` means ``f d_i ^ d_j`` and its sharp map sends
``dx_i`` to ``sum_j pi^{ij} d_j``; a 2-form ``{(i, j): w}`` satisfies
``(iota_u omega)_j = sum_i u_i omega_ij``.
"""
import enum
from fractions import Fraction
from itertools import combinations

from .errors import ArityError, UnsupportedModeError
from .scalars import Point, Scalar, parse
from . import linalg


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_DETERMINED = "not-determined"

    def __bool__(self):
        return self is Verdict.HOLDS


class Chart:
    def __init__(self, variables, name=None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ArityError(f"repeated variable in chart {self.variables}")
        self.name = name
        self._coords = tuple(Scalar.var(v, self.variables) for v in self.variables)

    @property
    def dim(self):
        return len(self.variables)

    def coord(self, i):
        return self._coords[i]

    def coords(self):
        return self._coords

    def index(self, name):
        return self.variables.index(name)

    def scalar(self, value):
        """Coerce text, numbers or scalars into this chart's coefficient field."""
        if isinstance(value, str):
            return parse(value, self.variables)
        s = Scalar.coerce(value)
        return s.over(self.variables) if s.is_exact else s

    def point(self, *coords):
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return Point(self.variables, tuple(coords))

    def __eq__(self, other):
        return isinstance(other, Chart) and other.variables == self.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        label = self.name or "Chart"
        return f"{label}({', '.join(self.variables)})"


def sort_sign(idx):
    """Sort an index tuple; return (sign, sorted) or (0, None) on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def _add_into(acc, key, value):
    cur = acc.get(key)
    acc[key] = value if cur is None else cur + value


def _prune(coeffs):
    out = {}
    for k, v in coeffs.items():
        if v.is_exact and v.is_zero():
            continue
        out[k] = v
    return out


def _wedge_raw(a, b):
    out = {}
    for i, f in a.items():
        si = set(i)
        for j, g in b.items():
            if si.intersection(j):
                continue
            inv = sum(1 for x in i for y in j if x > y)
            key = tuple(sorted(i + j))
            val = f * g
            _add_into(out, key, -val if inv % 2 else val)
    return _prune(out)


class _Graded:
    kind = None

    def __init__(self, chart, degree, coeffs=None):
        self.chart = chart
        self.degree = degree
        acc = {}
        for key, value in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ArityError(f"index {key} has wrong length for degree {degree}")
            if any(k < 0 or k >= chart.dim for k in key):
                raise ArityError(f"index {key} out of range for {chart}")
            sign, skey = sort_sign(key)
            if sign == 0:
                continue
            s = chart.scalar(value)
            _add_into(acc, skey, s if sign > 0 else -s)
        self._c = _prune(acc)

    @classmethod
    def _raw(cls, chart, degree, coeffs):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj._c = _prune(coeffs)
        return obj

    @classmethod
    def zero(cls, chart, degree):
        return cls._raw(chart, degree, {})

    @classmethod
    def basis(cls, chart, *indices):
        return cls(chart, len(indices), {tuple(indices): 1})

    @classmethod
    def function(cls, chart, f):
        return cls(chart, 0, {(): f})

    def items(self):
        return sorted(self._c.items())

    def keys(self):
        return sorted(self._c)

    def coefficient(self, *idx):
        if len(idx) == 1 and isinstance(idx[0], tuple):
            idx = idx[0]
        sign, key = sort_sign(idx)
        if sign == 0 or key not in self._c:
            return Scalar.const(0)
        return self._c[key] if sign > 0 else -self._c[key]

    @property
    def is_exact(self):
        return all(v.is_exact for v in self._c.values())

    def is_zero(self):
        if not self.is_exact:
            raise UnsupportedModeError("zero test of a NUMERIC multivector")
        return not self._c

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.chart != self.chart:
            raise ArityError("charts differ")
        if other.degree != self.degree:
            raise ArityError("degrees differ")

    def __add__(self, other):
        self._check(other)
        acc = dict(self._c)
        for k, v in other._c.items():
            _add_into(acc, k, v)
        return self._raw(self.chart, self.degree, acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._raw(self.chart, self.degree, {k: -v for k, v in self._c.items()})

    def __mul__(self, f):
        f = self.chart.scalar(f) if not isinstance(f, Scalar) else f
        return self._raw(self.chart, self.degree, {k: v * f for k, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self) or other.chart != self.chart or other.degree != self.degree:
            return NotImplemented
        if self.is_exact and other.is_exact:
            return (self - other).is_zero()
        return sorted((k, v.structure_key()) for k, v in self._c.items()) == \
            sorted((k, v.structure_key()) for k, v in other._c.items())

    def __hash__(self):
        return hash((self.kind, self.degree, self.chart, tuple(sorted(self._c))))

    def map_coefficients(self, fn):
        return self._raw(self.chart, self.degree, {k: fn(v) for k, v in self._c.items()})

    def diff(self, var):
        return self.map_coefficients(lambda c: c.diff(var))

    def wedge(self, other):
        if type(other) is not type(self) or other.chart != self.chart:
            raise TypeError("wedge needs two fields of the same kind on one chart")
        return self._raw(self.chart, self.degree + other.degree, _wedge_raw(self._c, other._c))

    def __xor__(self, other):
        return self.wedge(other)

    def at(self, point):
        """Coefficient values at a point, keyed by index tuple."""
        return {k: v.evaluate(point) for k, v in self._c.items()}

    def matrix(self):
        """Antisymmetric coefficient matrix of a degree-2 field (Scalars)."""
        if self.degree != 2:
            raise ArityError("matrix() needs degree 2")
        n = self.chart.dim
        zero = Scalar.const(0)
        m = [[zero] * n for _ in range(n)]
        for (i, j), v in self._c.items():
            m[i][j] = v
            m[j][i] = -v
        return m

    def matrix_at(self, point):
        if self.degree != 2:
            raise ArityError("matrix_at() needs degree 2")
        n = self.chart.dim
        exact = point.exact and self.is_exact
        zero = Fraction(0) if exact else 0.0
        m = [[zero] * n for _ in range(n)]
        for (i, j), v in self._c.items():
            val = v.evaluate(point)
            if not exact:
                val = float(val)
            m[i][j] = val
            m[j][i] = -val
        return m

    def vector_at(self, point):
        if self.degree != 1:
            raise ArityError("vector_at() needs degree 1")
        exact = point.exact and self.is_exact
        out = [Fraction(0) if exact else 0.0] * self.chart.dim
        for (i,), v in self._c.items():
            val = v.evaluate(point)
            out[i] = val if exact else float(val)
        return out

    def components(self):
        if self.degree != 1:
            raise ArityError("components() needs degree 1")
        return [self.coefficient(i) for i in range(self.chart.dim)]

    @classmethod
    def from_matrix(cls, chart, m):
        n = chart.dim
        return cls(chart, 2, {(i, j): m[i][j] for i in range(n) for j in range(i + 1, n)})

    @classmethod
    def from_components(cls, chart, comps):
        return cls(chart, 1, {(i,): c for i, c in enumerate(comps)})

    def to_dict(self, one_based=True):
        off = 1 if one_based else 0
        return {",".join(str(i + off) for i in k): v.to_text(self.chart.variables) if v.is_exact else v.to_text()
                for k, v in self.items()}

    def __repr__(self):
        body = ", ".join(f"[{','.join(str(i + 1) for i in k)}]: {v}" for k, v in self.items())
        return f"{type(self).__name__}(deg={self.degree}, {{{body}}})"


class Multivector(_Graded):
    kind = "multivector"


class Form(_Graded):
    kind = "form"


def wedge(a, b):
    return a.wedge(b)


def _right_dtheta(coeffs, i):
    out = {}
    for idx, c in coeffs.items():
        if i in idx:
            k = idx.index(i)
            sign = -1 if (len(idx) - 1 - k) % 2 else 1
            _add_into(out, idx[:k] + idx[k + 1:], c if sign > 0 else -c)
    return out


def _left_dtheta(coeffs, i):
    out = {}
    for idx, c in coeffs.items():
        if i in idx:
            k = idx.index(i)
            sign = -1 if k % 2 else 1
            _add_into(out, idx[:k] + idx[k + 1:], c if sign > 0 else -c)
    return out


def _dx(coeffs, var):
    out = {}
    for idx, c in coeffs.items():
        d = c.diff(var)
        if not (d.is_exact and d.is_zero()):
            out[idx] = d
    return out


def schouten(p, q):
    """Schouten-Nijenhuis bracket, computed in odd (super) coordinates.

    ``[P, Q] = sum_i (dP/dtheta_i, right) ^ (dQ/dx_i) - (dP/dx_i) ^ (dQ/dtheta_i, left)``.
    """
    if not isinstance(p, Multivector) or not isinstance(q, Multivector):
        raise TypeError("schouten needs multivectors")
    if p.chart != q.chart:
        raise ArityError("charts differ")
    out = {}
    for i, v in enumerate(p.chart.variables):
        for k, c in _wedge_raw(_right_dtheta(p._c, i), _dx(q._c, v)).items():
            _add_into(out, k, c)
        for k, c in _wedge_raw(_dx(p._c, v), _left_dtheta(q._c, i)).items():
            _add_into(out, k, -c)
    return Multivector._raw(p.chart, p.degree + q.degree - 1, out)


def is_poisson(pi):
    """Exact Jacobi test [pi, pi] = 0 for an EXACT bivector."""
    if pi.degree != 2:
        raise ArityError("is_poisson needs a bivector")
    if not pi.is_exact:
        raise UnsupportedModeError("is_poisson needs EXACT coefficients; use poisson_verdict")
    return schouten(pi, pi).is_zero()


def jacobiator_residual(pi, points):
    """Max absolute coefficient of [pi, pi] over sample points (float)."""
    bracket = schouten(pi, pi)
    worst = 0.0
    for p in points:
        for v in bracket.at(p).values():
            worst = max(worst, abs(float(v)))
    return worst


def poisson_verdict(pi, points=None, tol=1e-9):
    """HOLDS/FAILS for exact input; FAILS or NOT_DETERMINED when sampled."""
    if pi.is_exact:
        return (Verdict.HOLDS if is_poisson(pi) else Verdict.FAILS), 0.0
    from .scalars import rational_grid
    pts = points if points is not None else rational_grid(pi.chart.variables, per_dim=3, seed=1)
    residual = jacobiator_residual(pi, pts)
    return (Verdict.FAILS if residual > tol else Verdict.NOT_DETERMINED), residual


def sharp(pi, xi):
    """pi^sharp of a 1-form: (pi^sharp xi)_j = sum_i xi_i pi^{ij}."""
    if pi.degree != 2 or xi.degree != 1:
        raise ArityError("sharp needs a bivector and a 1-form")
    n = pi.chart.dim
    comps = [Scalar.const(0)] * n
    for (i,), a in xi._c.items():
        for j in range(n):
            c = pi.coefficient(i, j)
            if not (c.is_exact and c.is_zero()):
                comps[j] = comps[j] + a * c
    return Multivector.from_components(pi.chart, comps)


def sharp_matrix_apply(p, xi):
    """Pointwise sharp: u_j = sum_i xi_i P[i][j]."""
    n = len(p)
    return [sum((xi[i] * p[i][j] for i in range(n)), 0 * p[0][0] if n else 0) for j in range(n)]


def hamiltonian(pi, f):
    f = pi.chart.scalar(f)
    return sharp(pi, d(Form.function(pi.chart, f)))


def d(omega):
    """Exterior derivative."""
    out = {}
    for idx, c in omega._c.items():
        for j, v in enumerate(omega.chart.variables):
            if j in idx:
                continue
            dc = c.diff(v)
            if dc.is_exact and dc.is_zero():
                continue
            sign, key = sort_sign((j,) + idx)
            _add_into(out, key, dc if sign > 0 else -dc)
    return Form._raw(omega.chart, omega.degree + 1, out)


def interior(x, omega):
    """iota_X omega, contracting the first slot."""
    if x.degree != 1:
        raise ArityError("interior needs a vector field")
    out = {}
    for idx, c in omega._c.items():
        for m, i in enumerate(idx):
            xi = x.coefficient(i)
            if xi.is_exact and xi.is_zero():
                continue
            val = xi * c
            _add_into(out, idx[:m] + idx[m + 1:], -val if m % 2 else val)
    return Form._raw(omega.chart, omega.degree - 1, out)


def evaluate_form(omega, vectors):
    """omega(X_1, ..., X_k) as a Scalar, by successive contraction."""
    cur = omega
    for x in vectors:
        cur = interior(x, cur)
    return cur.coefficient(())


def apply_vector(x, f):
    """X(f) for a vector field X and scalar f."""
    total = Scalar.const(0)
    for (i,), c in x._c.items():
        df = f.diff(x.chart.variables[i])
        if not (df.is_exact and df.is_zero()):
            total = total + c * df
    return total


def lie_derivative(x, t):
    """L_X of a function, multivector or form."""
    if isinstance(t, Scalar):
        return apply_vector(x, t)
    if isinstance(t, Multivector):
        return schouten(x, t)
    out = {}
    n = t.chart.dim
    for idx, c in t._c.items():
        xc = apply_vector(x, c)
        if not (xc.is_exact and xc.is_zero()):
            _add_into(out, idx, xc)
        for m, i in enumerate(idx):
            comp = x.coefficient(i)
            for j in range(n):
                dj = comp.diff(t.chart.variables[j])
                if dj.is_exact and dj.is_zero():
                    continue
                key = idx[:m] + (j,) + idx[m + 1:]
                sign, skey = sort_sign(key)
                if sign == 0:
                    continue
                val = c * dj
                _add_into(out, skey, val if sign > 0 else -val)
    return Form._raw(t.chart, t.degree, out)


def lie_bracket(x, y):
    return schouten(x, y)


def euler_field(chart, k):
    """E_k = x_k d/dx_k + y_k d/dy_k for the k-th (x, y) coordinate pair."""
    xs, ys = chart.coord(2 * k), chart.coord(2 * k + 1)
    return Multivector(chart, 1, {(2 * k,): xs, (2 * k + 1,): ys})


def rotation_field(chart, k):
    """V_k = x_k d/dy_k - y_k d/dx_k for the k-th (x, y) coordinate pair."""
    xs, ys = chart.coord(2 * k), chart.coord(2 * k + 1)
    return Multivector(chart, 1, {(2 * k + 1,): xs, (2 * k,): -ys})


def coordinate_field(chart, i):
    return Multivector.basis(chart, i)


class SmoothMap:
    """phi: source chart -> target chart, given by target-coordinate component scalars."""

    def __init__(self, source, target, components, name=None):
        self.source = source
        self.target = target
        if len(components) != target.dim:
            raise ArityError(f"map has {len(components)} components, target has dim {target.dim}")
        self.components = tuple(source.scalar(c) for c in components)
        self.name = name
        self._jac = None

    @classmethod
    def identity(cls, chart):
        return cls(chart, chart, list(chart.coords()))

    @property
    def is_exact(self):
        return all(c.is_exact for c in self.components)

    def jacobian(self):
        """Target-dim x source-dim matrix of partial derivatives."""
        if self._jac is None:
            self._jac = [[c.diff(v) for v in self.source.variables] for c in self.components]
        return self._jac

    def jacobian_at(self, point):
        exact = point.exact and self.is_exact
        out = []
        for row in self.jacobian():
            vals = [s.evaluate(point) for s in row]
            out.append(vals if exact else [float(v) for v in vals])
        return out

    def apply(self, point):
        vals = [c.evaluate(point) for c in self.components]
        return Point(self.target.variables, tuple(vals))

    def pull(self, f):
        """f o phi for a scalar on the target chart."""
        f = Scalar.coerce(f)
        return f.subs(dict(zip(self.target.variables, self.components))).over(self.source.variables) \
            if f.is_exact and all(c.is_exact for c in self.components) else \
            f.subs(dict(zip(self.target.variables, self.components)))

    def compose(self, inner):
        """self o inner."""
        if inner.target != self.source:
            raise ArityError("maps do not compose")
        return SmoothMap(inner.source, self.target, [inner.pull(c) for c in self.components])

    def __repr__(self):
        comps = ", ".join(str(c) for c in self.components)
        return f"SmoothMap({self.source} -> {self.target}: {comps})"


def pullback_form(phi, omega):
    """phi^* omega."""
    if omega.chart != phi.target:
        raise ArityError("form does not live on the map's target")
    jac = phi.jacobian()
    dphi = [{(a,): jac[j][a] for a in range(phi.source.dim) if not (jac[j][a].is_exact and jac[j][a].is_zero())}
            for j in range(phi.target.dim)]
    out = {}
    for idx, c in omega._c.items():
        acc = {(): phi.pull(c)}
        for j in idx:
            acc = _wedge_raw(acc, dphi[j])
        for k, v in acc.items():
            _add_into(out, k, v)
    return Form._raw(phi.source, omega.degree, out)


def pullback_function(phi, f):
    return phi.pull(f)


def push_bivector_residual(phi, src, tgt):
    """Coefficients of phi_* src - tgt o phi, as a bivector-shaped table on the source."""
    if src.chart != phi.source or tgt.chart != phi.target:
        raise ArityError("bivectors do not match the map")
    jac = phi.jacobian()
    n = phi.source.dim
    m = phi.target.dim
    mat = src.matrix()
    out = {}
    for a, b in combinations(range(m), 2):
        total = Scalar.const(0)
        for i in range(n):
            ja = jac[a][i]
            if ja.is_exact and ja.is_zero():
                continue
            for j in range(n):
                if i == j:
                    continue
                jb = jac[b][j]
                pij = mat[i][j]
                if (jb.is_exact and jb.is_zero()) or (pij.is_exact and pij.is_zero()):
                    continue
                total = total + ja * jb * pij
        total = total - phi.pull(tgt.coefficient(a, b))
        if not (total.is_exact and total.is_zero()):
            out[(a, b)] = total
    return out


def map_related(phi, src, tgt):
    """Exact test that phi_* src = tgt along phi (phi is a Poisson map)."""
    if not (phi.is_exact and src.is_exact and tgt.is_exact):
        raise UnsupportedModeError("map_related needs EXACT data; use map_related_verdict")
    return not push_bivector_residual(phi, src, tgt)


def map_related_verdict(phi, src, tgt, points, tol=1e-9):
    if phi.is_exact and src.is_exact and tgt.is_exact:
        return Verdict.HOLDS if map_related(phi, src, tgt) else Verdict.FAILS
    res = push_bivector_residual(phi, src, tgt)
    worst = 0.0
    for p in points:
        for v in res.values():
            worst = max(worst, abs(float(v.evaluate(p))))
    return Verdict.FAILS if worst > tol else Verdict.NOT_DETERMINED


def bivector_from_matrix(chart, m):
    return Multivector.from_matrix(chart, m)


def constant_bivector(chart, m):
    return Multivector.from_matrix(chart, [[Scalar.const(Fraction(x)) for x in row] for row in m])
