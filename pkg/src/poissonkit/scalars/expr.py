"""Expression-tree nodes for NUMERIC scalars.

Children are Scalars (exact or numeric), so derivatives and compositions fold
exact subtrees back into the rational function field automatically.
"""
import math

from ..errors import DenominatorVanishes, DomainError

FUNCTIONS = ("exp", "sin", "cos", "arctan", "sqrt")

# printing precedence
P_SUM, P_PROD, P_NEG, P_POW, P_ATOM = 1, 2, 3, 4, 5


class Node:
    __slots__ = ()

    def children(self):
        raise NotImplementedError

    def key(self):
        raise NotImplementedError

    def internal_count(self):
        return 1 + sum(c.internal_nodes() for c in self.children())


class BinOp(Node):
    __slots__ = ("op", "left", "right")

    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right

    def children(self):
        return (self.left, self.right)

    def key(self):
        return ("bin", self.op, self.left.structure_key(), self.right.structure_key())

    def value(self, env):
        a = self.left.float_value(env)
        b = self.right.float_value(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if b == 0:
            raise DenominatorVanishes(env)
        return a / b

    def diff(self, v):
        a, b = self.left, self.right
        da, db = a.diff(v), b.diff(v)
        if self.op == "+":
            return da + db
        if self.op == "-":
            return da - db
        if self.op == "*":
            return da * b + a * db
        return (da * b - a * db) / (b * b)

    def subs(self, mapping):
        a = self.left.subs(mapping)
        b = self.right.subs(mapping)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def text(self):
        if self.op in "+-":
            prec = P_SUM
            left = self.left.wrapped(P_SUM)
            right = self.right.wrapped(P_PROD)
            return f"{left} {self.op} {right}", prec
        left = self.left.wrapped(P_PROD)
        right = self.right.wrapped(P_NEG)
        return f"{left}{self.op}{right}", P_PROD


class Neg(Node):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def children(self):
        return (self.arg,)

    def key(self):
        return ("neg", self.arg.structure_key())

    def value(self, env):
        return -self.arg.float_value(env)

    def diff(self, v):
        return -self.arg.diff(v)

    def subs(self, mapping):
        return -self.arg.subs(mapping)

    def text(self):
        return "-" + self.arg.wrapped(P_NEG), P_NEG


class Pow(Node):
    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent):
        self.base = base
        self.exponent = int(exponent)

    def children(self):
        return (self.base,)

    def key(self):
        return ("pow", self.exponent, self.base.structure_key())

    def value(self, env):
        b = self.base.float_value(env)
        if self.exponent < 0 and b == 0:
            raise DenominatorVanishes(env)
        try:
            return b ** self.exponent
        except OverflowError as exc:
            raise DomainError(env, "overflow in power") from exc

    def diff(self, v):
        n = self.exponent
        return n * self.base ** (n - 1) * self.base.diff(v)

    def subs(self, mapping):
        return self.base.subs(mapping) ** self.exponent

    def text(self):
        exp = str(self.exponent) if self.exponent >= 0 else f"({self.exponent})"
        return f"{self.base.wrapped(P_ATOM)}^{exp}", P_POW


class Func(Node):
    __slots__ = ("name", "arg")

    def __init__(self, name, arg):
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name}")
        self.name = name
        self.arg = arg

    def children(self):
        return (self.arg,)

    def key(self):
        return ("fn", self.name, self.arg.structure_key())

    def value(self, env):
        a = self.arg.float_value(env)
        try:
            if self.name == "exp":
                return math.exp(a)
            if self.name == "sin":
                return math.sin(a)
            if self.name == "cos":
                return math.cos(a)
            if self.name == "arctan":
                return math.atan(a)
            if a < 0:
                raise DomainError(env, "sqrt of a negative number")
            return math.sqrt(a)
        except OverflowError as exc:
            raise DomainError(env, f"overflow in {self.name}") from exc

    def diff(self, v):
        a = self.arg
        da = a.diff(v)
        if self.name == "exp":
            return self.rebuild(a) * da
        if self.name == "sin":
            return a.apply("cos") * da
        if self.name == "cos":
            return -a.apply("sin") * da
        if self.name == "arctan":
            return da / (1 + a * a)
        return da / (2 * a.apply("sqrt"))

    def rebuild(self, arg):
        return arg.apply(self.name)

    def subs(self, mapping):
        return self.arg.subs(mapping).apply(self.name)

    def text(self):
        return f"{self.name}({self.arg.to_text()})", P_ATOM
