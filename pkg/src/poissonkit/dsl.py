"""Input files: an INI dialect describing charts, fields, maps and submersions.

Example::

    [chart R3]
    vars = x, y, z

    [bivector pi]
    chart = R3
    x,y = 1
    z,y = 1 + z^2

    [map p]
    from = R3
    to = R2
    components = x, y
    relates = pi, piM

    [submersion]
    total = pi
    map = p
    base = piM

Coefficient keys name coordinates either by variable or by 1-based index.
Keys starting with ``wedge`` hold ``scale ; combo ; combo`` and add
``scale * a ^ b``, where a combo is a linear combination of named vectors,
coordinate fields ``d_<var>`` and, on charts of even dimension, the fields
``E<k>`` and ``V<k>`` of the k-th complex coordinate pair.
"""
import ast
import configparser
import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .calculus import Chart, Form, Multivector, SmoothMap, coordinate_field, euler_field, rotation_field
from .errors import ArityError, DslError, ParseError
from .scalars import Point, rational_grid
from .submanifolds import SubmanifoldSpec
from .submersions import BaseChart, SubmersionSpec, Transition

SECTION_KINDS = ("chart", "vector", "form", "bivector", "map", "submanifold", "submersion", "grid", "flow")
_HEADER = re.compile(r"^\s*\[([^\]]*)\]")
_KEY = re.compile(r"^([^=\s#][^=]*?)\s*=\s*(.*)$")


@dataclass
class GridSpec:
    per_dim: int = 5
    seed: int = 0
    cap: int = 625
    points: list = None

    def build(self, chart, seed=None, per_dim=None):
        if self.points is not None:
            return [Point(chart.variables, p) for p in self.points]
        return rational_grid(chart.variables, per_dim=per_dim or self.per_dim,
                             seed=self.seed if seed is None else seed, cap=self.cap)


@dataclass
class FlowSpec:
    bivector: str
    function: str
    start: tuple
    T: float
    h: float


@dataclass
class SubmanifoldEntry:
    spec: SubmanifoldSpec
    ambient: str
    splitting: list = None
    compare: str = None


@dataclass
class SubmersionEntry:
    spec: SubmersionSpec
    horizontal: list = None


@dataclass
class Document:
    text: str
    charts: dict = field(default_factory=dict)
    bivectors: dict = field(default_factory=dict)
    vectors: dict = field(default_factory=dict)
    forms: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    submanifolds: dict = field(default_factory=dict)
    submersions: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    grid: GridSpec = None
    flow: FlowSpec = None

    @property
    def digest(self):
        return hashlib.sha256(self.text.encode()).hexdigest()


class _Locator:
    """Line and column of each (section, key) value in the raw text."""

    def __init__(self, text):
        self.sections = {}
        self.values = {}
        current = None
        for lineno, line in enumerate(text.splitlines(), 1):
            m = _HEADER.match(line)
            if m:
                current = m.group(1).strip()
                self.sections.setdefault(current, lineno)
                continue
            if current is None or line[:1].isspace():
                continue
            km = _KEY.match(line)
            if km:
                self.values.setdefault((current, km.group(1).strip()), (lineno, km.start(2) + 1))

    def section(self, name):
        return self.sections.get(name)

    def value(self, section, key):
        return self.values.get((section, key), (self.sections.get(section), None))


def _split_header(header):
    parts = header.split(None, 1)
    kind = parts[0] if parts else ""
    name = parts[1].strip() if len(parts) > 1 else ""
    return kind, name


def _csv(text):
    return [t.strip() for t in text.split(",") if t.strip()]


class _Reader:
    def __init__(self, text):
        self.text = text
        self.loc = _Locator(text)
        cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#",),
                                       strict=True, empty_lines_in_values=False)
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.MissingSectionHeaderError as exc:
            raise DslError("content before the first [section]", exc.lineno, 1) from None
        except configparser.DuplicateSectionError as exc:
            raise DslError(f"duplicate section [{exc.section}]", exc.lineno, 1) from None
        except configparser.DuplicateOptionError as exc:
            raise DslError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno, 1) from None
        except configparser.ParsingError as exc:
            lineno, line = exc.errors[0]
            if line.startswith("'") and line.endswith("'"):
                line = ast.literal_eval(line)
            raise DslError(f"cannot parse {line.strip()!r}", lineno, 1) from None
        self.cp = cp
        self.doc = Document(text)

    # error helpers
    def fail(self, section, key, message, offset=None):
        line, col = self.loc.value(section, key) if key else (self.loc.section(section), None)
        if col is not None and offset is not None:
            col += offset
        raise DslError(message, line, col)

    def get(self, section, key, required=True):
        if self.cp.has_option(section, key):
            return self.cp.get(section, key).strip()
        if required:
            raise DslError(f"[{section}] needs a {key!r} entry", self.loc.section(section), None)
        return None

    def scalar(self, chart, section, key, text, offset=0):
        try:
            return chart.scalar(text)
        except ParseError as exc:
            self.fail(section, key, exc.message, offset + (exc.position or 0))

    def lookup(self, table, name, what, section, key):
        if name not in table:
            self.fail(section, key, f"unknown {what} {name!r}")
        return table[name]

    # sections
    def read(self):
        order = {k: i for i, k in enumerate(SECTION_KINDS)}
        sections = []
        for header in self.cp.sections():
            kind, name = _split_header(header)
            if kind not in order:
                raise DslError(f"unknown section kind {kind!r}", self.loc.section(header), 2)
            sections.append((order[kind], self.loc.section(header) or 0, header, kind, name))
        sections.sort()
        for _, _, header, kind, name in sections:
            getattr(self, "_" + kind)(header, name)
        return self.doc

    def _need_name(self, header, name):
        if not name:
            raise DslError(f"section [{header}] needs a name", self.loc.section(header), 2)

    def _chart(self, header, name):
        self._need_name(header, name)
        names = _csv(self.get(header, "vars"))
        for v in names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", v):
                self.fail(header, "vars", f"bad variable name {v!r}")
        try:
            self.doc.charts[name] = Chart(names, name)
        except ArityError as exc:
            self.fail(header, "vars", str(exc))

    def _chart_of(self, header):
        return self.lookup(self.doc.charts, self.get(header, "chart"), "chart", header, "chart")

    def _index(self, chart, header, key, token):
        token = token.strip()
        if token.isdigit():
            i = int(token) - 1
            if not 0 <= i < chart.dim:
                self.fail(header, key, f"index {token} out of range for {chart.dim} coordinates")
            return i
        if token in chart.variables:
            return chart.index(token)
        self.fail(header, key, f"{token!r} is neither a coordinate nor an index")

    def _builtin_vector(self, chart, token):
        m = re.fullmatch(r"([EV])(\d+)", token)
        if m and chart.dim % 2 == 0 and int(m.group(2)) < chart.dim // 2:
            k = int(m.group(2))
            return euler_field(chart, k) if m.group(1) == "E" else rotation_field(chart, k)
        if token.startswith("d_") and token[2:] in chart.variables:
            return coordinate_field(chart, chart.index(token[2:]))
        return None

    def combo(self, chart, header, key, text, offset):
        """Linear combination of vector fields, e.g. ``E0 - 2*x*d_y``."""
        terms = []
        depth, start = 0, 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch in "+-" and depth == 0 and i > start:
                prev = text[start:i].rstrip()
                if prev and prev[-1] not in "*/^(":
                    terms.append((start, text[start:i]))
                    start = i
        terms.append((start, text[start:]))
        total = Multivector.zero(chart, 1)
        for pos, term in terms:
            body = term.strip()
            sign = 1
            if body[:1] in "+-":
                sign = -1 if body[0] == "-" else 1
                body = body[1:].strip()
            cut = body.rfind("*")
            name, coeff_text = (body[cut + 1:].strip(), body[:cut]) if cut >= 0 else (body, None)
            vec = self.doc.vectors.get(name) or self._builtin_vector(chart, name)
            if vec is None:
                self.fail(header, key, f"unknown vector field {name!r}", offset + pos)
            if vec.chart != chart:
                self.fail(header, key, f"vector field {name!r} lives on another chart", offset + pos)
            coeff = self.scalar(chart, header, key, coeff_text, offset + pos) if coeff_text else chart.scalar(1)
            total = total + vec * (coeff if sign > 0 else -coeff)
        return total

    def _graded(self, header, name, cls, degree=None):
        self._need_name(header, name)
        chart = self._chart_of(header)
        total = None
        for key, value in self.cp.items(header):
            if key == "chart":
                continue
            if key.startswith("wedge"):
                parts = value.split(";")
                if len(parts) < 2:
                    self.fail(header, key, "expected 'scale ; combo ; combo'")
                if cls is Form:
                    self.fail(header, key, "wedge entries are only supported for multivectors")
                offsets = [0]
                for p in parts[:-1]:
                    offsets.append(offsets[-1] + len(p) + 1)
                scale = self.scalar(chart, header, key, parts[0], 0) if parts[0].strip() else chart.scalar(1)
                term = None
                for p, off in zip(parts[1:], offsets[1:]):
                    v = self.combo(chart, header, key, p, off)
                    term = v if term is None else term.wedge(v)
                term = term * scale
            else:
                idx = tuple(self._index(chart, header, key, t) for t in key.split(","))
                try:
                    term = cls(chart, len(idx), {idx: self.scalar(chart, header, key, value)})
                except ArityError as exc:
                    self.fail(header, key, str(exc))
            if degree is not None and term.degree != degree:
                self.fail(header, key, f"expected degree {degree}, got {term.degree}")
            if total is not None and total.degree != term.degree:
                self.fail(header, key, "entries of different degree")
            total = term if total is None else total + term
        if total is None:
            total = cls.zero(chart, degree if degree is not None else 2)
        return total

    def _bivector(self, header, name):
        self.doc.bivectors[name] = self._graded(header, name, Multivector, 2)

    def _form(self, header, name):
        self.doc.forms[name] = self._graded(header, name, Form)

    def _vector(self, header, name):
        self._need_name(header, name)
        chart = self._chart_of(header)
        comps = self.get(header, "components", required=False)
        if comps is not None:
            items = comps.split(",")
            if len(items) != chart.dim:
                self.fail(header, "components", f"{len(items)} components for {chart.dim} coordinates")
            vals, off = [], 0
            for item in items:
                vals.append(self.scalar(chart, header, "components", item, off))
                off += len(item) + 1
            self.doc.vectors[name] = Multivector.from_components(chart, vals)
            return
        if self.cp.has_option(header, "combo"):
            self.doc.vectors[name] = self.combo(chart, header, "combo", self.get(header, "combo"), 0)
            return
        self.doc.vectors[name] = self._graded(header, name, Multivector, 1)

    def _map(self, header, name):
        self._need_name(header, name)
        src = self.lookup(self.doc.charts, self.get(header, "from"), "chart", header, "from")
        tgt = self.lookup(self.doc.charts, self.get(header, "to"), "chart", header, "to")
        items = self.get(header, "components").split(",")
        if len(items) != tgt.dim:
            self.fail(header, "components", f"{len(items)} components for a target of dimension {tgt.dim}")
        vals, off = [], 0
        for item in items:
            vals.append(self.scalar(src, header, "components", item, off))
            off += len(item) + 1
        self.doc.maps[name] = SmoothMap(src, tgt, vals, name)
        if self.cp.has_option(header, "relates"):
            pair = _csv(self.get(header, "relates"))
            if len(pair) != 2:
                self.fail(header, "relates", "expected 'source bivector, target bivector'")
            a, b = (self.lookup(self.doc.bivectors, p, "bivector", header, "relates") for p in pair)
            if a.chart != src or b.chart != tgt:
                self.fail(header, "relates", "bivectors must live on the map's source and target charts")
            self.doc.relations[name] = (self.doc.maps[name], pair[0], pair[1])

    def _vector_list(self, header, key, chart):
        names = _csv(self.get(header, key))
        out = []
        for n in names:
            v = self.doc.vectors.get(n) or self._builtin_vector(chart, n)
            if v is None:
                self.fail(header, key, f"unknown vector field {n!r}")
            out.append(v)
        return out

    def _submanifold(self, header, name):
        self._need_name(header, name)
        amb_name = self.get(header, "ambient")
        ambient = self.lookup(self.doc.bivectors, amb_name, "bivector", header, "ambient")
        emb = self.lookup(self.doc.maps, self.get(header, "embedding"), "map", header, "embedding")
        if emb.target != ambient.chart:
            self.fail(header, "embedding", "embedding does not land in the ambient chart")
        levels = ()
        if self.cp.has_option(header, "levels"):
            levels = tuple(self.scalar(ambient.chart, header, "levels", t) for t in _csv(self.get(header, "levels")))
        entry = SubmanifoldEntry(SubmanifoldSpec(emb, levels), amb_name)
        if self.cp.has_option(header, "splitting"):
            entry.splitting = self._vector_list(header, "splitting", ambient.chart)
        if self.cp.has_option(header, "compare"):
            cmp = self.lookup(self.doc.bivectors, self.get(header, "compare"), "bivector", header, "compare")
            if cmp.chart != emb.source:
                self.fail(header, "compare", "comparison bivector must live on the source chart")
            entry.compare = self.get(header, "compare")
        self.doc.submanifolds[name] = entry

    def _submersion(self, header, name):
        total = self.lookup(self.doc.bivectors, self.get(header, "total"), "bivector", header, "total")
        charts = []
        k = 1
        while True:
            suffix = "" if k == 1 else f".{k}"
            if not self.cp.has_option(header, "map" + suffix):
                break
            proj = self.lookup(self.doc.maps, self.get(header, "map" + suffix), "map", header, "map" + suffix)
            if proj.source != total.chart:
                self.fail(header, "map" + suffix, "projection must start on the total chart")
            base = None
            if self.cp.has_option(header, "base" + suffix):
                base = self.lookup(self.doc.bivectors, self.get(header, "base" + suffix), "bivector",
                                   header, "base" + suffix)
                if base.chart != proj.target:
                    self.fail(header, "base" + suffix, "base bivector must live on the projection's target")
            dom = None
            if self.cp.has_option(header, "domain" + suffix):
                dom = self.scalar(total.chart, header, "domain" + suffix, self.get(header, "domain" + suffix))
            charts.append(BaseChart(proj, base, dom))
            k += 1
        if not charts:
            raise DslError(f"[{header}] needs a 'map' entry", self.loc.section(header), None)
        transitions = []
        for key, value in self.cp.items(header):
            m = re.fullmatch(r"transition\.(\d+)\.(\d+)", key)
            if m:
                a, b = int(m.group(1)) - 1, int(m.group(2)) - 1
                if not (0 <= a < len(charts) and 0 <= b < len(charts)):
                    self.fail(header, key, "transition refers to a missing chart")
                tmap = self.lookup(self.doc.maps, value.strip(), "map", header, key)
                transitions.append(Transition(a, b, tmap))
        entry = SubmersionEntry(SubmersionSpec(total, tuple(charts), tuple(transitions), name or None))
        if self.cp.has_option(header, "horizontal"):
            entry.horizontal = self._vector_list(header, "horizontal", total.chart)
        self.doc.submersions[name] = entry

    def _int(self, header, key, default):
        text = self.get(header, key, required=False)
        if text is None:
            return default
        try:
            return int(text)
        except ValueError:
            self.fail(header, key, f"expected an integer, got {text!r}")

    def _number(self, header, key):
        text = self.get(header, key)
        try:
            return float(Fraction(text))
        except ValueError:
            try:
                return float(text)
            except ValueError:
                self.fail(header, key, f"expected a number, got {text!r}")

    def _grid(self, header, name):
        g = GridSpec(self._int(header, "per_dim", 5), self._int(header, "seed", 0), self._int(header, "cap", 625))
        pts = self.get(header, "points", required=False)
        if pts is not None:
            try:
                g.points = [tuple(Fraction(c.strip()) for c in p.split(",")) for p in pts.split(";") if p.strip()]
            except ValueError:
                self.fail(header, "points", "points are ';'-separated lists of rationals")
        self.doc.grid = g

    def _flow(self, header, name):
        biv = self.get(header, "bivector")
        self.lookup(self.doc.bivectors, biv, "bivector", header, "bivector")
        start = self.get(header, "start")
        try:
            x0 = tuple(float(Fraction(c.strip())) for c in start.split(","))
        except ValueError:
            self.fail(header, "start", "start is a comma-separated list of rationals")
        self.doc.flow = FlowSpec(biv, self.get(header, "function"), x0,
                                 self._number(header, "T"), self._number(header, "h"))


def parse_document(text):
    """Parse DSL text into a :class:`Document`; raises :class:`DslError` with a position."""
    return _Reader(text).read()


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())
