import pytest

from poissonkit import catalogue, dsl
from poissonkit.calculus import Multivector
from poissonkit.errors import DslError

from helpers import fixture_text

BASE = """[chart R3]
vars = x, y, z
[chart R2]
vars = u, v
[bivector pi]
chart = R3
x,y = 1
z,y = 1 + z^2
[bivector piM]
chart = R2
1,2 = 1
"""


def test_named_and_indexed_keys_agree():
    doc = dsl.parse_document(BASE)
    pi = doc.bivectors["pi"]
    c = doc.charts["R3"]
    assert pi == Multivector(c, 2, {(0, 1): 1, (2, 1): "1 + z^2"})
    assert doc.bivectors["piM"].coefficient(0, 1) == doc.charts["R2"].scalar(1)


def test_map_and_relation():
    text = BASE + "[map p]\nfrom = R3\nto = R2\ncomponents = x, y\nrelates = pi, piM\n"
    doc = dsl.parse_document(text)
    assert doc.maps["p"].components[1] == doc.charts["R2"].scalar("0") + doc.charts["R3"].scalar("y")


def test_wedge_entries():
    text = "[chart C]\nvars = a, b, c, d\n[bivector w]\nchart = C\nwedge = 1/2 ; E1 ; V1\n"
    doc = dsl.parse_document(text)
    assert not doc.bivectors["w"].is_zero()


def _error(text):
    with pytest.raises(DslError) as info:
        dsl.parse_document(text)
    return info.value


def test_errors_carry_line_numbers():
    err = _error(BASE + "[bivector bad]\nchart = R3\nx,y = 1 +* z\n")
    assert (err.line, err.column) == (14, 10)
    assert "line 14, column 10" in str(err)


def test_unknown_section_kind():
    err = _error(BASE + "[tensor T]\n")
    assert err.line == 12 and "unknown section kind" in str(err)


def test_content_before_first_section():
    err = _error("vars = x\n" + BASE)
    assert err.line == 1


def test_index_out_of_range():
    err = _error(BASE + "[bivector q]\nchart = R2\n1,3 = 1\n")
    assert "out of range" in str(err) and err.line == 14


def test_relates_must_match_charts():
    text = BASE + "[map p]\nfrom = R3\nto = R2\ncomponents = x, y\nrelates = piM, pi\n"
    err = _error(text)
    assert "relates" in str(err) or "chart" in str(err)
    assert err.line == 16


def test_component_count_checked():
    err = _error(BASE + "[map p]\nfrom = R3\nto = R2\ncomponents = x\n")
    assert "components" in str(err)


@pytest.mark.parametrize("name", sorted({f.source for f in catalogue.FIXTURES if isinstance(f.source, str)}))
def test_shipped_files_parse(name):
    doc = dsl.parse_document(fixture_text(name.removesuffix(".dsl")))
    assert doc.charts
