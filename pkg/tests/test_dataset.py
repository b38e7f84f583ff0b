import json
from fractions import Fraction

import pytest

from vanderbound.common.dataset import load_nodeset, nodeset_document, parse_nodeset
from vanderbound.core.errors import InvalidNodeSetError, NodeSetParseError


def test_parse_two_node_document():
    nodes = parse_nodeset({"n": 1, "points": [[-0.5], [0.5]]})
    assert (nodes.s, nodes.n) == (2, 1)
    assert nodes.points.tolist() == [[-0.5], [0.5]]


def test_decimals_are_kept_exactly():
    nodes = parse_nodeset('{"n": 2, "points": [[0.1, 0], [0, 0.3]]}')
    assert nodes.exact == ((Fraction(1, 10), Fraction(0)), (Fraction(0), Fraction(3, 10)))
    assert nodes.points[0, 0] == 0.1


def test_duplicate_nodes():
    with pytest.raises(InvalidNodeSetError) as exc:
        parse_nodeset({"n": 2, "points": [[0, 0], [0, 0]]})
    assert exc.value.index == 1


def test_norm_violation_names_the_point():
    with pytest.raises(InvalidNodeSetError) as exc:
        parse_nodeset({"n": 2, "points": [[3, 0]]})
    assert exc.value.index == 0


def test_decimal_duplicates_after_rounding():
    # distinct decimals, same double
    with pytest.raises(InvalidNodeSetError):
        parse_nodeset('{"n": 1, "points": [[0.1], [0.10000000000000000001]]}')


@pytest.mark.parametrize(
    "document,field",
    [
        ({"points": [[0.0]]}, "n"),
        ({"n": True, "points": [[0.0]]}, "n"),
        ({"n": 1, "points": "x"}, "points"),
        ({"n": 2, "points": [[0.0, 0.0], [0.5]]}, "points[1]"),
        ({"n": 1, "points": [[0.0], ["a"]]}, "points[1][0]"),
        ({"n": 1, "points": [[0.0], [float("inf")]]}, "points[1][0]"),
        ({"n": 1, "points": [[0.0], [0.5]], "values": [1.0, float("nan")]}, "values[1]"),
        ({"n": 1, "points": [[0.0], [0.5]], "values": [1.0]}, "values"),
    ],
)
def test_parse_errors_name_the_field(document, field):
    with pytest.raises(NodeSetParseError) as exc:
        parse_nodeset(document)
    assert exc.value.field == field


@pytest.mark.parametrize("token", ["Infinity", "-Infinity", "NaN"])
def test_non_finite_constants_name_the_coordinate(token):
    with pytest.raises(NodeSetParseError) as exc:
        parse_nodeset('{"n": 2, "points": [[0.0, 0.5], [0.25, %s]]}' % token)
    assert exc.value.field == "points[1][1]"


def test_syntax_error_carries_the_line(write_doc):
    path = write_doc('{\n  "n": 1,\n  "points": [[0.5],, [0.1]]\n}')
    with pytest.raises(NodeSetParseError) as exc:
        load_nodeset(path)
    assert exc.value.line == 3
    assert str(path) in str(exc.value)


def test_load_with_values(write_doc):
    path = write_doc({"n": 2, "points": [[-0.3, 0], [0.3, 0], [0, 0.4]], "values": [1, -0.5, 0.25]})
    document = load_nodeset(path)
    assert document.values == (1.0, -0.5, 0.25)
    assert document.source == str(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_nodeset(tmp_path / "nope.json")


def test_document_round_trip(planar_triangle):
    document = nodeset_document(planar_triangle, (1.0, 2.0, 3.0))
    assert parse_nodeset(document).points.tolist() == planar_triangle.points.tolist()
    assert document["values"] == [1.0, 2.0, 3.0]
