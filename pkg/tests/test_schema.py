import json
import math

import pytest

from vanderbound.certify.evaluation.schema import emit_report, parse_report, render_table, validate_report
from vanderbound.core.vandermonde import analyze


@pytest.fixture
def report(two_node):
    return analyze(two_node, 1, config_echo={"input": "two_node_1d.json", "degree": 1})


def test_emit_parse_round_trip(report):
    text = emit_report(report)
    assert parse_report(text) == report.to_dict()
    assert emit_report(parse_report(text)) == text
    assert text.startswith("{\n  \"config\"")


def test_emitted_floats_round_trip_exactly(report):
    parsed = parse_report(emit_report(report))
    assert parsed["global"]["sigma_min_actual"] == report.global_.sigma_min_actual
    assert parsed["per_node"][1]["dist_actual"] == report.per_node[1].dist_actual


def test_emission_is_byte_identical(two_node):
    a = emit_report(analyze(two_node, 1))
    b = emit_report(analyze(two_node, 1))
    assert a == b


def test_validate_report(report):
    ok, errors = validate_report(report.to_dict())
    assert ok, errors


def test_validate_report_catches_problems(report):
    obj = report.to_dict()
    del obj["global"]["rank"]
    obj["per_node"][0]["exact"] = "yes"
    obj["all_pass"] = False
    obj["surprise"] = 1
    ok, errors = validate_report(obj)
    assert not ok
    assert "global.missing_keys: ['rank']" in errors
    assert "per_node[0].exact_type_error" in errors
    assert "extra_keys: ['surprise']" in errors
    assert "all_pass_inconsistent" in errors
    ok, errors = validate_report(obj, strict=False)
    assert "extra_keys: ['surprise']" not in errors


def test_validate_report_rejects_non_objects():
    assert validate_report([]) == (False, ["top_level_not_object"])
    with pytest.raises(ValueError):
        parse_report("[1, 2]")


def test_non_finite_values_are_strict_json(report):
    obj = report.to_dict()
    obj["global"]["cond_actual"] = math.inf
    obj["global"]["pinv_norm"] = -math.inf
    obj["per_node"][0]["qj_norm"] = math.nan
    text = emit_report(obj)
    assert "Infinity" not in text and "NaN" not in text
    raw = json.loads(text)
    assert (raw["global"]["cond_actual"], raw["global"]["pinv_norm"]) == ("inf", "-inf")
    parsed = parse_report(text)
    assert parsed["global"]["cond_actual"] == math.inf
    assert parsed["global"]["pinv_norm"] == -math.inf
    assert math.isnan(parsed["per_node"][0]["qj_norm"])
    ok, errors = validate_report(parsed)
    assert ok, errors


def test_floats_carry_at_most_seventeen_significant_digits(report):
    text = emit_report(report)
    raw = json.loads(text, parse_float=lambda token: token)
    tokens = [n["dist_actual"] for n in raw["per_node"]] + [raw["global"]["sigma_min_actual"], raw["global"]["cond_actual"]]
    for token in tokens:
        digits = token.lower().split("e")[0].replace("-", "").replace(".", "").lstrip("0")
        assert len(digits) <= 17
        assert repr(float(token)) == token
    assert emit_report(parse_report(text)) == text


def test_render_table(report):
    text = render_table(report)
    assert "per node" in text
    assert "sigma_min" in text
    assert "all_pass: True" in text
    assert "failed checks" not in text


def test_render_table_lists_failures(report):
    obj = report.to_dict()
    obj["failures"] = ["cond <= cond_bound: 40.0 <= 32.0"]
    obj["all_pass"] = False
    text = render_table(obj)
    assert "failed checks" in text
    assert "cond <= cond_bound" in text
