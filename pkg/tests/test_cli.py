import json
import math
from pathlib import Path

import pytest

from vanderbound.certify.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, _pair, main

NODESETS = Path(__file__).resolve().parents[1] / "dataset" / "nodesets"


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_analyze_prints_report(capsys):
    assert main(["analyze", "--input", str(NODESETS / "two_node_1d.json"), "--budget", "32"]) == EXIT_PASS
    report = _json_out(capsys)
    assert report["all_pass"] is True
    assert report["global"]["rinv_norm_bound"] == pytest.approx(16.0)


def test_analyze_planar_degree_two(capsys):
    code = main(["analyze", "--input", str(NODESETS / "planar_three.json"), "--degree", "2", "--budget", "32"])
    assert code == EXIT_PASS
    report = _json_out(capsys)
    assert report["global"]["kappa_hat"] == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-5)
    assert report["global"]["nu"] == 6
    assert report["global"]["kernel_dim"] == 3


def test_analyze_output_file_and_table(tmp_path, capsys):
    out = tmp_path / "report.txt"
    args = ["analyze", "--input", str(NODESETS / "planar_three.json"), "--format", "table", "--output", str(out)]
    assert main(args) == EXIT_PASS
    assert capsys.readouterr().out == ""
    assert "all_pass: True" in out.read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--input", str(NODESETS / "two_node_1d.json"), "--degree", "0"],
        ["analyze", "--input", str(NODESETS / "missing.json")],
        ["analyze", "--input", str(NODESETS / "two_node_1d.json"), "--max-nu", "1"],
        ["analyze"],
        ["analyze", "--input", str(NODESETS / "two_node_1d.json"), "--degree", "many"],
        ["suite", "--degree-offset", "-1"],
        ["oracle-check", "--input", str(NODESETS / "planar_three.json"), "--degree", "1"],
        ["certify"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_malformed_document_reports_location(write_doc, capsys):
    path = write_doc('{"n": 1,\n "points": [[0.5],, [0.1]]}')
    assert main(["analyze", "--input", str(path)]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert str(path) in err
    assert "line 2" in err


def test_node_outside_ball_is_rejected(write_doc, capsys):
    path = write_doc({"n": 1, "points": [[0.5], [2.0]]})
    assert main(["analyze", "--input", str(path)]) == EXIT_USAGE
    assert "norm" in capsys.readouterr().err


def test_empty_suite(capsys):
    assert main(["suite", "--count", "0"]) == EXIT_PASS
    summary = _json_out(capsys)
    assert summary["instances"] == 0
    assert summary["all_pass"] is True


def test_suite_with_run_dir(tmp_path, capsys):
    argv = ["suite", "--count", "2", "--s-range", "2:3", "--n-range", "1", "--min-separation", "0.2", "--budget", "32"]
    argv += ["--run-id", "smoke", "--runs-dir", str(tmp_path)]
    assert main(argv) == EXIT_PASS
    summary = _json_out(capsys)
    assert summary["instances"] == 2
    (run_dir,) = tmp_path.iterdir()
    assert run_dir.name.startswith("smoke_")
    assert (run_dir / "summary.json").exists()
    assert (run_dir / "logs" / "vanderbound.log").exists()
    assert "invocation" in json.loads((run_dir / "meta.json").read_text(encoding="utf-8"))


def test_oracle_check_small(capsys):
    argv = ["oracle-check", "--univariate-count", "3", "--rank-count", "3", "--planar-count", "1", "--resolution", "100000"]
    argv += ["--distance-count", "2", "--input", str(NODESETS / "planar_three.json"), "--degree", "2"]
    assert main(argv) == EXIT_PASS
    summary = _json_out(capsys)
    assert summary["all_pass"] is True
    assert summary["input"]["rank"] == 3
    assert summary["distance"]["instances"] == 2


def test_pair():
    assert _pair("2:5") == (2, 5)
    assert _pair("3") == (3, 3)
    with pytest.raises(ValueError):
        _pair("a:b")


def test_exit_codes_are_distinct():
    assert len({EXIT_PASS, EXIT_FAIL, EXIT_USAGE}) == 3


def test_gap_below_float_resolution_reports_failure(write_doc, capsys):
    path = write_doc({"n": 1, "points": [[0], [1e-300]]})
    assert main(["analyze", "--input", str(path)]) == EXIT_FAIL
    report = _json_out(capsys)
    assert report["all_pass"] is False
    assert report["global"]["rank"] == 1
    assert "rank == s: 1.0 == 2.0" in report["failures"]


@pytest.mark.parametrize("token", ["Infinity", "-Infinity", "NaN"])
def test_non_finite_coordinate_is_a_usage_error(write_doc, capsys, token):
    path = write_doc('{"n": 1, "points": [[0.5], [%s]]}' % token)
    assert main(["analyze", "--input", str(path)]) == EXIT_USAGE
    assert "points[1][0]" in capsys.readouterr().err
