import math

from vanderbound.certify.evaluation.metrics import check_ratio, summarize


def _check(name, family, actual, bound, relation="<=", passed=True):
    return {"name": name, "family": family, "actual": actual, "relation": relation, "bound": bound, "passed": passed}


def test_empty_summary():
    summary = summarize([])
    assert summary.all_pass
    assert summary.to_dict() == {
        "instances": 0,
        "passed": 0,
        "failed": 0,
        "errors": 0,
        "families": {},
        "failed_instances": [],
        "error_instances": [],
        "all_pass": True,
    }


def test_check_ratio():
    assert check_ratio(_check("a", "coefficient", 1.0, 4.0)) == 0.25
    assert check_ratio(_check("b", "sigma_min", 2.0, 1.0, ">=")) == 0.5
    assert check_ratio(_check("c", "rank", 3, 3, "==")) == 1.0


def test_worst_ratio_per_family_and_ties():
    records = [
        {"instance": "i0", "status": "done", "checks": [_check("a", "coefficient", 1.0, 2.0), _check("s", "sigma_min", 1.0, 0.25, ">=")]},
        {"instance": "i1", "status": "done", "checks": [_check("a", "coefficient", 3.0, 6.0)]},
        {"instance": "i2", "status": "failed", "checks": [_check("s", "sigma_min", 0.1, 0.2, ">=", passed=False)]},
        {"instance": "i3", "status": "error", "error": "StageError: boom"},
    ]
    summary = summarize(records)
    assert (summary.instances, summary.passed, summary.failed, summary.errors) == (4, 2, 1, 1)
    assert summary.failed_instances == ["i2"] and summary.error_instances == ["i3"]
    assert not summary.all_pass
    coefficient = summary.families["coefficient"]
    assert (coefficient.checks, coefficient.passed, coefficient.worst_ratio, coefficient.worst_instance) == (2, 2, 0.5, "i0")
    sigma = summary.families["sigma_min"]
    assert (sigma.checks, sigma.passed, sigma.worst_ratio, sigma.worst_instance) == (2, 1, 2.0, "i2")
    assert list(summary.families) == ["coefficient", "sigma_min"]


def test_zero_bound_ratio_is_infinite():
    summary = summarize([{"instance": "i0", "status": "failed", "checks": [_check("k", "kronecker", 1e-3, 0.0, passed=False)]}])
    assert math.isinf(summary.families["kronecker"].worst_ratio)
