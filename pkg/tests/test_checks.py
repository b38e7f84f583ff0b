import math

import pytest

from vanderbound.core.checks import BoundCheck, bound_power, failures


def test_upper_bound_with_relative_slack():
    assert BoundCheck("a", "coefficient", 1.0 + 5e-10, 1.0).passed
    assert not BoundCheck("a", "coefficient", 1.0 + 1e-8, 1.0).passed


def test_lower_bound_and_absolute_slack():
    check = BoundCheck("b", "sigma_min", 0.5, 0.5 + 1e-10, ">=", slack_rel=0.0, slack_abs=1e-9)
    assert check.passed
    assert not BoundCheck("b", "sigma_min", 0.4, 0.5, ">=").passed


def test_equality_relation():
    assert BoundCheck("rank == s", "rank", 3, 3, "==", 0.0).passed
    assert not BoundCheck("rank == s", "rank", 2, 3, "==", 0.0).passed


def test_ratio():
    assert BoundCheck("a", "coefficient", 1.0, 4.0).ratio == 0.25
    assert BoundCheck("b", "sigma_min", 2.0, 1.0, ">=").ratio == 0.5
    assert BoundCheck("c", "kronecker", 0.0, 0.0).ratio == 0.0
    assert BoundCheck("d", "kronecker", 1.0, 0.0).ratio == math.inf
    assert BoundCheck("e", "rank", 2, 3, "==").ratio == math.inf


def test_nan_never_passes():
    assert not BoundCheck("a", "coefficient", float("nan"), 1.0).passed


def test_rejects_unknown_relation_and_family():
    with pytest.raises(ValueError):
        BoundCheck("a", "coefficient", 1.0, 1.0, "<")
    with pytest.raises(ValueError):
        BoundCheck("a", "nope", 1.0, 1.0)


def test_describe_and_failures():
    ok = BoundCheck("ok", "coefficient", 1.0, 2.0)
    bad = BoundCheck("|Q_0| <= bound", "coefficient", 3.0, 2.0)
    assert bad.describe() == "|Q_0| <= bound: 3.0 <= 2.0"
    assert failures([ok, bad]) == [bad.describe()]
    assert bad.to_dict() == {
        "name": "|Q_0| <= bound",
        "family": "coefficient",
        "actual": 3.0,
        "relation": "<=",
        "bound": 2.0,
        "passed": False,
    }


def test_non_finite_actual_never_passes():
    assert not BoundCheck("a", "coefficient", math.inf, math.inf).passed
    assert not BoundCheck("a", "sigma_min", -math.inf, 0.0, ">=").passed
    assert BoundCheck("a", "kronecker", 0.5, math.inf, "<=", 0.0).passed


def test_bound_power_saturates():
    assert bound_power(2.0, 10) == 1024.0
    assert bound_power(2e200, 2) == math.inf
    assert bound_power(1e-200, 2) == 0.0
