from fractions import Fraction

import numpy as np

from vanderbound.certify.evaluation.oracle_check import (
    check_distance,
    check_document_rank,
    check_planar,
    check_rank,
    check_univariate,
    run_oracle_check,
)
from vanderbound.common.dataset import parse_nodeset


def test_univariate_comparison():
    result = check_univariate(np.random.default_rng(0), 40)
    assert result["failed"] == []
    assert result["worst_relative_error"] <= result["tolerance"]


def test_rank_comparison():
    assert check_rank(np.random.default_rng(1), 30)["failed"] == []


def test_planar_comparison():
    result = check_planar(np.random.default_rng(2), 8, 100_000)
    assert result["failed"] == []
    assert result["worst_gap"] <= 1e-4


def test_distance_comparison():
    result = check_distance(np.random.default_rng(5), 12)
    assert result["failed"] == []
    assert result["worst_error"] <= 1e-8


def test_document_rank_uses_exact_coordinates():
    nodes = parse_nodeset('{"n": 2, "points": [[0.1, 0.2], [0.3, -0.4], [-0.5, 0.6]]}')
    assert nodes.exact[0] == (Fraction(1, 10), Fraction(1, 5))
    result = check_document_rank(nodes, 2)
    assert result["rank"] == 3 and result["failed"] == []


def test_document_rank_flags_deficient_degree():
    nodes = parse_nodeset('{"n": 2, "points": [[0, 0], [0.5, 0], [1, 0]]}')
    assert check_document_rank(nodes, 1)["failed"] == [0]


def test_run_oracle_check_summary():
    summary = run_oracle_check(seed=3, univariate_count=10, rank_count=10, planar_count=3, resolution=100_000, distance_count=4)
    assert summary["all_pass"]
    assert set(summary) == {"config", "univariate", "rank", "planar", "distance", "all_pass"}
    assert summary["config"]["resolution"] == 100_000
    assert summary["config"]["distance_count"] == 4


def test_run_oracle_check_is_seeded():
    kwargs = dict(seed=4, univariate_count=5, rank_count=5, planar_count=2, resolution=5_000, distance_count=2)
    assert run_oracle_check(**kwargs) == run_oracle_check(**kwargs)


def test_run_oracle_check_with_document():
    nodes = parse_nodeset('{"n": 1, "points": [[-0.5], [0.5]]}')
    summary = run_oracle_check(univariate_count=0, rank_count=0, planar_count=0, distance_count=0, nodes=nodes, resolution=1000)
    assert summary["input"] == {"s": 2, "n": 1, "N": 1, "rank": 2, "failed": []}
    assert summary["all_pass"]
