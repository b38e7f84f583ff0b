import json
import logging
import math

import numpy as np
import pytest

from vanderbound.common.settings import SearchConfig, Settings
from vanderbound.core.geometry import NodeSet

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def two_node():
    return NodeSet(np.array([[-0.5], [0.5]]))


@pytest.fixture
def planar_three():
    return NodeSet(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


@pytest.fixture
def planar_triangle():
    return NodeSet(np.array([[-0.3, 0.0], [0.3, 0.0], [0.0, 0.4]]))


@pytest.fixture
def spatial_four():
    return NodeSet(np.array([[0.1, 0.2, -0.3], [-0.4, 0.1, 0.2], [0.3, -0.5, 0.1], [0.0, 0.6, 0.5]]))


@pytest.fixture
def fast_settings():
    return Settings(search=SearchConfig(budget=128, seed=7))


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in ("VANDERBOUND_SETTINGS", "VANDERBOUND_SEED", "VANDERBOUND_BUDGET", "VANDERBOUND_MAX_NU", "VANDERBOUND_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    yield
    logging.getLogger().handlers.clear()


@pytest.fixture
def write_doc(tmp_path):
    def _write(payload, name="nodes.json"):
        path = tmp_path / name
        text = payload if isinstance(payload, str) else json.dumps(payload)
        path.write_text(text, encoding="utf-8")
        return path

    return _write
