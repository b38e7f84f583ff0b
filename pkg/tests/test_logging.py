import logging

import pytest

from vanderbound.common.logging import get_logger, setup_logging


def _close_handlers():
    for handler in logging.getLogger().handlers:
        handler.close()


def test_file_logging_with_context(tmp_path):
    setup_logging(tmp_path / "logs", level="debug", console=False)
    log = get_logger("vanderbound.tests", stage="suite").bind(instance="i00001")
    log.debug("drawn s=%s", 3)
    get_logger("vanderbound.tests").info("plain")
    _close_handlers()

    lines = (tmp_path / "logs" / "vanderbound.log").read_text(encoding="utf-8").splitlines()
    assert lines[0].endswith("| DEBUG | suite | - | i00001 | drawn s=3")
    assert lines[1].endswith("| INFO | - | - | - | plain")


def test_level_filters_records(tmp_path):
    setup_logging(tmp_path, level="WARNING", console=False)
    log = get_logger("vanderbound.tests")
    log.info("hidden")
    log.warning("shown")
    _close_handlers()
    text = (tmp_path / "vanderbound.log").read_text(encoding="utf-8")
    assert "hidden" not in text
    assert "shown" in text


def test_bind_does_not_mutate_parent():
    parent = get_logger("vanderbound.tests", stage="analyze")
    child = parent.bind(instance="x")
    assert parent.extra == {"stage": "analyze"}
    assert child.extra == {"stage": "analyze", "instance": "x"}


def test_console_only_has_no_file(tmp_path):
    setup_logging(None)
    assert [type(h).__name__ for h in logging.getLogger().handlers] == ["StreamHandler"]


def test_unknown_level_is_rejected(tmp_path):
    with pytest.raises(ValueError, match="Unknown log level"):
        setup_logging(tmp_path, level="chatty", console=False)
    assert not (tmp_path / "vanderbound.log").exists()
