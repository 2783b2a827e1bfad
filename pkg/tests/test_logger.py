"""Tests for the logger module."""

import logging
import logging.handlers

import pytest

from src.shifted_yangian.core import logger as logger_module
from src.shifted_yangian.core.logger import (
    FileLogConfig,
    configure_root_logger,
    setup_logger,
)


@pytest.fixture
def restore_root_logger():
    """Put the root logger back the way the test found it."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    for handler in root.handlers:
        handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def test_console_only_logger():
    """Test a console logger that does not propagate."""
    log = setup_logger("shifted_yangian.tests.console", level=logging.DEBUG)

    assert log.level == logging.DEBUG
    assert len(log.handlers) == 1
    assert isinstance(log.handlers[0], logging.StreamHandler)
    assert not log.propagate


def test_setup_twice_replaces_handlers(tmp_path):
    """Test that reconfiguring a logger does not stack handlers."""
    name = "shifted_yangian.tests.rotating"
    setup_logger(name, file_config=FileLogConfig(path=tmp_path / "a.log"))
    log = setup_logger(
        name, console=False, file_config=FileLogConfig(path=tmp_path / "b.log")
    )

    assert len(log.handlers) == 1
    handler = log.handlers[0]
    assert isinstance(handler, logging.handlers.RotatingFileHandler)
    assert handler.baseFilename == str(tmp_path / "b.log")
    assert handler.maxBytes == 5_000_000
    assert handler.backupCount == 3
    handler.close()


def test_plain_formatter_without_colorlog(mocker):
    """Test the fallback formatter when colorlog is missing."""
    mocker.patch.object(logger_module, "HAS_COLORLOG", False)
    log = setup_logger("shifted_yangian.tests.plain")

    formatter = log.handlers[0].formatter
    assert type(formatter) is logging.Formatter
    assert "%(log_color)s" not in formatter._fmt


def test_root_logger_writes_run_log(tmp_path, restore_root_logger):
    """Test that a command-line run logs to the configured file."""
    log_dir = tmp_path / "logs"
    configure_root_logger(
        level=logging.WARNING, log_dir=log_dir, log_filename="jh run.log"
    )

    assert restore_root_logger.level == logging.WARNING
    logging.getLogger("shifted_yangian.tests").warning("depth window too small")
    for handler in restore_root_logger.handlers:
        handler.flush()
    assert "depth window too small" in (log_dir / "jh run.log").read_text()


def test_root_logger_sanitizes_log_filename(tmp_path, restore_root_logger):
    """Test that a log file name cannot leave the log directory."""
    configure_root_logger(log_dir=tmp_path, log_filename="../../escape.log")

    files = [
        h.baseFilename
        for h in restore_root_logger.handlers
        if isinstance(h, logging.handlers.RotatingFileHandler)
    ]
    assert len(files) == 1
    assert files[0].startswith(str(tmp_path))


def test_root_logger_without_log_dir(restore_root_logger):
    """Test console-only logging when no directory is given."""
    configure_root_logger(level=logging.INFO)

    assert not any(
        isinstance(h, logging.handlers.RotatingFileHandler)
        for h in restore_root_logger.handlers
    )
